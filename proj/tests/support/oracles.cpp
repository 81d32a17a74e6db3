// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>

namespace srg::testing {

namespace {

std::vector<std::string> ancestors_including_self(const Ontology& o, const std::string& c) {
    std::vector<std::string> chain{c};
    for (const std::string* p = o.parent(c); p; p = o.parent(*p)) chain.push_back(*p);
    return chain;
}

// Cheapest way to turn the student relations into the gold relations on one
// mapped node pair: try every partial matching.
Units parallel_edge_cost(const std::vector<std::string>& s, const std::vector<std::string>& g, Units del, Units ins,
                         Units mismatch) {
    Units best = std::numeric_limits<Units>::max();
    std::vector<char> used(g.size(), 0);
    std::function<void(std::size_t, Units)> rec = [&](std::size_t i, Units acc) {
        if (i == s.size()) {
            Units total = acc;
            for (std::size_t j = 0; j < g.size(); ++j) {
                if (!used[j]) total += ins;
            }
            best = std::min(best, total);
            return;
        }
        rec(i + 1, acc + del);
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (used[j]) continue;
            used[j] = 1;
            rec(i + 1, acc + (s[i] == g[j] ? 0 : mismatch));
            used[j] = 0;
        }
    };
    rec(0, 0);
    return best;
}

}  // namespace

std::string lca_by_ancestors(const Ontology& o, const std::string& a, const std::string& b) {
    const std::vector<std::string> chain_a = ancestors_including_self(o, a);
    const std::set<std::string> set_b = [&] {
        const auto v = ancestors_including_self(o, b);
        return std::set<std::string>(v.begin(), v.end());
    }();
    for (const std::string& c : chain_a) {
        if (set_b.contains(c)) return c;  // chain_a runs from deepest to root
    }
    return o.root();
}

double wu_palmer_by_ancestors(const Ontology& o, const std::string& a, const std::string& b) {
    if (a == b) return 1.0;
    const auto depth = [&](const std::string& c) {
        return static_cast<double>(ancestors_including_self(o, c).size() - 1);
    };
    const double da = depth(a);
    const double db = depth(b);
    if (da + db == 0.0) return 1.0;
    return 2.0 * depth(lca_by_ancestors(o, a, b)) / (da + db);
}

Units brute_force_ged(const Srg& student, const Srg& gold, const EditCostModel& costs, const Ontology& o) {
    const auto& sn = student.nodes();
    const auto& gn = gold.nodes();
    const std::size_t n = sn.size();
    const std::size_t m = gn.size();
    const Units node_del = to_units(costs.node_delete);
    const Units node_ins = to_units(costs.node_insert);
    const Units edge_del = to_units(costs.edge_delete);
    const Units edge_ins = to_units(costs.edge_insert);
    const Units mismatch = to_units(costs.relation_mismatch);

    std::vector<Units> sub(n * m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double semantic = 1.0 - wu_palmer_by_ancestors(o, sn[i].concept_id, gn[j].concept_id);
            const int gap = std::max(0, ordinal(gn[j].bloom) - ordinal(sn[i].bloom));
            sub[i * m + j] = to_units(semantic + costs.beta * static_cast<double>(gap) / 5.0);
        }
    }
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::string>> s_edges, g_edges;
    for (const SrgEdge& e : student.edges()) {
        s_edges[{*student.index_of(e.source), *student.index_of(e.target)}].push_back(e.relation);
    }
    for (const SrgEdge& e : gold.edges()) {
        g_edges[{*gold.index_of(e.source), *gold.index_of(e.target)}].push_back(e.relation);
    }

    std::vector<int> f(n, -1);
    std::vector<char> used(m, 0);
    Units best = std::numeric_limits<Units>::max();

    const auto evaluate = [&] {
        Units cost = 0;
        for (std::size_t i = 0; i < n; ++i) cost += f[i] < 0 ? node_del : sub[i * m + static_cast<std::size_t>(f[i])];
        for (std::size_t j = 0; j < m; ++j) {
            if (!used[j]) cost += node_ins;
        }
        std::set<std::pair<std::size_t, std::size_t>> covered;
        for (const auto& [key, rels] : s_edges) {
            const int a = f[key.first];
            const int b = f[key.second];
            if (a < 0 || b < 0) {
                cost += edge_del * static_cast<Units>(rels.size());
                continue;
            }
            const std::pair<std::size_t, std::size_t> image{static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
            covered.insert(image);
            auto it = g_edges.find(image);
            static const std::vector<std::string> kNone;
            cost += parallel_edge_cost(rels, it == g_edges.end() ? kNone : it->second, edge_del, edge_ins, mismatch);
        }
        for (const auto& [key, rels] : g_edges) {
            if (!covered.contains(key)) cost += edge_ins * static_cast<Units>(rels.size());
        }
        return cost;
    };

    std::function<void(std::size_t)> assign = [&](std::size_t i) {
        if (i == n) {
            best = std::min(best, evaluate());
            return;
        }
        f[i] = -1;
        assign(i + 1);
        for (std::size_t j = 0; j < m; ++j) {
            if (used[j]) continue;
            used[j] = 1;
            f[i] = static_cast<int>(j);
            assign(i + 1);
            used[j] = 0;
            f[i] = -1;
        }
    };
    assign(0);
    return best;
}

BruteAlignment brute_force_alignment(const Srg& student, const Srg& gold, const Ontology& o,
                                     const AlignmentParams& p) {
    const auto& sn = student.nodes();
    const auto& gn = gold.nodes();
    const std::size_t n = sn.size();
    const std::size_t m = gn.size();
    const Units floor = to_units(p.w_min);
    std::vector<Units> w(n * m, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double sim = o.contains(sn[i].concept_id) && o.contains(gn[j].concept_id)
                                   ? wu_palmer_by_ancestors(o, sn[i].concept_id, gn[j].concept_id)
                                   : 0.0;
            const double same = sn[i].bloom == gn[j].bloom ? 1.0 : 0.0;
            const Units u = to_units(p.alpha * sim + (1.0 - p.alpha) * same);
            w[i * m + j] = (u > 0 && u >= floor) ? u : -1;
        }
    }

    BruteAlignment best{-1, {}};
    std::vector<int> f(n, -1);
    std::vector<char> used(m, 0);
    std::function<void(std::size_t, Units)> rec = [&](std::size_t i, Units total) {
        if (i == n) {
            std::vector<std::pair<std::string, std::string>> pairs;
            for (std::size_t k = 0; k < n; ++k) {
                if (f[k] >= 0) pairs.emplace_back(sn[k].id, gn[static_cast<std::size_t>(f[k])].id);
            }
            std::sort(pairs.begin(), pairs.end());
            if (total > best.total || (total == best.total && pairs < best.pairs)) best = {total, std::move(pairs)};
            return;
        }
        rec(i + 1, total);
        for (std::size_t j = 0; j < m; ++j) {
            if (used[j] || w[i * m + j] < 0) continue;
            used[j] = 1;
            f[i] = static_cast<int>(j);
            rec(i + 1, total + w[i * m + j]);
            used[j] = 0;
            f[i] = -1;
        }
    };
    rec(0, 0);
    return best;
}

Ontology random_ontology(std::mt19937_64& rng, std::size_t n, std::size_t relations) {
    std::vector<Ontology::Concept> concepts;
    concepts.push_back({"c0", std::nullopt});
    for (std::size_t i = 1; i < n; ++i) {
        std::uniform_int_distribution<std::size_t> parent(0, i - 1);
        concepts.push_back({"c" + std::to_string(i), "c" + std::to_string(parent(rng))});
    }
    std::vector<std::string> rels;
    for (std::size_t r = 0; r < relations; ++r) rels.push_back("r" + std::to_string(r));
    return Ontology("c0", std::move(concepts), std::move(rels));
}

Srg random_graph(std::mt19937_64& rng, const Ontology& o, Role role, const GraphShape& shape,
                 const std::string& id_prefix) {
    std::uniform_int_distribution<std::size_t> node_count(shape.min_nodes, shape.max_nodes);
    std::uniform_int_distribution<std::size_t> concept_pick(0, o.concepts().size() - 1);
    std::uniform_int_distribution<int> level(1, 6);
    const std::size_t nv = node_count(rng);
    std::vector<SrgNode> nodes;
    for (std::size_t i = 0; i < nv; ++i) {
        SrgNode node;
        node.id = id_prefix + std::to_string(i);
        node.concept_id = o.concepts()[concept_pick(rng)].id;
        node.bloom = bloom_from_ordinal(level(rng));
        nodes.push_back(std::move(node));
    }
    std::vector<SrgEdge> edges;
    if (nv >= 2 && !o.relations().empty()) {
        std::uniform_int_distribution<std::size_t> edge_count(0, shape.max_edges);
        std::uniform_int_distribution<std::size_t> end(0, nv - 1);
        std::uniform_int_distribution<std::size_t> rel(0, o.relations().size() - 1);
        const std::size_t want = edge_count(rng);
        std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
        for (std::size_t tries = 0; edges.size() < want && tries < 50; ++tries) {
            const std::size_t a = end(rng);
            const std::size_t b = end(rng);
            const std::size_t r = rel(rng);
            if (a == b || !seen.emplace(a, b, r).second) continue;
            edges.push_back({nodes[a].id, nodes[b].id, o.relations()[r]});
        }
    }
    return Srg("rand", role, std::move(nodes), std::move(edges));
}

}  // namespace srg::testing
