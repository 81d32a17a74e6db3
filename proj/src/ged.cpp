// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#include "srg/ged.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>

#include "srg/errors.hpp"

namespace srg {

using nlohmann::json;

void EditCostModel::validate() const {
    for (double c : {node_insert, node_delete, edge_insert, edge_delete, beta, relation_mismatch}) {
        if (!(c >= 0.0)) {
            throw ValueError("edit costs must be non-negative");
        }
    }
}

double EditCostModel::node_substitution(const SrgNode& student, const SrgNode& gold, const Ontology& o) const {
    const double semantic = 1.0 - o.sim_or_zero(student.concept_id, gold.concept_id);
    const int gap = std::max(0, ordinal(gold.bloom) - ordinal(student.bloom));
    return semantic + beta * static_cast<double>(gap) / kMaxBloomGap;
}

std::size_t normalizer_z(const Srg& student, const Srg& gold) {
    const std::size_t z = student.node_count() + gold.node_count() + student.edge_count() + gold.edge_count();
    return z == 0 ? 1 : z;
}

namespace {

constexpr Units kForbidden = Units{1} << 50;

// Precomputed integer view of one (student, gold) pair.
class GedProblem {
public:
    GedProblem(const Srg& student, const Srg& gold, const EditCostModel& costs, const Ontology& o)
        : gs_(student), go_(gold), n_(student.node_count()), m_(gold.node_count()) {
        costs.validate();
        node_ins_ = to_units(costs.node_insert);
        node_del_ = to_units(costs.node_delete);
        edge_ins_ = to_units(costs.edge_insert);
        edge_del_ = to_units(costs.edge_delete);
        mismatch_ = to_units(costs.relation_mismatch);

        sub_.assign(n_ * m_, 0);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < m_; ++j) {
                sub_[i * m_ + j] = to_units(costs.node_substitution(student.nodes()[i], gold.nodes()[j], o));
            }
        }

        std::map<std::string, int> rel_ids;
        auto rel_id = [&](const std::string& r) {
            return rel_ids.emplace(r, static_cast<int>(rel_ids.size())).first->second;
        };
        s_adj_.assign(n_ * n_, {});
        for (const SrgEdge& e : student.edges()) {
            s_adj_[*student.index_of(e.source) * n_ + *student.index_of(e.target)].push_back(rel_id(e.relation));
        }
        o_adj_.assign(m_ * m_, {});
        for (const SrgEdge& e : gold.edges()) {
            const std::size_t a = *gold.index_of(e.source);
            const std::size_t b = *gold.index_of(e.target);
            o_adj_[a * m_ + b].push_back(rel_id(e.relation));
            gold_edges_.emplace_back(a, b);
        }
        for (auto& v : s_adj_) std::sort(v.begin(), v.end());
        for (auto& v : o_adj_) std::sort(v.begin(), v.end());

        // Process high-degree student nodes first so edge costs surface early.
        std::vector<std::size_t> degree(n_, 0);
        for (const SrgEdge& e : student.edges()) {
            ++degree[*student.index_of(e.source)];
            ++degree[*student.index_of(e.target)];
        }
        order_.resize(n_);
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::size_t a, std::size_t b) { return degree[a] > degree[b]; });
        position_.assign(n_, 0);
        for (std::size_t k = 0; k < n_; ++k) position_[order_[k]] = k;

        // Student edges still uncounted once the first k nodes are placed.
        remaining_student_edges_.assign(n_ + 1, 0);
        for (const SrgEdge& e : student.edges()) {
            const std::size_t last =
                std::max(position_[*student.index_of(e.source)], position_[*student.index_of(e.target)]);
            for (std::size_t k = 0; k <= last; ++k) ++remaining_student_edges_[k];
        }
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t m() const noexcept { return m_; }

    /// Cost of placing order_[depth] onto `target` (-1 = delete) given the
    /// mapping of the already placed prefix.
    Units step_cost(const std::vector<int>& prefix, int target) const {
        const std::size_t depth = prefix.size();
        const std::size_t i = order_[depth];
        Units c = target < 0 ? node_del_ : sub_[i * m_ + static_cast<std::size_t>(target)];
        for (std::size_t k = 0; k < depth; ++k) {
            const std::size_t j = order_[k];
            c += pair_edge_cost(i, j, target, prefix[k]);
            c += pair_edge_cost(j, i, prefix[k], target);
        }
        return c;
    }

    /// Insertions for every gold node and edge left unmatched by a complete mapping.
    Units completion_cost(const std::vector<char>& used) const {
        Units c = 0;
        for (std::size_t j = 0; j < m_; ++j) {
            if (!used[j]) c += node_ins_;
        }
        for (const auto& [a, b] : gold_edges_) {
            if (!used[a] || !used[b]) c += edge_ins_;
        }
        return c;
    }

    /// Admissible lower bound on the cost of completing `prefix`.
    Units lower_bound(const std::vector<int>& prefix, const std::vector<char>& used, bool exact_nodes) const {
        const std::size_t depth = prefix.size();
        std::vector<std::size_t> rows(order_.begin() + static_cast<std::ptrdiff_t>(depth), order_.end());
        std::vector<std::size_t> cols;
        for (std::size_t j = 0; j < m_; ++j) {
            if (!used[j]) cols.push_back(j);
        }

        Units nodes = 0;
        if (exact_nodes || rows.size() + cols.size() <= 24) {
            nodes = node_assignment_bound(rows, cols);
        } else {
            nodes = node_greedy_bound(rows, cols);
        }

        const Units es = remaining_student_edges_[depth];
        Units eo = 0;
        for (const auto& [a, b] : gold_edges_) {
            if (!used[a] || !used[b]) ++eo;
        }
        const Units edges = es > eo ? (es - eo) * edge_del_ : (eo - es) * edge_ins_;
        return nodes + edges;
    }

    /// Builds the canonical script for a complete mapping (indexed by student node).
    GedResult build(const std::vector<int>& mapping, bool exact) const;

    const std::vector<std::size_t>& order() const noexcept { return order_; }

private:
    Units pair_edge_cost(std::size_t a, std::size_t b, int ta, int tb) const {
        const std::vector<int>& rs = s_adj_[a * n_ + b];
        if (ta < 0 || tb < 0) {
            return static_cast<Units>(rs.size()) * edge_del_;
        }
        const std::vector<int>& ro = o_adj_[static_cast<std::size_t>(ta) * m_ + static_cast<std::size_t>(tb)];
        if (rs.empty() && ro.empty()) {
            return 0;
        }
        std::vector<int> common;
        std::set_intersection(rs.begin(), rs.end(), ro.begin(), ro.end(), std::back_inserter(common));
        const Units extra_s = static_cast<Units>(rs.size() - common.size());
        const Units extra_o = static_cast<Units>(ro.size() - common.size());
        const Units paired = mismatch_ < edge_del_ + edge_ins_ ? std::min(extra_s, extra_o) : 0;
        return paired * mismatch_ + (extra_s - paired) * edge_del_ + (extra_o - paired) * edge_ins_;
    }

    Units node_assignment_bound(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
        const std::size_t r = rows.size();
        const std::size_t c = cols.size();
        if (r + c == 0) return 0;
        CostMatrix cost(r + c, 0);
        for (std::size_t a = 0; a < r + c; ++a) {
            for (std::size_t b = 0; b < r + c; ++b) {
                Units v = 0;
                if (a < r && b < c) {
                    v = sub_[rows[a] * m_ + cols[b]];
                } else if (a < r) {
                    v = (b - c == a) ? node_del_ : kForbidden;
                } else if (b < c) {
                    v = (a - r == b) ? node_ins_ : kForbidden;
                }
                cost(a, b) = v;
            }
        }
        return solve_min_cost_assignment(cost).total;
    }

    Units node_greedy_bound(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
        Units by_rows = 0;
        for (std::size_t i : rows) {
            Units best = node_del_;
            for (std::size_t j : cols) best = std::min(best, sub_[i * m_ + j]);
            by_rows += best;
        }
        Units by_cols = 0;
        for (std::size_t j : cols) {
            Units best = node_ins_;
            for (std::size_t i : rows) best = std::min(best, sub_[i * m_ + j]);
            by_cols += best;
        }
        return std::max(by_rows, by_cols);
    }

    const Srg& gs_;
    const Srg& go_;
    std::size_t n_;
    std::size_t m_;
    Units node_ins_ = 0, node_del_ = 0, edge_ins_ = 0, edge_del_ = 0, mismatch_ = 0;
    std::vector<Units> sub_;
    std::vector<std::vector<int>> s_adj_;
    std::vector<std::vector<int>> o_adj_;
    std::vector<std::pair<std::size_t, std::size_t>> gold_edges_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> position_;
    std::vector<Units> remaining_student_edges_;
};

GedResult GedProblem::build(const std::vector<int>& mapping, bool exact) const {
    GedResult r;
    r.exact = exact;
    std::vector<int> preimage(m_, -1);
    for (std::size_t i = 0; i < n_; ++i) {
        if (mapping[i] >= 0) preimage[static_cast<std::size_t>(mapping[i])] = static_cast<int>(i);
    }
    auto push = [&](EditOp op, Units units) {
        op.cost = from_units(units);
        r.cost_units += units;
        r.script.push_back(std::move(op));
    };

    for (std::size_t i = 0; i < n_; ++i) {
        const SrgNode& s = gs_.nodes()[i];
        if (mapping[i] < 0) {
            push({.kind = EditOp::Kind::DeleteNode, .student_id = s.id, .concept_id = s.concept_id, .bloom = s.bloom},
                 node_del_);
            continue;
        }
        const SrgNode& g = go_.nodes()[static_cast<std::size_t>(mapping[i])];
        r.node_map.emplace_back(s.id, g.id);
        const Units c = sub_[i * m_ + static_cast<std::size_t>(mapping[i])];
        if (c != 0 || s.concept_id != g.concept_id || s.bloom != g.bloom) {
            push({.kind = EditOp::Kind::SubstituteNode,
                  .student_id = s.id,
                  .gold_id = g.id,
                  .concept_id = g.concept_id,
                  .bloom = g.bloom},
                 c);
        }
    }
    for (std::size_t j = 0; j < m_; ++j) {
        if (preimage[j] < 0) {
            const SrgNode& g = go_.nodes()[j];
            push({.kind = EditOp::Kind::InsertNode, .gold_id = g.id, .concept_id = g.concept_id, .bloom = g.bloom},
                 node_ins_);
        }
    }

    // Edges between two matched student nodes are reconciled per ordered pair;
    // everything else is a plain delete or insert.
    std::map<std::pair<std::size_t, std::size_t>, std::pair<std::vector<const SrgEdge*>, std::vector<const SrgEdge*>>>
        groups;
    std::vector<const SrgEdge*> deletes;
    std::vector<const SrgEdge*> inserts;
    for (const SrgEdge& e : gs_.edges()) {
        const std::size_t a = *gs_.index_of(e.source);
        const std::size_t b = *gs_.index_of(e.target);
        if (mapping[a] < 0 || mapping[b] < 0) {
            deletes.push_back(&e);
        } else {
            groups[{a, b}].first.push_back(&e);
        }
    }
    for (const SrgEdge& e : go_.edges()) {
        const int a = preimage[*go_.index_of(e.source)];
        const int b = preimage[*go_.index_of(e.target)];
        if (a < 0 || b < 0) {
            inserts.push_back(&e);
        } else {
            groups[{static_cast<std::size_t>(a), static_cast<std::size_t>(b)}].second.push_back(&e);
        }
    }
    std::vector<std::pair<const SrgEdge*, const SrgEdge*>> substitutions;
    for (auto& [key, group] : groups) {
        auto by_relation = [](const SrgEdge* x, const SrgEdge* y) { return x->relation < y->relation; };
        std::vector<const SrgEdge*> rs = group.first;
        std::vector<const SrgEdge*> ro = group.second;
        std::sort(rs.begin(), rs.end(), by_relation);
        std::sort(ro.begin(), ro.end(), by_relation);
        std::vector<const SrgEdge*> extra_s, extra_o;
        std::set_difference(rs.begin(), rs.end(), ro.begin(), ro.end(), std::back_inserter(extra_s), by_relation);
        std::set_difference(ro.begin(), ro.end(), rs.begin(), rs.end(), std::back_inserter(extra_o), by_relation);
        std::size_t paired = 0;
        if (mismatch_ < edge_del_ + edge_ins_) {
            paired = std::min(extra_s.size(), extra_o.size());
        }
        for (std::size_t k = 0; k < paired; ++k) substitutions.emplace_back(extra_s[k], extra_o[k]);
        deletes.insert(deletes.end(), extra_s.begin() + static_cast<std::ptrdiff_t>(paired), extra_s.end());
        inserts.insert(inserts.end(), extra_o.begin() + static_cast<std::ptrdiff_t>(paired), extra_o.end());
    }
    for (const SrgEdge* e : deletes) {
        push({.kind = EditOp::Kind::DeleteEdge, .source = e->source, .target = e->target, .relation = e->relation},
             edge_del_);
    }
    for (const auto& [s, g] : substitutions) {
        push({.kind = EditOp::Kind::SubstituteEdge,
              .source = s->source,
              .target = s->target,
              .relation = s->relation,
              .new_relation = g->relation},
             mismatch_);
    }
    for (const SrgEdge* e : inserts) {
        push({.kind = EditOp::Kind::InsertEdge, .source = e->source, .target = e->target, .relation = e->relation},
             edge_ins_);
    }
    r.cost = from_units(r.cost_units);
    return r;
}

struct SearchState {
    std::vector<int> prefix;  // gold index (or -1) per student node in processing order
    Units g = 0;
    Units f = 0;
    std::uint64_t seq = 0;
    bool complete = false;
};

std::vector<char> used_gold(const std::vector<int>& prefix, std::size_t m) {
    std::vector<char> used(m, 0);
    for (int t : prefix) {
        if (t >= 0) used[static_cast<std::size_t>(t)] = 1;
    }
    return used;
}

/// Expands `s` into every child, appending to `out`.
void expand(const GedProblem& p, const SearchState& s, bool exact_bound, std::uint64_t& seq,
            std::vector<SearchState>& out) {
    const std::vector<char> used = used_gold(s.prefix, p.m());
    std::vector<int> targets;
    for (std::size_t j = 0; j < p.m(); ++j) {
        if (!used[j]) targets.push_back(static_cast<int>(j));
    }
    targets.push_back(-1);
    for (int t : targets) {
        SearchState child;
        child.prefix = s.prefix;
        child.g = s.g + p.step_cost(s.prefix, t);
        child.prefix.push_back(t);
        std::vector<char> child_used = used;
        if (t >= 0) child_used[static_cast<std::size_t>(t)] = 1;
        if (child.prefix.size() == p.n()) {
            child.g += p.completion_cost(child_used);
            child.f = child.g;
            child.complete = true;
        } else {
            child.f = child.g + p.lower_bound(child.prefix, child_used, exact_bound);
        }
        child.seq = seq++;
        out.push_back(std::move(child));
    }
}

SearchState root_state(const GedProblem& p) {
    SearchState root;
    const std::vector<char> used(p.m(), 0);
    if (p.n() == 0) {
        root.g = p.completion_cost(used);
        root.f = root.g;
        root.complete = true;
    } else {
        root.f = p.lower_bound(root.prefix, used, true);
    }
    return root;
}

std::vector<int> to_node_mapping(const GedProblem& p, const std::vector<int>& prefix) {
    std::vector<int> mapping(p.n(), -1);
    for (std::size_t k = 0; k < prefix.size(); ++k) mapping[p.order()[k]] = prefix[k];
    return mapping;
}

// Lower f first; on ties prefer deeper states, then earlier creation.
bool better(const SearchState& a, const SearchState& b) {
    if (a.f != b.f) return a.f < b.f;
    if (a.prefix.size() != b.prefix.size()) return a.prefix.size() > b.prefix.size();
    return a.seq < b.seq;
}

}  // namespace

GedResult ged_exact(const Srg& student, const Srg& gold, const EditCostModel& costs, const Ontology& o,
                    std::size_t exact_limit) {
    if (student.node_count() + gold.node_count() > exact_limit) {
        throw SizeLimitExceeded("exact GED limited to " + std::to_string(exact_limit) + " combined nodes, got " +
                                std::to_string(student.node_count() + gold.node_count()));
    }
    const GedProblem problem(student, gold, costs, o);
    auto worse = [](const SearchState& a, const SearchState& b) { return better(b, a); };
    std::priority_queue<SearchState, std::vector<SearchState>, decltype(worse)> open(worse);
    std::uint64_t seq = 1;
    open.push(root_state(problem));
    std::vector<SearchState> children;
    while (!open.empty()) {
        SearchState s = open.top();
        open.pop();
        if (s.complete) {
            GedResult r = problem.build(to_node_mapping(problem, s.prefix), true);
            if (r.cost_units != s.g) {
                throw std::logic_error("GED script cost disagrees with search cost");
            }
            return r;
        }
        children.clear();
        expand(problem, s, true, seq, children);
        for (SearchState& c : children) open.push(std::move(c));
    }
    throw std::logic_error("GED search exhausted without a complete mapping");
}

GedResult ged_beam(const Srg& student, const Srg& gold, const EditCostModel& costs, const Ontology& o,
                   std::size_t beam_width) {
    if (beam_width == 0) {
        throw ValueError("beam width must be at least 1");
    }
    const GedProblem problem(student, gold, costs, o);
    std::uint64_t seq = 1;
    std::vector<SearchState> beam{root_state(problem)};
    std::vector<SearchState> next;
    for (std::size_t depth = 0; depth < problem.n(); ++depth) {
        next.clear();
        for (const SearchState& s : beam) expand(problem, s, false, seq, next);
        std::sort(next.begin(), next.end(), better);
        if (next.size() > beam_width) next.resize(beam_width);
        beam.swap(next);
    }
    const SearchState& best = *std::min_element(beam.begin(), beam.end(), better);
    GedResult r = problem.build(to_node_mapping(problem, best.prefix), false);
    if (r.cost_units != best.g) {
        throw std::logic_error("GED script cost disagrees with search cost");
    }
    return r;
}

Srg apply_edit_script(const Srg& student, const GedResult& result) {
    std::map<std::string, SrgNode> nodes;  // keyed by current id
    for (const SrgNode& n : student.nodes()) nodes.emplace(n.id, n);
    std::set<std::tuple<std::string, std::string, std::string>> edges;
    for (const SrgEdge& e : student.edges()) edges.emplace(e.source, e.target, e.relation);

    auto fail = [](const std::string& what) { throw IntegrityError("edit script does not apply: " + what); };

    // Phase 1: edge removals and relabels, in student ids.
    for (const EditOp& op : result.script) {
        if (op.kind == EditOp::Kind::DeleteEdge) {
            if (edges.erase({op.source, op.target, op.relation}) == 0) fail("missing edge to delete");
        } else if (op.kind == EditOp::Kind::SubstituteEdge) {
            if (edges.erase({op.source, op.target, op.relation}) == 0) fail("missing edge to substitute");
            if (!edges.emplace(op.source, op.target, op.new_relation).second) fail("substitution collides");
        }
    }
    // Phase 2: node deletions and relabels.
    for (const EditOp& op : result.script) {
        if (op.kind == EditOp::Kind::DeleteNode) {
            if (nodes.erase(op.student_id) == 0) fail("missing node to delete");
            for (const auto& e : edges) {
                if (std::get<0>(e) == op.student_id || std::get<1>(e) == op.student_id) {
                    fail("deleted node still has edges");
                }
            }
        } else if (op.kind == EditOp::Kind::SubstituteNode) {
            auto it = nodes.find(op.student_id);
            if (it == nodes.end()) fail("missing node to substitute");
            it->second.concept_id = op.concept_id;
            it->second.bloom = op.bloom;
        }
    }
    // Phase 3: move matched nodes into the gold id space.
    std::map<std::string, std::string> rename;
    for (const auto& [s, g] : result.node_map) rename.emplace(s, g);
    std::vector<SrgNode> out_nodes;
    for (auto& [id, n] : nodes) {
        auto it = rename.find(id);
        if (it == rename.end()) fail("node \"" + id + "\" is neither deleted nor matched");
        n.id = it->second;
        n.evidence = {};
        out_nodes.push_back(n);
    }
    std::set<std::tuple<std::string, std::string, std::string>> out_edges;
    for (const auto& [s, t, rel] : edges) out_edges.emplace(rename.at(s), rename.at(t), rel);
    // Phase 4: insertions, in gold ids.
    for (const EditOp& op : result.script) {
        if (op.kind == EditOp::Kind::InsertNode) {
            out_nodes.push_back({op.gold_id, op.concept_id, op.bloom, {}});
        }
    }
    for (const EditOp& op : result.script) {
        if (op.kind == EditOp::Kind::InsertEdge) {
            if (!out_edges.emplace(op.source, op.target, op.relation).second) fail("inserted edge already present");
        }
    }
    std::sort(out_nodes.begin(), out_nodes.end(), [](const SrgNode& a, const SrgNode& b) { return a.id < b.id; });
    std::vector<SrgEdge> out_edge_list;
    for (const auto& [s, t, rel] : out_edges) out_edge_list.push_back({s, t, rel, {}});
    return Srg(student.item_id(), Role::Gold, std::move(out_nodes), std::move(out_edge_list));
}

std::string_view to_string(EditOp::Kind k) noexcept {
    switch (k) {
        case EditOp::Kind::SubstituteNode: return "substitute_node";
        case EditOp::Kind::DeleteNode: return "delete_node";
        case EditOp::Kind::InsertNode: return "insert_node";
        case EditOp::Kind::SubstituteEdge: return "substitute_edge";
        case EditOp::Kind::DeleteEdge: return "delete_edge";
        case EditOp::Kind::InsertEdge: return "insert_edge";
    }
    return "unknown";
}

json edit_op_to_json(const EditOp& op) {
    json j = {{"op", std::string(to_string(op.kind))}, {"cost", op.cost}};
    switch (op.kind) {
        case EditOp::Kind::SubstituteNode:
            j["student"] = op.student_id;
            j["gold"] = op.gold_id;
            j["concept"] = op.concept_id;
            j["bloom"] = std::string(to_string(op.bloom));
            break;
        case EditOp::Kind::DeleteNode:
            j["student"] = op.student_id;
            break;
        case EditOp::Kind::InsertNode:
            j["gold"] = op.gold_id;
            j["concept"] = op.concept_id;
            j["bloom"] = std::string(to_string(op.bloom));
            break;
        case EditOp::Kind::SubstituteEdge:
            j["new_relation"] = op.new_relation;
            [[fallthrough]];
        case EditOp::Kind::DeleteEdge:
        case EditOp::Kind::InsertEdge:
            j["source"] = op.source;
            j["target"] = op.target;
            j["relation"] = op.relation;
            break;
    }
    return j;
}

json ged_result_to_json(const GedResult& r) {
    json script = json::array();
    for (const EditOp& op : r.script) script.push_back(edit_op_to_json(op));
    json node_map = json::array();
    for (const auto& [s, g] : r.node_map) node_map.push_back({{"student", s}, {"gold", g}});
    return {{"cost", r.cost}, {"exact", r.exact}, {"script", std::move(script)}, {"node_map", std::move(node_map)}};
}

json cost_model_to_json(const EditCostModel& c) {
    return {{"node_insert", c.node_insert}, {"node_delete", c.node_delete}, {"edge_insert", c.edge_insert},
            {"edge_delete", c.edge_delete}, {"beta", c.beta},               {"relation_mismatch", c.relation_mismatch}};
}

EditCostModel cost_model_from_json(const json& doc, EditCostModel c) {
    if (!doc.is_object()) {
        throw SchemaError("edit costs must be an object");
    }
    try {
        if (doc.contains("node_insert")) c.node_insert = doc.at("node_insert").get<double>();
        if (doc.contains("node_delete")) c.node_delete = doc.at("node_delete").get<double>();
        if (doc.contains("edge_insert")) c.edge_insert = doc.at("edge_insert").get<double>();
        if (doc.contains("edge_delete")) c.edge_delete = doc.at("edge_delete").get<double>();
        if (doc.contains("beta")) c.beta = doc.at("beta").get<double>();
        if (doc.contains("relation_mismatch")) c.relation_mismatch = doc.at("relation_mismatch").get<double>();
    } catch (const json::exception& e) {
        throw SchemaError(std::string("edit costs: ") + e.what());
    }
    c.validate();
    return c;
}

}  // namespace srg
