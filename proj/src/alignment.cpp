// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#include "srg/alignment.hpp"

#include <algorithm>
#include <numeric>

#include "srg/errors.hpp"

namespace srg {

using nlohmann::json;

namespace {

class WeightTable {
public:
    WeightTable(std::span<const SrgNode> student, std::span<const SrgNode> gold, const Ontology& o,
                const AlignmentParams& p)
        : cols_(gold.size()), w_(student.size() * gold.size(), 0) {
        const Units floor = to_units(p.w_min);
        for (std::size_t i = 0; i < student.size(); ++i) {
            for (std::size_t j = 0; j < gold.size(); ++j) {
                const Units w = to_units(pair_weight(student[i], gold[j], o, p));
                // Inadmissible pairs are stored as 0: they can never beat leaving both unmatched.
                w_[i * cols_ + j] = (w >= floor && w > 0) ? w : 0;
            }
        }
    }

    Units at(std::size_t i, std::size_t j) const noexcept { return w_[i * cols_ + j]; }

    /// Best total over a sub-problem restricted to the given rows and columns.
    Units optimum(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
        const std::size_t n = std::max(rows.size(), cols.size());
        if (rows.empty() || cols.empty()) {
            return 0;
        }
        CostMatrix cost(n, 0);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t c = 0; c < cols.size(); ++c) {
                cost(r, c) = -at(rows[r], cols[c]);
            }
        }
        return -solve_min_cost_assignment(cost).total;
    }

private:
    std::size_t cols_;
    std::vector<Units> w_;
};

std::vector<std::size_t> order_by_id(std::span<const SrgNode> nodes) {
    std::vector<std::size_t> order(nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return nodes[a].id < nodes[b].id; });
    return order;
}

}  // namespace

void AlignmentParams::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw ValueError("alignment alpha must lie in [0, 1]");
    }
    if (!(w_min >= 0.0 && w_min <= 1.0)) {
        throw ValueError("alignment w_min must lie in [0, 1]");
    }
}

const AlignedPair* Alignment::for_student(std::string_view id) const {
    auto it = std::find_if(pairs.begin(), pairs.end(), [&](const AlignedPair& p) { return p.student_id == id; });
    return it == pairs.end() ? nullptr : &*it;
}

const AlignedPair* Alignment::for_gold(std::string_view id) const {
    auto it = std::find_if(pairs.begin(), pairs.end(), [&](const AlignedPair& p) { return p.gold_id == id; });
    return it == pairs.end() ? nullptr : &*it;
}

double pair_weight(const SrgNode& student, const SrgNode& gold, const Ontology& o, const AlignmentParams& p) {
    const double semantic = o.sim_or_zero(student.concept_id, gold.concept_id);
    const double agree = student.bloom == gold.bloom ? 1.0 : 0.0;
    return from_units(to_units(p.alpha * semantic + (1.0 - p.alpha) * agree));
}

Alignment best_alignment(std::span<const SrgNode> student, std::span<const SrgNode> gold, const Ontology& o,
                         const AlignmentParams& p) {
    Alignment out;
    if (student.empty() || gold.empty()) {
        return out;
    }
    const WeightTable table(student, gold, o, p);
    const std::vector<std::size_t> s_order = order_by_id(student);
    const std::vector<std::size_t> g_order = order_by_id(gold);

    const Units best = table.optimum(s_order, g_order);

    // Fix pairs greedily in (student id, gold id) order, keeping a choice only
    // if the remaining sub-problem can still reach the global optimum.
    Units fixed = 0;
    std::vector<char> gold_taken(gold.size(), 0);
    for (std::size_t k = 0; k < s_order.size() && fixed < best; ++k) {
        const std::size_t s = s_order[k];
        const std::vector<std::size_t> later(s_order.begin() + static_cast<std::ptrdiff_t>(k) + 1, s_order.end());
        for (std::size_t g : g_order) {
            const Units w = table.at(s, g);
            if (gold_taken[g] || w == 0) continue;
            std::vector<std::size_t> free_gold;
            for (std::size_t h : g_order) {
                if (!gold_taken[h] && h != g) free_gold.push_back(h);
            }
            if (fixed + w + table.optimum(later, free_gold) == best) {
                gold_taken[g] = 1;
                fixed += w;
                out.pairs.push_back({student[s].id, gold[g].id, from_units(w)});
                break;
            }
        }
    }
    out.total_units = fixed;
    return out;
}

double f_oa(const Alignment& a, std::size_t student_nodes, std::size_t gold_nodes, const AlignmentParams& p) {
    if (student_nodes == 0 && gold_nodes == 0) {
        return 1.0;
    }
    const double denom = p.oa_norm == OaNorm::Max ? static_cast<double>(std::max(student_nodes, gold_nodes))
                                                  : static_cast<double>(student_nodes + gold_nodes);
    return a.total_weight() / denom;
}

std::string_view to_string(OaNorm n) noexcept { return n == OaNorm::Max ? "max" : "sum"; }

OaNorm oa_norm_from_string(std::string_view s) {
    if (s == "max") return OaNorm::Max;
    if (s == "sum") return OaNorm::Sum;
    throw ValueError("oa_norm must be \"max\" or \"sum\"");
}

json alignment_to_json(const Alignment& a) {
    json pairs = json::array();
    for (const AlignedPair& p : a.pairs) {
        pairs.push_back({{"student", p.student_id}, {"gold", p.gold_id}, {"weight", p.weight}});
    }
    return {{"pairs", std::move(pairs)}, {"total_weight", a.total_weight()}};
}

json alignment_params_to_json(const AlignmentParams& p) {
    return {{"alpha", p.alpha}, {"w_min", p.w_min}, {"oa_norm", std::string(to_string(p.oa_norm))}};
}

AlignmentParams alignment_params_from_json(const json& doc, AlignmentParams p) {
    if (!doc.is_object()) {
        throw SchemaError("alignment parameters must be an object");
    }
    try {
        if (doc.contains("alpha")) p.alpha = doc.at("alpha").get<double>();
        if (doc.contains("w_min")) p.w_min = doc.at("w_min").get<double>();
        if (doc.contains("oa_norm")) p.oa_norm = oa_norm_from_string(doc.at("oa_norm").get<std::string>());
    } catch (const json::exception& e) {
        throw SchemaError(std::string("alignment parameters: ") + e.what());
    }
    p.validate();
    return p;
}

}  // namespace srg
