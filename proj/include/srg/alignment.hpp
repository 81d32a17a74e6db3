// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "srg/assignment.hpp"
#include "srg/graph.hpp"
#include "srg/ontology.hpp"

namespace srg {

/// Denominator of the alignment score: max(|Vs|, |Vo|) or |Vs| + |Vo|.
enum class OaNorm { Max, Sum };

struct AlignmentParams {
    double alpha = 0.5;  ///< semantic vs Bloom-agreement mix
    double w_min = 0.3;  ///< pairs below this weight are never matched
    OaNorm oa_norm = OaNorm::Max;

    /// Throws ValueError when alpha or w_min leave [0, 1].
    void validate() const;
};

struct AlignedPair {
    std::string student_id;
    std::string gold_id;
    double weight = 0.0;

    friend bool operator==(const AlignedPair&, const AlignedPair&) = default;
};

/// One-to-one partial matching, pairs sorted by (student id, gold id).
struct Alignment {
    std::vector<AlignedPair> pairs;
    Units total_units = 0;

    double total_weight() const noexcept { return from_units(total_units); }
    const AlignedPair* for_student(std::string_view id) const;
    const AlignedPair* for_gold(std::string_view id) const;

    friend bool operator==(const Alignment&, const Alignment&) = default;
};

/// alpha * sim(concepts) + (1 - alpha) * [same Bloom], rounded to solver units.
double pair_weight(const SrgNode& student, const SrgNode& gold, const Ontology& o, const AlignmentParams& p);

/// Maximum-weight one-to-one matching over pairs with weight >= w_min (and
/// > 0). Among equal-weight optima the lexicographically smallest sorted
/// (student id, gold id) pair sequence wins.
Alignment best_alignment(std::span<const SrgNode> student, std::span<const SrgNode> gold, const Ontology& o,
                         const AlignmentParams& p);

/// Sum of aligned weights over the configured denominator; 1 when both
/// node sets are empty.
double f_oa(const Alignment& a, std::size_t student_nodes, std::size_t gold_nodes, const AlignmentParams& p);

std::string_view to_string(OaNorm n) noexcept;
OaNorm oa_norm_from_string(std::string_view s);

nlohmann::json alignment_to_json(const Alignment& a);
nlohmann::json alignment_params_to_json(const AlignmentParams& p);
AlignmentParams alignment_params_from_json(const nlohmann::json& doc, AlignmentParams defaults = {});

}  // namespace srg
