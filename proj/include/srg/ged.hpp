// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "srg/assignment.hpp"
#include "srg/graph.hpp"
#include "srg/ontology.hpp"

namespace srg {

/// Edit costs for transforming a student graph into the gold graph.
///
/// Node substitution costs (1 - sim(concepts)) plus beta * (gold ordinal -
/// student ordinal) / 5 when the student sits below the gold Bloom level;
/// students above the gold level are not penalized, so the distance is
/// directional. Edge substitution is free for equal relations and costs
/// `relation_mismatch` otherwise.
struct EditCostModel {
    double node_insert = 1.0;
    double node_delete = 1.0;
    double edge_insert = 1.0;
    double edge_delete = 1.0;
    double beta = 0.5;
    double relation_mismatch = 1.0;

    void validate() const;

    double node_substitution(const SrgNode& student, const SrgNode& gold, const Ontology& o) const;
};

inline constexpr std::size_t kDefaultExactLimit = 12;
inline constexpr std::size_t kDefaultBeamWidth = 32;

struct EditOp {
    enum class Kind { SubstituteNode, DeleteNode, InsertNode, SubstituteEdge, DeleteEdge, InsertEdge };

    Kind kind;
    // Node operations. Substitutions and inserts carry the gold labels.
    std::string student_id;
    std::string gold_id;
    std::string concept_id;
    Bloom bloom = Bloom::Remember;
    // Edge operations. Deletes and substitutions name the student edge;
    // inserts name the gold edge.
    std::string source;
    std::string target;
    std::string relation;
    std::string new_relation;
    double cost = 0.0;

    friend bool operator==(const EditOp&, const EditOp&) = default;
};

struct GedResult {
    double cost = 0.0;
    Units cost_units = 0;
    std::vector<EditOp> script;
    bool exact = false;
    /// Matched (student id, gold id) pairs, in student node order.
    std::vector<std::pair<std::string, std::string>> node_map;
};

/// |Vs| + |Vo| + |Es| + |Eo|, or 1 when that is zero.
std::size_t normalizer_z(const Srg& student, const Srg& gold);

/// Exact minimum-cost edit script by A* over partial node mappings.
/// Throws SizeLimitExceeded when |Vs| + |Vo| > exact_limit.
GedResult ged_exact(const Srg& student, const Srg& gold, const EditCostModel& costs, const Ontology& o,
                    std::size_t exact_limit = kDefaultExactLimit);

/// Beam-search approximation; returns a valid script whose cost is an upper
/// bound on the optimum. Throws ValueError for beam_width == 0.
GedResult ged_beam(const Srg& student, const Srg& gold, const EditCostModel& costs, const Ontology& o,
                   std::size_t beam_width = kDefaultBeamWidth);

/// Replays a script on the student graph. The result uses gold ids for every
/// matched or inserted node; evidence is not reconstructed. Throws
/// IntegrityError when an operation does not apply.
Srg apply_edit_script(const Srg& student, const GedResult& result);

std::string_view to_string(EditOp::Kind k) noexcept;
nlohmann::json edit_op_to_json(const EditOp& op);
nlohmann::json ged_result_to_json(const GedResult& r);
nlohmann::json cost_model_to_json(const EditCostModel& c);
EditCostModel cost_model_from_json(const nlohmann::json& doc, EditCostModel defaults = {});

}  // namespace srg
