// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "srg/graph.hpp"
#include "srg/ontology.hpp"

namespace srg {

struct ValidationIssue {
    enum class Kind { UnresolvedConcept, UnknownRelation };

    Kind kind;
    std::string element;  // node id, or "source->target" for edges
    std::string label;    // offending concept or relation

    friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const noexcept { return issues.empty(); }
    std::string summary() const;
};

/// Never throws; lists every node concept missing from the ontology and every
/// edge relation outside its vocabulary.
ValidationReport validate_against_ontology(const Srg& g, const Ontology& o);

nlohmann::json report_to_json(const ValidationReport& r);

}  // namespace srg
