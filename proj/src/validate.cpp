// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#include "srg/validate.hpp"

namespace srg {

ValidationReport validate_against_ontology(const Srg& g, const Ontology& o) {
    ValidationReport report;
    for (const SrgNode& n : g.nodes()) {
        if (!o.contains(n.concept_id)) {
            report.issues.push_back({ValidationIssue::Kind::UnresolvedConcept, n.id, n.concept_id});
        }
    }
    for (const SrgEdge& e : g.edges()) {
        if (!o.has_relation(e.relation)) {
            report.issues.push_back(
                {ValidationIssue::Kind::UnknownRelation, e.source + "->" + e.target, e.relation});
        }
    }
    return report;
}

std::string ValidationReport::summary() const {
    std::string out;
    for (const ValidationIssue& i : issues) {
        if (!out.empty()) out += "; ";
        out += i.kind == ValidationIssue::Kind::UnresolvedConcept ? "unresolved concept " : "unknown relation ";
        out += "\"" + i.label + "\" on " + i.element;
    }
    return out;
}

nlohmann::json report_to_json(const ValidationReport& r) {
    nlohmann::json issues = nlohmann::json::array();
    for (const ValidationIssue& i : r.issues) {
        issues.push_back(
            {{"kind", i.kind == ValidationIssue::Kind::UnresolvedConcept ? "unresolved_concept" : "unknown_relation"},
             {"element", i.element},
             {"label", i.label}});
    }
    return {{"ok", r.ok()}, {"issues", std::move(issues)}};
}

}  // namespace srg
