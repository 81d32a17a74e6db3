// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

namespace srg {

/// Rooted concept tree plus the relation vocabulary of one assessment item.
/// Depths are computed once at load; all queries are const and lock-free.
class Ontology {
public:
    struct Concept {
        std::string id;
        std::optional<std::string> parent;
    };

    Ontology() = default;

    /// Throws SchemaError, CycleError or MultipleRootsError.
    Ontology(std::string root, std::vector<Concept> concepts, std::vector<std::string> relations);

    const std::string& root() const noexcept { return root_; }
    const std::vector<Concept>& concepts() const noexcept { return concepts_; }
    const std::vector<std::string>& relations() const noexcept { return relations_; }

    bool contains(std::string_view c) const;
    bool has_relation(std::string_view relation) const;

    /// Throws UnknownConcept.
    int depth(std::string_view c) const;
    const std::string* parent(std::string_view c) const;

    /// Deepest common ancestor. Throws UnknownConcept.
    const std::string& lca(std::string_view a, std::string_view b) const;

    /// Wu-Palmer similarity 2*depth(lca) / (depth(a) + depth(b)), with
    /// sim(x, x) = 1. Throws UnknownConcept.
    double sim(std::string_view a, std::string_view b) const;

    /// Scoring-time policy: unresolvable concepts have similarity 0 to
    /// everything, including themselves.
    double sim_or_zero(std::string_view a, std::string_view b) const noexcept;

private:
    std::size_t index(std::string_view c) const;

    std::string root_;
    std::vector<Concept> concepts_;
    std::vector<std::string> relations_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<int> parent_index_;
    std::vector<int> depth_;
    std::unordered_set<std::string> relation_set_;
};

/// Ontology-JSON: { "root": str, "concepts": [{"id": str, "parent": str|null}], "relations": [str] }
Ontology load_ontology(std::string_view document);
Ontology ontology_from_json(const nlohmann::json& doc);
nlohmann::json ontology_to_json(const Ontology& o);

}  // namespace srg
