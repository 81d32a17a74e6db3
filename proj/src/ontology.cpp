// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#include "srg/ontology.hpp"

#include "srg/errors.hpp"

namespace srg {

using nlohmann::json;

Ontology::Ontology(std::string root, std::vector<Concept> concepts, std::vector<std::string> relations)
    : root_(std::move(root)), concepts_(std::move(concepts)), relations_(std::move(relations)) {
    for (std::size_t i = 0; i < concepts_.size(); ++i) {
        if (concepts_[i].id.empty()) {
            throw SchemaError("ontology concept with empty id");
        }
        if (!index_.emplace(concepts_[i].id, i).second) {
            throw SchemaError("duplicate ontology concept \"" + concepts_[i].id + "\"");
        }
    }
    if (!index_.contains(root_)) {
        throw SchemaError("ontology root \"" + root_ + "\" is not a listed concept");
    }

    parent_index_.assign(concepts_.size(), -1);
    for (std::size_t i = 0; i < concepts_.size(); ++i) {
        const Concept& c = concepts_[i];
        if (!c.parent) {
            if (c.id != root_) {
                throw MultipleRootsError("concept \"" + c.id + "\" has no parent but is not the root \"" +
                                         root_ + "\"");
            }
            continue;
        }
        if (c.id == root_) {
            throw SchemaError("ontology root \"" + root_ + "\" must not have a parent");
        }
        auto it = index_.find(*c.parent);
        if (it == index_.end()) {
            throw SchemaError("concept \"" + c.id + "\" has unknown parent \"" + *c.parent + "\"");
        }
        parent_index_[i] = static_cast<int>(it->second);
    }

    // Every chain must reach the root within |concepts| steps; anything else is a cycle.
    depth_.assign(concepts_.size(), -1);
    const int root_idx = static_cast<int>(index_.at(root_));
    depth_[root_idx] = 0;
    for (std::size_t i = 0; i < concepts_.size(); ++i) {
        std::vector<int> chain;
        int cur = static_cast<int>(i);
        while (depth_[cur] < 0) {
            chain.push_back(cur);
            if (chain.size() > concepts_.size()) {
                throw CycleError("ontology parent chain of \"" + concepts_[i].id + "\" is cyclic");
            }
            cur = parent_index_[cur];
        }
        int d = depth_[cur];
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            depth_[*it] = ++d;
        }
    }

    for (const std::string& r : relations_) {
        if (r.empty()) {
            throw SchemaError("empty relation label");
        }
        if (!relation_set_.insert(r).second) {
            throw SchemaError("duplicate relation label \"" + r + "\"");
        }
    }
}

bool Ontology::contains(std::string_view c) const { return index_.contains(std::string(c)); }

bool Ontology::has_relation(std::string_view relation) const {
    return relation_set_.contains(std::string(relation));
}

std::size_t Ontology::index(std::string_view c) const {
    auto it = index_.find(std::string(c));
    if (it == index_.end()) {
        throw UnknownConcept("unknown concept \"" + std::string(c) + "\"");
    }
    return it->second;
}

int Ontology::depth(std::string_view c) const { return depth_[index(c)]; }

const std::string* Ontology::parent(std::string_view c) const {
    int p = parent_index_[index(c)];
    return p < 0 ? nullptr : &concepts_[p].id;
}

const std::string& Ontology::lca(std::string_view a, std::string_view b) const {
    int ia = static_cast<int>(index(a));
    int ib = static_cast<int>(index(b));
    while (depth_[ia] > depth_[ib]) ia = parent_index_[ia];
    while (depth_[ib] > depth_[ia]) ib = parent_index_[ib];
    while (ia != ib) {
        ia = parent_index_[ia];
        ib = parent_index_[ib];
    }
    return concepts_[ia].id;
}

double Ontology::sim(std::string_view a, std::string_view b) const {
    if (a == b) {
        index(a);
        return 1.0;
    }
    const int denom = depth(a) + depth(b);
    return 2.0 * depth(lca(a, b)) / denom;
}

double Ontology::sim_or_zero(std::string_view a, std::string_view b) const noexcept {
    if (!contains(a) || !contains(b)) {
        return 0.0;
    }
    return sim(a, b);
}

Ontology ontology_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw SchemaError("ontology document must be a JSON object");
    }
    auto root = doc.find("root");
    auto concepts = doc.find("concepts");
    auto relations = doc.find("relations");
    if (root == doc.end() || !root->is_string()) {
        throw SchemaError("ontology: \"root\" must be a string");
    }
    if (concepts == doc.end() || !concepts->is_array()) {
        throw SchemaError("ontology: \"concepts\" must be an array");
    }
    std::vector<Ontology::Concept> cs;
    for (const json& jc : *concepts) {
        if (!jc.is_object() || !jc.contains("id") || !jc["id"].is_string()) {
            throw SchemaError("ontology: concept entries need a string \"id\"");
        }
        Ontology::Concept c{jc["id"].get<std::string>(), std::nullopt};
        if (auto p = jc.find("parent"); p != jc.end() && !p->is_null()) {
            if (!p->is_string()) {
                throw SchemaError("ontology: \"parent\" must be a string or null");
            }
            c.parent = p->get<std::string>();
        }
        cs.push_back(std::move(c));
    }
    std::vector<std::string> rels;
    if (relations != doc.end()) {
        if (!relations->is_array()) {
            throw SchemaError("ontology: \"relations\" must be an array");
        }
        for (const json& r : *relations) {
            if (!r.is_string()) {
                throw SchemaError("ontology: relation labels must be strings");
            }
            rels.push_back(r.get<std::string>());
        }
    }
    return Ontology(root->get<std::string>(), std::move(cs), std::move(rels));
}

Ontology load_ontology(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("ontology document is not valid JSON: ") + e.what());
    }
    return ontology_from_json(doc);
}

json ontology_to_json(const Ontology& o) {
    json concepts = json::array();
    for (const auto& c : o.concepts()) {
        concepts.push_back({{"id", c.id}, {"parent", c.parent ? json(*c.parent) : json(nullptr)}});
    }
    return {{"root", o.root()}, {"concepts", std::move(concepts)}, {"relations", o.relations()}};
}

}  // namespace srg
