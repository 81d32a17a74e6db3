// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#include "srg/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "srg/errors.hpp"

namespace srg {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 6> kBloomNames = {
    "Remember", "Understand", "Apply", "Analyze", "Evaluate", "Create",
};

const json& require(const json& obj, const char* key, const char* where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw SchemaError(std::string(where) + ": missing field \"" + key + "\"");
    }
    return *it;
}

std::string require_string(const json& obj, const char* key, const char* where) {
    const json& v = require(obj, key, where);
    if (!v.is_string()) {
        throw SchemaError(std::string(where) + ": field \"" + key + "\" must be a string");
    }
    return v.get<std::string>();
}

}  // namespace

Bloom bloom_from_ordinal(int ordinal) {
    if (ordinal < 1 || ordinal > 6) {
        throw ValueError("Bloom ordinal out of range: " + std::to_string(ordinal));
    }
    return static_cast<Bloom>(ordinal);
}

std::string_view to_string(Bloom b) noexcept { return kBloomNames[ordinal(b) - 1]; }

Bloom bloom_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kBloomNames.size(); ++i) {
        if (kBloomNames[i] == name) {
            return static_cast<Bloom>(i + 1);
        }
    }
    throw ValueError("unknown Bloom level \"" + std::string(name) + "\"");
}

bool Rect::normalized() const noexcept {
    return 0.0 <= x0 && x0 <= x1 && x1 <= 1.0 && 0.0 <= y0 && y0 <= y1 && y1 <= 1.0;
}

std::string_view to_string(Role r) noexcept { return r == Role::Gold ? "gold" : "student"; }

Srg::Srg(std::string item_id, Role role, std::vector<SrgNode> nodes, std::vector<SrgEdge> edges)
    : item_id_(std::move(item_id)), role_(role), nodes_(std::move(nodes)), edges_(std::move(edges)) {
    index_.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const SrgNode& n = nodes_[i];
        if (n.id.empty()) {
            throw IntegrityError("node at position " + std::to_string(i) + " has an empty id");
        }
        if (n.concept_id.empty()) {
            throw IntegrityError("node \"" + n.id + "\" has an empty concept");
        }
        if (n.evidence.region && !n.evidence.region->normalized()) {
            throw IntegrityError("node \"" + n.id + "\" has an evidence region outside [0,1]^2");
        }
        if (!index_.emplace(n.id, i).second) {
            throw IntegrityError("duplicate node id \"" + n.id + "\"");
        }
    }
    std::set<std::tuple<std::string_view, std::string_view, std::string_view>> seen;
    for (const SrgEdge& e : edges_) {
        if (!index_.contains(e.source)) {
            throw IntegrityError("edge source \"" + e.source + "\" is not a node");
        }
        if (!index_.contains(e.target)) {
            throw IntegrityError("edge target \"" + e.target + "\" is not a node");
        }
        if (e.source == e.target) {
            throw IntegrityError("self-loop on node \"" + e.source + "\"");
        }
        if (e.relation.empty()) {
            throw IntegrityError("edge " + e.source + "->" + e.target + " has an empty relation");
        }
        if (e.evidence.region && !e.evidence.region->normalized()) {
            throw IntegrityError("edge " + e.source + "->" + e.target +
                                 " has an evidence region outside [0,1]^2");
        }
        if (!seen.emplace(e.source, e.target, e.relation).second) {
            throw IntegrityError("duplicate edge " + e.source + " -[" + e.relation + "]-> " + e.target);
        }
    }
}

std::optional<std::size_t> Srg::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

const SrgNode* Srg::find_node(std::string_view id) const {
    auto idx = index_of(id);
    return idx ? &nodes_[*idx] : nullptr;
}

bool Srg::has_edge(std::string_view source, std::string_view target, std::string_view relation) const {
    return std::any_of(edges_.begin(), edges_.end(), [&](const SrgEdge& e) {
        return e.source == source && e.target == target && e.relation == relation;
    });
}

std::optional<Bloom> Srg::highest_bloom() const {
    std::optional<Bloom> best;
    for (const SrgNode& n : nodes_) {
        if (!best || ordinal(n.bloom) > ordinal(*best)) {
            best = n.bloom;
        }
    }
    return best;
}

json evidence_to_json(const Evidence& e) {
    json out = {{"text", e.text}, {"region", nullptr}};
    if (e.region) {
        out["region"] = {e.region->x0, e.region->y0, e.region->x1, e.region->y1};
    }
    return out;
}

Evidence evidence_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw SchemaError("evidence must be an object");
    }
    Evidence e;
    if (auto it = doc.find("text"); it != doc.end()) {
        if (!it->is_string()) {
            throw SchemaError("evidence.text must be a string");
        }
        e.text = it->get<std::string>();
    }
    if (auto it = doc.find("region"); it != doc.end() && !it->is_null()) {
        if (!it->is_array() || it->size() != 4 ||
            !std::all_of(it->begin(), it->end(), [](const json& v) { return v.is_number(); })) {
            throw SchemaError("evidence.region must be null or [x0,y0,x1,y1]");
        }
        e.region = Rect{(*it)[0].get<double>(), (*it)[1].get<double>(), (*it)[2].get<double>(),
                        (*it)[3].get<double>()};
        if (!e.region->normalized()) {
            throw IntegrityError("evidence region outside [0,1]^2 or inverted");
        }
    }
    return e;
}

Srg srg_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw SchemaError("SRG document must be a JSON object");
    }
    const json& version = require(doc, "srg_version", "srg");
    if (!version.is_string() || version.get<std::string>() != kSrgVersion) {
        throw SchemaError("unsupported srg_version (expected \"1\")");
    }
    std::string item_id = require_string(doc, "item_id", "srg");
    std::string role_name = require_string(doc, "role", "srg");
    Role role;
    if (role_name == "gold") {
        role = Role::Gold;
    } else if (role_name == "student") {
        role = Role::Student;
    } else {
        throw SchemaError("role must be \"gold\" or \"student\"");
    }

    const json& jnodes = require(doc, "nodes", "srg");
    const json& jedges = require(doc, "edges", "srg");
    if (!jnodes.is_array() || !jedges.is_array()) {
        throw SchemaError("nodes and edges must be arrays");
    }

    std::vector<SrgNode> nodes;
    nodes.reserve(jnodes.size());
    for (const json& jn : jnodes) {
        if (!jn.is_object()) {
            throw SchemaError("node entries must be objects");
        }
        SrgNode n;
        n.id = require_string(jn, "id", "node");
        n.concept_id = require_string(jn, "concept", "node");
        n.bloom = bloom_from_string(require_string(jn, "bloom", "node"));
        if (auto it = jn.find("evidence"); it != jn.end()) {
            n.evidence = evidence_from_json(*it);
        }
        nodes.push_back(std::move(n));
    }

    std::vector<SrgEdge> edges;
    edges.reserve(jedges.size());
    for (const json& je : jedges) {
        if (!je.is_object()) {
            throw SchemaError("edge entries must be objects");
        }
        SrgEdge e;
        e.source = require_string(je, "source", "edge");
        e.target = require_string(je, "target", "edge");
        e.relation = require_string(je, "relation", "edge");
        if (auto it = je.find("evidence"); it != je.end()) {
            e.evidence = evidence_from_json(*it);
        }
        edges.push_back(std::move(e));
    }
    return Srg(std::move(item_id), role, std::move(nodes), std::move(edges));
}

Srg parse_srg(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("SRG document is not valid JSON: ") + e.what());
    }
    return srg_from_json(doc);
}

json srg_to_json(const Srg& g) {
    json nodes = json::array();
    for (const SrgNode& n : g.nodes()) {
        nodes.push_back({{"id", n.id},
                         {"concept", n.concept_id},
                         {"bloom", std::string(to_string(n.bloom))},
                         {"evidence", evidence_to_json(n.evidence)}});
    }
    json edges = json::array();
    for (const SrgEdge& e : g.edges()) {
        edges.push_back({{"source", e.source},
                         {"target", e.target},
                         {"relation", e.relation},
                         {"evidence", evidence_to_json(e.evidence)}});
    }
    return {{"srg_version", kSrgVersion},
            {"item_id", g.item_id()},
            {"role", std::string(to_string(g.role()))},
            {"nodes", std::move(nodes)},
            {"edges", std::move(edges)}};
}

std::string serialize_srg(const Srg& g) { return srg_to_json(g).dump(2); }

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw SchemaError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Srg load_srg_file(const std::string& path) { return parse_srg(read_text_file(path)); }

}  // namespace srg
