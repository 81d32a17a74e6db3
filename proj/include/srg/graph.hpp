// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "srg/bloom.hpp"

namespace srg {

/// Axis-aligned rectangle in normalized canvas coordinates.
struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    bool normalized() const noexcept;
    friend bool operator==(const Rect&, const Rect&) = default;
};

struct Evidence {
    std::string text;
    std::optional<Rect> region;

    friend bool operator==(const Evidence&, const Evidence&) = default;
};

struct SrgNode {
    std::string id;
    std::string concept_id;
    Bloom bloom = Bloom::Remember;
    Evidence evidence;

    friend bool operator==(const SrgNode&, const SrgNode&) = default;
};

struct SrgEdge {
    std::string source;
    std::string target;
    std::string relation;
    Evidence evidence;

    friend bool operator==(const SrgEdge&, const SrgEdge&) = default;
};

enum class Role { Gold, Student };

std::string_view to_string(Role r) noexcept;

/// Sketch reasoning graph. Construction validates every structural invariant
/// (unique node ids, no self-loops, no dangling endpoints, no duplicate
/// (source, target, relation) triples), so a live Srg is always well formed.
class Srg {
public:
    Srg() = default;

    /// Throws IntegrityError on any invariant violation.
    Srg(std::string item_id, Role role, std::vector<SrgNode> nodes, std::vector<SrgEdge> edges);

    const std::string& item_id() const noexcept { return item_id_; }
    Role role() const noexcept { return role_; }
    const std::vector<SrgNode>& nodes() const noexcept { return nodes_; }
    const std::vector<SrgEdge>& edges() const noexcept { return edges_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }

    std::optional<std::size_t> index_of(std::string_view id) const;
    const SrgNode* find_node(std::string_view id) const;
    bool has_edge(std::string_view source, std::string_view target, std::string_view relation) const;

    /// The highest Bloom level among nodes, if any.
    std::optional<Bloom> highest_bloom() const;

    friend bool operator==(const Srg& a, const Srg& b) {
        return a.item_id_ == b.item_id_ && a.role_ == b.role_ && a.nodes_ == b.nodes_ &&
               a.edges_ == b.edges_;
    }

private:
    std::string item_id_;
    Role role_ = Role::Student;
    std::vector<SrgNode> nodes_;
    std::vector<SrgEdge> edges_;
    std::unordered_map<std::string, std::size_t> index_;
};

inline constexpr const char* kSrgVersion = "1";

/// SRG-JSON decoding. SchemaError for malformed documents, IntegrityError
/// for graph invariant violations, ValueError for unknown Bloom names.
Srg parse_srg(std::string_view document);
Srg srg_from_json(const nlohmann::json& doc);

nlohmann::json srg_to_json(const Srg& g);
std::string serialize_srg(const Srg& g);

nlohmann::json evidence_to_json(const Evidence& e);
Evidence evidence_from_json(const nlohmann::json& doc);

/// Reads a whole file; throws SchemaError when it cannot be opened.
std::string read_text_file(const std::string& path);
Srg load_srg_file(const std::string& path);

}  // namespace srg
