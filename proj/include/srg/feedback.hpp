// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "srg/alignment.hpp"
#include "srg/graph.hpp"
#include "srg/ontology.hpp"
#include "srg/scoring.hpp"

namespace srg {

enum class DeficiencyKind {
    MissingNode,
    MissingEdge,
    BloomRegression,
    ExtraneousNode,
    ExtraneousEdge,
    ConceptMismatch,
};

enum class Cause { Conceptual, Perceptual };

std::string_view to_string(DeficiencyKind k) noexcept;
DeficiencyKind deficiency_kind_from_string(std::string_view s);
std::string_view to_string(Cause c) noexcept;
Cause cause_from_string(std::string_view s);

/// Names a node (id, concept, bloom) or an edge (source, target, relation
/// plus the endpoint concepts) of one graph.
struct ElementRef {
    std::string id;
    std::string concept_id;
    std::optional<Bloom> bloom;
    std::string source;
    std::string target;
    std::string relation;
    std::string source_concept;
    std::string target_concept;

    bool is_edge() const noexcept { return !relation.empty(); }

    static ElementRef of(const SrgNode& n);
    static ElementRef of(const SrgEdge& e, const Srg& g);

    friend bool operator==(const ElementRef&, const ElementRef&) = default;
};

struct Deficiency {
    DeficiencyKind kind = DeficiencyKind::MissingNode;
    std::optional<ElementRef> gold_ref;
    std::optional<ElementRef> student_ref;
    std::optional<Bloom> expected_bloom;
    Cause cause = Cause::Conceptual;
    /// Student nodes aligned with the gold endpoints of a missing edge, when
    /// they exist at diagnosis time.
    std::string student_source;
    std::string student_target;

    /// Reverse-mapping key of the gold element, or of the student element
    /// for extraneous kinds.
    std::string key() const;

    friend bool operator==(const Deficiency&, const Deficiency&) = default;
};

/// Similarity at or above which two differently labelled concepts count as
/// the same idea drawn or named wrongly.
inline constexpr double kMismatchSimilarity = 0.7;

/// Perceptual when the concepts are close and the student left visible
/// evidence; conceptual otherwise.
Cause classify_cause(double sim, std::string_view student_evidence_text) noexcept;

/// Gold elements the student lacks, regressed Bloom levels, student
/// elements with no gold counterpart and near-miss concept labels. Aligned
/// pairs with different concepts below kMismatchSimilarity are reported as a
/// missing gold node plus an extraneous student node. Ordered by kind, then
/// key.
std::vector<Deficiency> deficiencies(const Srg& student, const Srg& gold, const Alignment& a, const Ontology& o);

struct OverlayPrimitive {
    enum class Shape { Marker, Arrow, Label };

    Shape shape = Shape::Marker;
    // Marker: rectangle. Arrow: (x0, y0) -> (x1, y1). Label: anchored at (x0, y0).
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;
    std::string text;

    friend bool operator==(const OverlayPrimitive&, const OverlayPrimitive&) = default;
};

std::string_view to_string(OverlayPrimitive::Shape s) noexcept;

struct HintTemplate {
    std::string key;
    std::string hint_text;
    std::vector<OverlayPrimitive> overlay;

    friend bool operator==(const HintTemplate&, const HintTemplate&) = default;
};

using Phi = std::map<std::string, HintTemplate, std::less<>>;

/// "source_concept|relation|target_concept".
std::string edge_key(std::string_view source_concept, std::string_view relation, std::string_view target_concept);
std::string node_key(const SrgNode& n);
std::string edge_key(const SrgEdge& e, const Srg& g);

/// Keys of gold elements with no template.
std::vector<std::string> missing_phi_keys(const Phi& phi, const Srg& gold);

/// Parses {"templates": [...]}; overlay anchors naming a concept resolve to
/// that gold node's evidence region. Throws SchemaError.
Phi phi_from_json(const nlohmann::json& doc, const Srg& gold);
nlohmann::json phi_to_json(const Phi& phi);

struct VisualHint {
    std::string id;
    Deficiency deficiency;
    std::string text;
    std::vector<OverlayPrimitive> overlay_ops;
    Bloom bloom_target = Bloom::Remember;

    friend bool operator==(const VisualHint&, const VisualHint&) = default;
};

struct HintOptions {
    std::size_t limit = 3;
    /// Node hints before edge hints regardless of level; used when every
    /// student node sits at Remember.
    bool guided = false;
};

/// Repair hints for missing and regressed elements, ordered by expected
/// Bloom level, then nodes before edges, then key, and truncated to
/// `limit`. Text-only cautions for extraneous and mismatched elements
/// follow. Throws MissingTemplate.
std::vector<VisualHint> hints(const std::vector<Deficiency>& defs, const Phi& phi, const HintOptions& opts = {});

/// True when the student graph is non-empty and every node is at Remember,
/// or the graph is empty.
bool needs_guided_reconstruction(const Srg& student) noexcept;

struct FeedbackReport {
    struct Strength {
        std::string student_id;
        std::string gold_id;
        std::string concept_id;
        double weight = 0.0;
        friend bool operator==(const Strength&, const Strength&) = default;
    };
    struct Guidance {
        std::string hint_id;
        std::string text;
        friend bool operator==(const Guidance&, const Guidance&) = default;
    };

    double similarity = 0.0;
    Band band = Band::Beginning;
    std::optional<Bloom> dominant_bloom;
    std::vector<Strength> strengths;
    std::vector<std::string> missing_concepts;
    std::vector<Guidance> guidance;
    std::vector<Deficiency> gaps;

    friend bool operator==(const FeedbackReport&, const FeedbackReport&) = default;
};

/// Aligned pairs at or above this weight are listed as strengths.
inline constexpr double kStrengthWeight = 0.75;

FeedbackReport feedback_report(const SimilarityBreakdown& b, const Srg& student, const Srg& gold,
                               const std::vector<Deficiency>& defs, const std::vector<VisualHint>& hs);

nlohmann::json report_to_json(const FeedbackReport& r);
FeedbackReport report_from_json(const nlohmann::json& doc);
/// Plain-text view derived from the canonical JSON form.
std::string report_to_text(const FeedbackReport& r);

nlohmann::json deficiency_to_json(const Deficiency& d);
Deficiency deficiency_from_json(const nlohmann::json& doc);
nlohmann::json hint_to_json(const VisualHint& h);

struct OverlayInstruction {
    std::string op;  // "rect", "arrow" or "label"
    long x0 = 0;
    long y0 = 0;
    long x1 = 0;
    long y1 = 0;
    std::optional<std::string> text;
    std::string hint_id;

    friend bool operator==(const OverlayInstruction&, const OverlayInstruction&) = default;
};

using OverlayScript = std::vector<OverlayInstruction>;

/// Scales every overlay primitive to pixels, rounding to nearest. Throws
/// ValueError unless width and height are positive.
OverlayScript render_overlay(const std::vector<VisualHint>& hs, int width, int height);

nlohmann::json overlay_to_json(const OverlayScript& s);

}  // namespace srg
