// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#include "srg/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "srg/errors.hpp"

namespace srg {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 6> kKindNames = {
    "missing_node", "missing_edge", "bloom_regression", "extraneous_node", "extraneous_edge", "concept_mismatch",
};

bool is_repair(DeficiencyKind k) noexcept {
    return k == DeficiencyKind::MissingNode || k == DeficiencyKind::MissingEdge ||
           k == DeficiencyKind::BloomRegression;
}

std::string student_id_of(const Deficiency& d) {
    if (!d.student_ref) return {};
    return d.student_ref->is_edge() ? d.student_ref->source + "->" + d.student_ref->target : d.student_ref->id;
}

json bloom_or_null(const std::optional<Bloom>& b) {
    return b ? json(std::string(to_string(*b))) : json(nullptr);
}

std::optional<Bloom> bloom_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    return bloom_from_string(j.get<std::string>());
}

json ref_to_json(const ElementRef& r) {
    if (r.is_edge()) {
        return {{"source", r.source},
                {"target", r.target},
                {"relation", r.relation},
                {"source_concept", r.source_concept},
                {"target_concept", r.target_concept}};
    }
    return {{"id", r.id}, {"concept", r.concept_id}, {"bloom", bloom_or_null(r.bloom)}};
}

ElementRef ref_from_json(const json& j) {
    ElementRef r;
    if (j.contains("relation")) {
        r.source = j.at("source").get<std::string>();
        r.target = j.at("target").get<std::string>();
        r.relation = j.at("relation").get<std::string>();
        r.source_concept = j.at("source_concept").get<std::string>();
        r.target_concept = j.at("target_concept").get<std::string>();
    } else {
        r.id = j.at("id").get<std::string>();
        r.concept_id = j.at("concept").get<std::string>();
        r.bloom = bloom_from_json(j.at("bloom"));
    }
    return r;
}

std::string describe(const ElementRef& r) {
    if (r.is_edge()) {
        return r.source_concept + " -[" + r.relation + "]-> " + r.target_concept;
    }
    return r.concept_id;
}

std::string caution_text(const Deficiency& d) {
    switch (d.kind) {
        case DeficiencyKind::ExtraneousNode:
            return "Check whether " + describe(*d.student_ref) + " belongs in this model; the expected answer does not use it";
        case DeficiencyKind::ExtraneousEdge:
            return "Check the link " + describe(*d.student_ref) + "; the expected answer does not include it";
        case DeficiencyKind::ConceptMismatch:
            return "The part drawn as " + d.student_ref->concept_id + " looks like it should show " +
                   d.gold_ref->concept_id;
        default:
            return {};
    }
}

double unit_coord(const json& v) {
    const double x = v.get<double>();
    if (!(x >= 0.0 && x <= 1.0)) {
        throw SchemaError("phi: overlay coordinates must lie in [0, 1]");
    }
    return x;
}

}  // namespace

std::string_view to_string(DeficiencyKind k) noexcept { return kKindNames[static_cast<std::size_t>(k)]; }

DeficiencyKind deficiency_kind_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == s) return static_cast<DeficiencyKind>(i);
    }
    throw ValueError("unknown deficiency kind \"" + std::string(s) + "\"");
}

std::string_view to_string(Cause c) noexcept { return c == Cause::Perceptual ? "perceptual" : "conceptual"; }

Cause cause_from_string(std::string_view s) {
    if (s == "perceptual") return Cause::Perceptual;
    if (s == "conceptual") return Cause::Conceptual;
    throw ValueError("unknown cause \"" + std::string(s) + "\"");
}

std::string_view to_string(OverlayPrimitive::Shape s) noexcept {
    switch (s) {
        case OverlayPrimitive::Shape::Marker: return "marker";
        case OverlayPrimitive::Shape::Arrow: return "arrow";
        case OverlayPrimitive::Shape::Label: return "label";
    }
    return "marker";
}

ElementRef ElementRef::of(const SrgNode& n) {
    ElementRef r;
    r.id = n.id;
    r.concept_id = n.concept_id;
    r.bloom = n.bloom;
    return r;
}

ElementRef ElementRef::of(const SrgEdge& e, const Srg& g) {
    ElementRef r;
    r.source = e.source;
    r.target = e.target;
    r.relation = e.relation;
    r.source_concept = g.find_node(e.source)->concept_id;
    r.target_concept = g.find_node(e.target)->concept_id;
    return r;
}

std::string Deficiency::key() const {
    const bool gold_side = kind != DeficiencyKind::ExtraneousNode && kind != DeficiencyKind::ExtraneousEdge;
    const std::optional<ElementRef>& ref = gold_side ? gold_ref : student_ref;
    if (!ref) return {};
    return ref->is_edge() ? edge_key(ref->source_concept, ref->relation, ref->target_concept) : ref->concept_id;
}

Cause classify_cause(double sim, std::string_view student_evidence_text) noexcept {
    return sim >= kMismatchSimilarity && !student_evidence_text.empty() ? Cause::Perceptual : Cause::Conceptual;
}

std::vector<Deficiency> deficiencies(const Srg& student, const Srg& gold, const Alignment& a, const Ontology& o) {
    std::vector<Deficiency> out;
    std::unordered_map<std::string, std::string> to_student;  // gold id -> student id
    std::unordered_map<std::string, std::string> to_gold;

    for (const AlignedPair& p : a.pairs) {
        const SrgNode* sn = student.find_node(p.student_id);
        const SrgNode* gn = gold.find_node(p.gold_id);
        if (sn == nullptr || gn == nullptr) continue;
        const double sim = o.sim_or_zero(sn->concept_id, gn->concept_id);
        if (sn->concept_id != gn->concept_id) {
            if (sim < kMismatchSimilarity) continue;
            Deficiency d;
            d.kind = DeficiencyKind::ConceptMismatch;
            d.gold_ref = ElementRef::of(*gn);
            d.student_ref = ElementRef::of(*sn);
            d.expected_bloom = gn->bloom;
            d.cause = classify_cause(sim, sn->evidence.text);
            out.push_back(std::move(d));
        }
        to_student.emplace(gn->id, sn->id);
        to_gold.emplace(sn->id, gn->id);
        if (ordinal(sn->bloom) < ordinal(gn->bloom)) {
            Deficiency d;
            d.kind = DeficiencyKind::BloomRegression;
            d.gold_ref = ElementRef::of(*gn);
            d.student_ref = ElementRef::of(*sn);
            d.expected_bloom = gn->bloom;
            d.cause = classify_cause(sim, sn->evidence.text);
            out.push_back(std::move(d));
        }
    }

    for (const SrgNode& gn : gold.nodes()) {
        if (to_student.contains(gn.id)) continue;
        Deficiency d;
        d.kind = DeficiencyKind::MissingNode;
        d.gold_ref = ElementRef::of(gn);
        d.expected_bloom = gn.bloom;
        d.cause = classify_cause(0.0, {});
        out.push_back(std::move(d));
    }

    for (const SrgEdge& ge : gold.edges()) {
        auto s = to_student.find(ge.source);
        auto t = to_student.find(ge.target);
        const bool present = s != to_student.end() && t != to_student.end() &&
                             student.has_edge(s->second, t->second, ge.relation);
        if (present) continue;
        Deficiency d;
        d.kind = DeficiencyKind::MissingEdge;
        d.gold_ref = ElementRef::of(ge, gold);
        const Bloom bs = gold.find_node(ge.source)->bloom;
        const Bloom bt = gold.find_node(ge.target)->bloom;
        d.expected_bloom = ordinal(bs) >= ordinal(bt) ? bs : bt;
        d.cause = classify_cause(0.0, {});
        if (s != to_student.end()) d.student_source = s->second;
        if (t != to_student.end()) d.student_target = t->second;
        out.push_back(std::move(d));
    }

    for (const SrgNode& sn : student.nodes()) {
        if (to_gold.contains(sn.id)) continue;
        Deficiency d;
        d.kind = DeficiencyKind::ExtraneousNode;
        d.student_ref = ElementRef::of(sn);
        d.cause = classify_cause(0.0, sn.evidence.text);
        out.push_back(std::move(d));
    }

    for (const SrgEdge& se : student.edges()) {
        auto s = to_gold.find(se.source);
        auto t = to_gold.find(se.target);
        const bool present =
            s != to_gold.end() && t != to_gold.end() && gold.has_edge(s->second, t->second, se.relation);
        if (present) continue;
        Deficiency d;
        d.kind = DeficiencyKind::ExtraneousEdge;
        d.student_ref = ElementRef::of(se, student);
        d.cause = classify_cause(0.0, se.evidence.text);
        out.push_back(std::move(d));
    }

    std::stable_sort(out.begin(), out.end(), [](const Deficiency& x, const Deficiency& y) {
        return std::make_tuple(static_cast<int>(x.kind), x.key(), student_id_of(x)) <
               std::make_tuple(static_cast<int>(y.kind), y.key(), student_id_of(y));
    });
    return out;
}

std::string edge_key(std::string_view source_concept, std::string_view relation, std::string_view target_concept) {
    std::string k;
    k.reserve(source_concept.size() + relation.size() + target_concept.size() + 2);
    k.append(source_concept).append("|").append(relation).append("|").append(target_concept);
    return k;
}

std::string node_key(const SrgNode& n) { return n.concept_id; }

std::string edge_key(const SrgEdge& e, const Srg& g) {
    return edge_key(g.find_node(e.source)->concept_id, e.relation, g.find_node(e.target)->concept_id);
}

std::vector<std::string> missing_phi_keys(const Phi& phi, const Srg& gold) {
    std::set<std::string> missing;
    for (const SrgNode& n : gold.nodes()) {
        if (!phi.contains(node_key(n))) missing.insert(node_key(n));
    }
    for (const SrgEdge& e : gold.edges()) {
        if (!phi.contains(edge_key(e, gold))) missing.insert(edge_key(e, gold));
    }
    return {missing.begin(), missing.end()};
}

Phi phi_from_json(const json& doc, const Srg& gold) {
    if (!doc.is_object() || !doc.contains("templates") || !doc["templates"].is_array()) {
        throw SchemaError("phi: expected {\"templates\": [...]}");
    }
    Phi phi;
    try {
        for (const json& jt : doc["templates"]) {
            HintTemplate t;
            const json& jk = jt.at("key");
            if (jk.is_string()) {
                t.key = jk.get<std::string>();
            } else if (jk.is_array() && jk.size() == 3) {
                t.key = edge_key(jk[0].get<std::string>(), jk[1].get<std::string>(), jk[2].get<std::string>());
            } else {
                throw SchemaError("phi: key must be a concept or a [source, relation, target] triple");
            }
            t.hint_text = jt.at("hint_text").get<std::string>();
            for (const json& jo : jt.value("overlay", json::array())) {
                OverlayPrimitive op;
                const std::string shape = jo.at("shape").get<std::string>();
                if (shape == "marker") {
                    op.shape = OverlayPrimitive::Shape::Marker;
                } else if (shape == "arrow") {
                    op.shape = OverlayPrimitive::Shape::Arrow;
                } else if (shape == "label") {
                    op.shape = OverlayPrimitive::Shape::Label;
                } else {
                    throw SchemaError("phi: unknown overlay shape \"" + shape + "\"");
                }
                if (auto it = jo.find("box"); it != jo.end() && !it->is_null()) {
                    if (!it->is_array() || it->size() != 4) {
                        throw SchemaError("phi: overlay box must be [x0, y0, x1, y1]");
                    }
                    op.x0 = unit_coord((*it)[0]);
                    op.y0 = unit_coord((*it)[1]);
                    op.x1 = unit_coord((*it)[2]);
                    op.y1 = unit_coord((*it)[3]);
                } else if (auto an = jo.find("anchor"); an != jo.end() && an->is_string()) {
                    const std::string anchor = an->get<std::string>();
                    auto node = std::find_if(gold.nodes().begin(), gold.nodes().end(), [&](const SrgNode& n) {
                        return n.concept_id == anchor && n.evidence.region.has_value();
                    });
                    if (node == gold.nodes().end()) {
                        throw SchemaError("phi: anchor \"" + anchor + "\" has no gold evidence region");
                    }
                    op.x0 = node->evidence.region->x0;
                    op.y0 = node->evidence.region->y0;
                    op.x1 = node->evidence.region->x1;
                    op.y1 = node->evidence.region->y1;
                } else {
                    throw SchemaError("phi: overlay primitives need a box or an anchor");
                }
                if (auto tx = jo.find("text"); tx != jo.end() && tx->is_string()) {
                    op.text = tx->get<std::string>();
                }
                t.overlay.push_back(std::move(op));
            }
            if (t.overlay.empty()) {
                throw SchemaError("phi: template \"" + t.key + "\" has no overlay");
            }
            std::string key = t.key;
            if (!phi.emplace(std::move(key), std::move(t)).second) {
                throw SchemaError("phi: duplicate key");
            }
        }
    } catch (const json::exception& e) {
        throw SchemaError(std::string("phi: ") + e.what());
    }
    return phi;
}

json phi_to_json(const Phi& phi) {
    json templates = json::array();
    for (const auto& [key, t] : phi) {
        json jk = key;
        if (auto a = key.find('|'); a != std::string::npos) {
            auto b = key.find('|', a + 1);
            jk = {key.substr(0, a), key.substr(a + 1, b - a - 1), key.substr(b + 1)};
        }
        json overlay = json::array();
        for (const OverlayPrimitive& op : t.overlay) {
            json jo = {{"shape", std::string(to_string(op.shape))}, {"box", {op.x0, op.y0, op.x1, op.y1}}};
            if (!op.text.empty()) jo["text"] = op.text;
            overlay.push_back(std::move(jo));
        }
        templates.push_back({{"key", std::move(jk)}, {"hint_text", t.hint_text}, {"overlay", std::move(overlay)}});
    }
    return {{"templates", std::move(templates)}};
}

bool needs_guided_reconstruction(const Srg& student) noexcept {
    return std::all_of(student.nodes().begin(), student.nodes().end(),
                       [](const SrgNode& n) { return n.bloom == Bloom::Remember; });
}

std::vector<VisualHint> hints(const std::vector<Deficiency>& defs, const Phi& phi, const HintOptions& opts) {
    std::vector<const Deficiency*> repairs;
    std::vector<const Deficiency*> cautions;
    for (const Deficiency& d : defs) {
        (is_repair(d.kind) ? repairs : cautions).push_back(&d);
    }
    auto rank = [&](const Deficiency* d) {
        const int level = d->expected_bloom ? ordinal(*d->expected_bloom) : 0;
        const int edge = d->gold_ref && d->gold_ref->is_edge() ? 1 : 0;
        return std::make_tuple(opts.guided ? edge : 0, level, edge, d->key(), static_cast<int>(d->kind),
                               student_id_of(*d));
    };
    std::stable_sort(repairs.begin(), repairs.end(),
                     [&](const Deficiency* x, const Deficiency* y) { return rank(x) < rank(y); });
    if (repairs.size() > opts.limit) repairs.resize(opts.limit);

    std::vector<VisualHint> out;
    std::set<std::string> ids;
    auto unique_id = [&](std::string id) {
        std::string candidate = id;
        for (int n = 2; !ids.insert(candidate).second; ++n) candidate = id + "#" + std::to_string(n);
        return candidate;
    };
    for (const Deficiency* d : repairs) {
        auto it = phi.find(d->key());
        if (it == phi.end()) {
            throw MissingTemplate("no hint template for \"" + d->key() + "\"");
        }
        VisualHint h;
        h.id = unique_id(std::string(to_string(d->kind)) + ":" + d->key());
        h.deficiency = *d;
        h.text = it->second.hint_text;
        h.overlay_ops = it->second.overlay;
        h.bloom_target = d->expected_bloom.value_or(Bloom::Remember);
        out.push_back(std::move(h));
    }
    for (const Deficiency* d : cautions) {
        VisualHint h;
        h.id = unique_id("caution:" + std::string(to_string(d->kind)) + ":" + d->key());
        h.deficiency = *d;
        h.text = caution_text(*d);
        if (d->expected_bloom) {
            h.bloom_target = *d->expected_bloom;
        } else if (d->student_ref && d->student_ref->bloom) {
            h.bloom_target = *d->student_ref->bloom;
        }
        out.push_back(std::move(h));
    }
    return out;
}

FeedbackReport feedback_report(const SimilarityBreakdown& b, const Srg& student, const Srg& gold,
                               const std::vector<Deficiency>& defs, const std::vector<VisualHint>& hs) {
    FeedbackReport r;
    r.similarity = b.s;
    r.band = b.band;
    r.dominant_bloom = b.dominant_bloom;
    for (const AlignedPair& p : b.alignment.pairs) {
        if (p.weight < kStrengthWeight) continue;
        const SrgNode* gn = gold.find_node(p.gold_id);
        const SrgNode* sn = student.find_node(p.student_id);
        if (gn == nullptr || sn == nullptr || gn->concept_id != sn->concept_id) continue;
        r.strengths.push_back({p.student_id, p.gold_id, gn->concept_id, p.weight});
    }
    std::stable_sort(r.strengths.begin(), r.strengths.end(),
                     [](const auto& x, const auto& y) { return x.weight > y.weight; });
    for (const Deficiency& d : defs) {
        if (d.kind == DeficiencyKind::MissingNode) r.missing_concepts.push_back(d.gold_ref->concept_id);
    }
    for (const VisualHint& h : hs) r.guidance.push_back({h.id, h.text});
    r.gaps = defs;
    return r;
}

json deficiency_to_json(const Deficiency& d) {
    return {{"kind", std::string(to_string(d.kind))},
            {"key", d.key()},
            {"gold_ref", d.gold_ref ? ref_to_json(*d.gold_ref) : json(nullptr)},
            {"student_ref", d.student_ref ? ref_to_json(*d.student_ref) : json(nullptr)},
            {"expected_bloom", bloom_or_null(d.expected_bloom)},
            {"cause", std::string(to_string(d.cause))},
            {"student_source", d.student_source},
            {"student_target", d.student_target}};
}

Deficiency deficiency_from_json(const json& j) {
    Deficiency d;
    d.kind = deficiency_kind_from_string(j.at("kind").get<std::string>());
    if (!j.at("gold_ref").is_null()) d.gold_ref = ref_from_json(j.at("gold_ref"));
    if (!j.at("student_ref").is_null()) d.student_ref = ref_from_json(j.at("student_ref"));
    d.expected_bloom = bloom_from_json(j.at("expected_bloom"));
    d.cause = cause_from_string(j.at("cause").get<std::string>());
    d.student_source = j.value("student_source", "");
    d.student_target = j.value("student_target", "");
    return d;
}

json hint_to_json(const VisualHint& h) {
    json ops = json::array();
    for (const OverlayPrimitive& op : h.overlay_ops) {
        ops.push_back({{"shape", std::string(to_string(op.shape))},
                       {"box", {op.x0, op.y0, op.x1, op.y1}},
                       {"text", op.text.empty() ? json(nullptr) : json(op.text)}});
    }
    return {{"id", h.id},
            {"text", h.text},
            {"bloom_target", std::string(to_string(h.bloom_target))},
            {"deficiency", deficiency_to_json(h.deficiency)},
            {"overlay", std::move(ops)}};
}

json report_to_json(const FeedbackReport& r) {
    json strengths = json::array();
    for (const auto& s : r.strengths) {
        strengths.push_back(
            {{"student_id", s.student_id}, {"gold_id", s.gold_id}, {"concept", s.concept_id}, {"weight", s.weight}});
    }
    json guidance = json::array();
    for (const auto& g : r.guidance) guidance.push_back({{"hint_id", g.hint_id}, {"text", g.text}});
    json gaps = json::array();
    for (const Deficiency& d : r.gaps) gaps.push_back(deficiency_to_json(d));
    return {{"similarity", r.similarity},
            {"band", std::string(to_string(r.band))},
            {"dominant_bloom", bloom_or_null(r.dominant_bloom)},
            {"strengths", std::move(strengths)},
            {"missing_concepts", r.missing_concepts},
            {"guidance", std::move(guidance)},
            {"gaps", std::move(gaps)}};
}

FeedbackReport report_from_json(const json& j) {
    FeedbackReport r;
    try {
        r.similarity = j.at("similarity").get<double>();
        r.band = band_from_string(j.at("band").get<std::string>());
        r.dominant_bloom = bloom_from_json(j.at("dominant_bloom"));
        for (const json& s : j.at("strengths")) {
            r.strengths.push_back({s.at("student_id").get<std::string>(), s.at("gold_id").get<std::string>(),
                                   s.at("concept").get<std::string>(), s.at("weight").get<double>()});
        }
        r.missing_concepts = j.at("missing_concepts").get<std::vector<std::string>>();
        for (const json& g : j.at("guidance")) {
            r.guidance.push_back({g.at("hint_id").get<std::string>(), g.at("text").get<std::string>()});
        }
        for (const json& d : j.at("gaps")) r.gaps.push_back(deficiency_from_json(d));
    } catch (const json::exception& e) {
        throw SchemaError(std::string("feedback report: ") + e.what());
    }
    return r;
}

std::string report_to_text(const FeedbackReport& r) {
    const json j = report_to_json(r);
    std::ostringstream out;
    char score[32];
    std::snprintf(score, sizeof score, "%.3f", j["similarity"].get<double>());
    out << "Similarity score: " << score << "\n";
    out << "Proficiency level: " << j["band"].get<std::string>() << "\n";
    if (!j["dominant_bloom"].is_null()) {
        out << "Dominant Bloom level: " << j["dominant_bloom"].get<std::string>() << "\n";
    }
    out << "\nStrengths:\n";
    for (const json& s : j["strengths"]) {
        out << "  - " << s["concept"].get<std::string>() << "\n";
    }
    out << "\nNeeds attention:\n";
    if (!j["missing_concepts"].empty()) {
        out << "  Missing concepts: ";
        bool first = true;
        for (const json& c : j["missing_concepts"]) {
            out << (first ? "" : ", ") << c.get<std::string>();
            first = false;
        }
        out << "\n";
    }
    out << "\nRevision guidance:\n";
    int n = 1;
    for (const json& g : j["guidance"]) {
        out << "  " << n++ << ". " << g["text"].get<std::string>() << "\n";
    }
    out << "\nReasoning gaps:\n";
    for (const json& d : j["gaps"]) {
        out << "  - " << d["kind"].get<std::string>() << " " << d["key"].get<std::string>();
        if (!d["expected_bloom"].is_null()) {
            out << " (expected " << d["expected_bloom"].get<std::string>() << ", " << d["cause"].get<std::string>()
                << ")";
        } else {
            out << " (" << d["cause"].get<std::string>() << ")";
        }
        out << "\n";
    }
    return out.str();
}

OverlayScript render_overlay(const std::vector<VisualHint>& hs, int width, int height) {
    if (width <= 0 || height <= 0) {
        throw ValueError("canvas size must be positive");
    }
    const double w = width;
    const double h = height;
    OverlayScript script;
    for (const VisualHint& hint : hs) {
        for (const OverlayPrimitive& op : hint.overlay_ops) {
            OverlayInstruction ins;
            switch (op.shape) {
                case OverlayPrimitive::Shape::Marker: ins.op = "rect"; break;
                case OverlayPrimitive::Shape::Arrow: ins.op = "arrow"; break;
                case OverlayPrimitive::Shape::Label: ins.op = "label"; break;
            }
            ins.x0 = std::lround(op.x0 * w);
            ins.y0 = std::lround(op.y0 * h);
            ins.x1 = std::lround(op.x1 * w);
            ins.y1 = std::lround(op.y1 * h);
            if (op.shape == OverlayPrimitive::Shape::Label) {
                ins.text = op.text.empty() ? hint.text : op.text;
            } else if (!op.text.empty()) {
                ins.text = op.text;
            }
            ins.hint_id = hint.id;
            script.push_back(std::move(ins));
        }
    }
    return script;
}

json overlay_to_json(const OverlayScript& s) {
    json out = json::array();
    for (const OverlayInstruction& i : s) {
        out.push_back({{"op", i.op},
                       {"x0", i.x0},
                       {"y0", i.y0},
                       {"x1", i.x1},
                       {"y1", i.y1},
                       {"text", i.text ? json(*i.text) : json(nullptr)},
                       {"hint_id", i.hint_id}});
    }
    return out;
}

}  // namespace srg
