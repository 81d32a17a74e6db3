// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#include "srg/scoring.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "srg/errors.hpp"

namespace srg {

using nlohmann::json;

std::string_view to_string(Band b) noexcept {
    switch (b) {
        case Band::Beginning: return "Beginning";
        case Band::Developing: return "Developing";
        case Band::Proficient: return "Proficient";
    }
    return "Beginning";
}

Band band_from_string(std::string_view s) {
    if (s == "Beginning") return Band::Beginning;
    if (s == "Developing") return Band::Developing;
    if (s == "Proficient") return Band::Proficient;
    throw ValueError("unknown proficiency band \"" + std::string(s) + "\"");
}

void ScoringParams::validate() const {
    if (!(gamma1 >= 0.0) || !(gamma2 >= 0.0) || std::abs(gamma1 + gamma2 - 1.0) > 1e-9) {
        throw ValueError("gamma1 and gamma2 must be non-negative and sum to 1");
    }
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw ValueError("tau must lie in [0, 1]");
    }
    if (!(0.0 <= t1 && t1 <= t2 && t2 <= 1.0)) {
        throw ValueError("band thresholds must satisfy 0 <= t1 <= t2 <= 1");
    }
    if (beam_width == 0) {
        throw ValueError("beam width must be at least 1");
    }
    alignment.validate();
    costs.validate();
}

double composite_score(double ged_cost, std::size_t z, double f_oa, double gamma1, double gamma2) noexcept {
    const double s = 1.0 - (gamma1 * ged_cost / static_cast<double>(z) + gamma2 * (1.0 - f_oa));
    return std::clamp(s, 0.0, 1.0);
}

std::optional<Bloom> dominant_bloom(const Alignment& a, const Srg& student, double s, double tau) {
    if (!(s > tau) || a.pairs.empty()) {
        return std::nullopt;
    }
    std::array<int, 7> counts{};
    for (const AlignedPair& p : a.pairs) {
        if (const SrgNode* n = student.find_node(p.student_id)) {
            ++counts[static_cast<std::size_t>(ordinal(n->bloom))];
        }
    }
    int best = 0;
    for (int level = 1; level <= 6; ++level) {
        if (counts[static_cast<std::size_t>(level)] > counts[static_cast<std::size_t>(best)]) best = level;
    }
    if (best == 0) {
        return std::nullopt;
    }
    return bloom_from_ordinal(best);
}

Band band(double s, const ScoringParams& p) noexcept {
    if (s < p.t1) return Band::Beginning;
    if (s < p.t2) return Band::Developing;
    return Band::Proficient;
}

namespace {

GedResult select_ged(const Srg& student, const Srg& gold, const Ontology& o, const ScoringParams& p) {
    if (student.node_count() + gold.node_count() <= p.exact_limit || !p.beam_fallback) {
        return ged_exact(student, gold, p.costs, o, p.exact_limit);
    }
    return ged_beam(student, gold, p.costs, o, p.beam_width);
}

}  // namespace

SimilarityBreakdown similarity(const Srg& student, const Srg& gold, const Ontology& o, const ScoringParams& p) {
    p.validate();
    SimilarityBreakdown b;
    b.alignment = best_alignment(student.nodes(), gold.nodes(), o, p.alignment);
    b.f_oa = f_oa(b.alignment, student.node_count(), gold.node_count(), p.alignment);
    b.ged = select_ged(student, gold, o, p);
    b.ged_cost = b.ged.cost;
    b.z = normalizer_z(student, gold);
    b.s = composite_score(b.ged_cost, b.z, b.f_oa, p.gamma1, p.gamma2);
    b.dominant_bloom = dominant_bloom(b.alignment, student, b.s, p.tau);
    b.band = band(b.s, p);
    return b;
}

CalibrationResult calibrate(std::span<const CalibrationRecord> records, const CalibrationGrid& grid,
                            const ScoringParams& base) {
    if (records.empty()) {
        throw EmptyTrainingSet("calibration needs at least one labeled record");
    }
    base.validate();
    std::vector<double> gammas = grid.gamma1;
    if (gammas.empty()) {
        for (int k = 0; k <= 20; ++k) gammas.push_back(k / 20.0);
    }
    std::vector<double> alphas = grid.alpha;
    if (alphas.empty()) alphas.push_back(base.alignment.alpha);

    // Edit distance does not depend on alpha or gamma: compute it once.
    std::vector<std::pair<double, std::size_t>> ged_z;
    for (const CalibrationRecord& r : records) {
        if (r.ontology == nullptr) {
            throw ValueError("calibration record without an ontology");
        }
        const GedResult g = select_ged(r.student, r.gold, *r.ontology, base);
        ged_z.emplace_back(g.cost, normalizer_z(r.student, r.gold));
    }

    const double alpha_pref = base.alignment.alpha;
    auto preferred = [](double x, double y, double center) {
        const double dx = std::abs(x - center);
        const double dy = std::abs(y - center);
        if (std::abs(dx - dy) > 1e-12) return dx < dy;
        return x < y;
    };

    CalibrationResult best;
    int best_correct = -1;
    for (double alpha : alphas) {
        AlignmentParams ap = base.alignment;
        ap.alpha = alpha;
        ap.validate();
        std::vector<double> foa;
        for (const CalibrationRecord& r : records) {
            const Alignment a = best_alignment(r.student.nodes(), r.gold.nodes(), *r.ontology, ap);
            foa.push_back(f_oa(a, r.student.node_count(), r.gold.node_count(), ap));
        }
        for (double g1 : gammas) {
            ScoringParams p = base;
            p.alignment = ap;
            p.gamma1 = g1;
            p.gamma2 = 1.0 - g1;
            int correct = 0;
            for (std::size_t i = 0; i < records.size(); ++i) {
                const double s = composite_score(ged_z[i].first, ged_z[i].second, foa[i], p.gamma1, p.gamma2);
                if (band(s, p) == records[i].label) ++correct;
            }
            bool take = correct > best_correct;
            if (!take && correct == best_correct) {
                if (g1 != best.params.gamma1) {
                    take = preferred(g1, best.params.gamma1, 0.5);
                } else {
                    take = preferred(alpha, best.params.alignment.alpha, alpha_pref);
                }
            }
            if (take) {
                best_correct = correct;
                best.params = p;
                best.accuracy = static_cast<double>(correct) / static_cast<double>(records.size());
            }
        }
    }
    return best;
}

json breakdown_to_json(const SimilarityBreakdown& b) {
    return {{"s", b.s},
            {"ged_cost", b.ged_cost},
            {"z", b.z},
            {"f_oa", b.f_oa},
            {"alignment", alignment_to_json(b.alignment)},
            {"dominant_bloom", b.dominant_bloom ? json(std::string(to_string(*b.dominant_bloom))) : json(nullptr)},
            {"band", std::string(to_string(b.band))},
            {"ged", ged_result_to_json(b.ged)}};
}

json scoring_params_to_json(const ScoringParams& p) {
    return {{"gamma1", p.gamma1},
            {"gamma2", p.gamma2},
            {"tau", p.tau},
            {"band_thresholds", {p.t1, p.t2}},
            {"alignment", alignment_params_to_json(p.alignment)},
            {"costs", cost_model_to_json(p.costs)},
            {"exact_limit", p.exact_limit},
            {"beam_width", p.beam_width},
            {"beam_fallback", p.beam_fallback}};
}

ScoringParams scoring_params_from_json(const json& doc, ScoringParams p) {
    if (!doc.is_object()) {
        throw SchemaError("scoring parameters must be an object");
    }
    try {
        if (doc.contains("gamma1")) {
            p.gamma1 = doc.at("gamma1").get<double>();
            p.gamma2 = 1.0 - p.gamma1;
        }
        if (doc.contains("gamma2")) p.gamma2 = doc.at("gamma2").get<double>();
        if (doc.contains("tau")) {
            p.tau = doc.at("tau").get<double>();
            p.t2 = p.tau;
        }
        if (doc.contains("band_thresholds")) {
            const json& t = doc.at("band_thresholds");
            if (!t.is_array() || t.size() != 2) {
                throw SchemaError("band_thresholds must be [t1, t2]");
            }
            p.t1 = t[0].get<double>();
            p.t2 = t[1].get<double>();
        }
        if (doc.contains("alignment")) p.alignment = alignment_params_from_json(doc.at("alignment"), p.alignment);
        if (doc.contains("costs")) p.costs = cost_model_from_json(doc.at("costs"), p.costs);
        if (doc.contains("exact_limit")) p.exact_limit = doc.at("exact_limit").get<std::size_t>();
        if (doc.contains("beam_width")) p.beam_width = doc.at("beam_width").get<std::size_t>();
        if (doc.contains("beam_fallback")) p.beam_fallback = doc.at("beam_fallback").get<bool>();
    } catch (const json::exception& e) {
        throw SchemaError(std::string("scoring parameters: ") + e.what());
    }
    p.validate();
    return p;
}

}  // namespace srg
