// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "srg/alignment.hpp"
#include "srg/ged.hpp"
#include "srg/graph.hpp"
#include "srg/ontology.hpp"

namespace srg {

enum class Band { Beginning, Developing, Proficient };

std::string_view to_string(Band b) noexcept;
/// Throws ValueError.
Band band_from_string(std::string_view s);

struct ScoringParams {
    double gamma1 = 0.5;  ///< weight of normalized edit distance
    double gamma2 = 0.5;  ///< weight of alignment shortfall
    double tau = 0.75;    ///< adequacy threshold; also gates the dominant Bloom level
    double t1 = 0.5;      ///< Beginning / Developing boundary
    double t2 = 0.75;     ///< Developing / Proficient boundary (inclusive)
    AlignmentParams alignment;
    EditCostModel costs;
    std::size_t exact_limit = kDefaultExactLimit;
    std::size_t beam_width = kDefaultBeamWidth;
    bool beam_fallback = true;

    /// Throws ValueError on any violated constraint.
    void validate() const;
};

struct SimilarityBreakdown {
    double s = 0.0;
    double ged_cost = 0.0;
    std::size_t z = 1;
    double f_oa = 0.0;
    Alignment alignment;
    std::optional<Bloom> dominant_bloom;
    Band band = Band::Beginning;
    GedResult ged;
};

/// Composite similarity of a student graph against the gold graph.
/// Exact edit distance within `exact_limit`, otherwise beam search (or
/// SizeLimitExceeded when the fallback is disabled).
SimilarityBreakdown similarity(const Srg& student, const Srg& gold, const Ontology& o, const ScoringParams& p);

/// 1 - (gamma1 * ged / z + gamma2 * (1 - f_oa)), clamped to [0, 1].
double composite_score(double ged_cost, std::size_t z, double f_oa, double gamma1, double gamma2) noexcept;

/// Mode of the student-side Bloom levels over aligned pairs when s > tau;
/// ties go to the lower level.
std::optional<Bloom> dominant_bloom(const Alignment& a, const Srg& student, double s, double tau);

Band band(double s, const ScoringParams& p) noexcept;

struct CalibrationRecord {
    Srg student;
    Srg gold;
    const Ontology* ontology = nullptr;
    Band label = Band::Beginning;
};

struct CalibrationGrid {
    std::vector<double> gamma1;  ///< empty: 0, 0.05, ..., 1
    std::vector<double> alpha;   ///< empty: keep the base alpha
};

struct CalibrationResult {
    ScoringParams params;
    double accuracy = 0.0;
};

/// Grid search maximizing banding accuracy. Ties prefer gamma1 nearest 0.5
/// (then the smaller), then alpha nearest the base value (then the smaller).
/// Throws EmptyTrainingSet.
CalibrationResult calibrate(std::span<const CalibrationRecord> records, const CalibrationGrid& grid,
                            const ScoringParams& base = {});

nlohmann::json breakdown_to_json(const SimilarityBreakdown& b);
nlohmann::json scoring_params_to_json(const ScoringParams& p);
ScoringParams scoring_params_from_json(const nlohmann::json& doc, ScoringParams defaults = {});

}  // namespace srg
