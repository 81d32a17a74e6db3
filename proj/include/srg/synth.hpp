// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "srg/item.hpp"
#include "srg/scoring.hpp"

namespace srg {

/// The six built-in synthetic items (R1-1, J2-1, M3-1, H4-1, H5-1, J6-1),
/// each with default scoring parameters.
std::vector<ItemSpec> synthetic_items();

struct SynthOptions {
    std::size_t samples_per_item = 30;  ///< split evenly across the three bands
    std::uint64_t seed = 7;
    std::size_t max_attempts = 10000;   ///< per sample, before giving up
};

/// Student graphs derived from the gold graph with a planted band, kept only
/// when the item's scorer agrees with the planted label:
///   Proficient  gold with at most one benign perturbation
///   Developing  two or three mid-level elements removed
///   Beginning   at least 60% of all elements removed
/// Node ids are renamed and node order shuffled. Throws std::runtime_error
/// when a band cannot be reached within max_attempts.
std::vector<LabeledSample> synthetic_samples(const ItemSpec& item, const SynthOptions& opts);

/// Writes items, samples and labels.csv for every synthetic item under
/// `root`. Returns the number of samples written.
std::size_t write_synthetic_pack(const std::filesystem::path& root, const SynthOptions& opts);

/// Random degradation of the gold graph: node and edge removals, Bloom
/// regressions and occasional extraneous nodes, with renamed ids.
Srg degrade(const ItemSpec& item, std::mt19937_64& rng);

/// Records labeled by scoring with `gamma1` (gamma2 = 1 - gamma1) and the
/// items' other parameters. The ontology pointers refer into `items`.
std::vector<CalibrationRecord> planted_calibration_set(const std::vector<ItemSpec>& items, double gamma1,
                                                       std::size_t per_item, std::uint64_t seed);

}  // namespace srg
