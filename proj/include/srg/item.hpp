// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "srg/feedback.hpp"
#include "srg/graph.hpp"
#include "srg/ontology.hpp"
#include "srg/scoring.hpp"

namespace srg {

inline constexpr std::size_t kDefaultTMax = 5;

/// One assessment item: prompt assets, rubric, gold graph, ontology, hint
/// templates and scoring parameters.
struct ItemSpec {
    std::string item_id;
    std::string prompt_text;
    std::vector<std::string> image_refs;
    std::string rubric_text;
    Srg gold;
    Ontology ontology;
    Phi phi;
    ScoringParams scoring;
    Bloom highest_bloom = Bloom::Remember;
    std::size_t hint_limit = 3;
    std::size_t t_max = kDefaultTMax;
};

using ItemPtr = std::shared_ptr<const ItemSpec>;

/// Throws SpecValidationError, or IncompleteMapping when phi lacks a gold key.
void validate_item(const ItemSpec& item);

/// Reads <dir>/{item.json, ontology.json, gold.srg.json, phi.json} and
/// validates the result. Throws LayoutError for missing files.
ItemSpec load_item(const std::filesystem::path& dir);

/// Writes the four item files into `dir` (created if needed).
void write_item(const std::filesystem::path& dir, const ItemSpec& item);

nlohmann::json item_summary_json(const ItemSpec& item);
nlohmann::json item_to_json(const ItemSpec& item, bool include_gold);

struct LabeledSample {
    std::string sample_id;
    Srg student;
    Band human_band = Band::Beginning;
};

struct Dataset {
    std::vector<ItemPtr> items;  ///< sorted by item id
    std::map<std::string, std::vector<LabeledSample>> samples;  ///< per item, sorted by sample id
    std::vector<std::string> warnings;

    ItemPtr find(std::string_view item_id) const;
    std::size_t sample_count() const noexcept;
};

/// Loads every item directory under `root`. Invalid items are fatal;
/// invalid or unlabeled samples are skipped with a warning. Throws
/// LayoutError when `root` holds no items.
Dataset load_dataset(const std::filesystem::path& root);

/// Parses labels.csv ("sample_id,band" with a header row).
std::map<std::string, Band> parse_labels_csv(std::string_view text);

}  // namespace srg
