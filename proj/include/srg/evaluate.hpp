// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "srg/item.hpp"
#include "srg/scoring.hpp"

namespace srg {

/// counts[human][predicted], indexed by Band.
using Confusion = std::array<std::array<std::size_t, 3>, 3>;

struct ItemEval {
    std::size_t total = 0;
    std::size_t correct = 0;
    double accuracy = 0.0;
    Confusion confusion{};
};

struct SamplePrediction {
    std::string item_id;
    std::string sample_id;
    Band human = Band::Beginning;
    std::optional<Band> predicted;  ///< empty when scoring failed
    double s = 0.0;
    std::string error;
};

struct EvalResult {
    std::map<std::string, ItemEval> per_item;
    double macro_average = 0.0;
    std::vector<SamplePrediction> predictions;  ///< sorted by (item, sample)
};

/// Arithmetic mean of per-item accuracies; 0 when there are no items.
double macro_average(const std::map<std::string, ItemEval>& per_item) noexcept;

/// Scores every labeled sample with its item's parameters (or `params`
/// when given) on up to `parallelism` threads. A prediction counts only on
/// an exact band match; scoring failures count as incorrect. The result is
/// independent of `parallelism`.
EvalResult evaluate(const Dataset& ds, std::size_t parallelism,
                    const std::optional<ScoringParams>& params = std::nullopt);

nlohmann::json eval_result_to_json(const EvalResult& r);

enum class TableFormat { Text, Markdown, Csv };

/// Throws ValueError.
TableFormat table_format_from_string(std::string_view s);

/// Accuracy table: one column per item plus "Average", values in percent.
struct AccuracyTable {
    struct Row {
        std::string label;
        std::vector<double> values;  ///< one per column, Average last
    };
    std::vector<std::string> columns;  ///< item ids then "Average"
    std::vector<Row> rows;
};

/// Item columns ordered R1-1, J2-1, M3-1, H4-1, H5-1, J6-1 first, any others
/// by id after them.
AccuracyTable table_from_result(const EvalResult& r, const std::string& label);

/// Values printed with one decimal.
std::string render_table(const AccuracyTable& t, TableFormat format);

/// Parses the Csv rendering. Throws SchemaError.
AccuracyTable parse_table_csv(std::string_view text);

}  // namespace srg
