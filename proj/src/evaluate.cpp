// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#include "srg/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>

#include "srg/errors.hpp"

namespace srg {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 6> kItemOrder = {"R1-1", "J2-1", "M3-1", "H4-1", "H5-1", "J6-1"};

std::string fixed1(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

struct Task {
    const ItemSpec* item;
    const LabeledSample* sample;
};

}  // namespace

double macro_average(const std::map<std::string, ItemEval>& per_item) noexcept {
    if (per_item.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& [id, e] : per_item) sum += e.accuracy;
    return sum / static_cast<double>(per_item.size());
}

EvalResult evaluate(const Dataset& ds, std::size_t parallelism, const std::optional<ScoringParams>& params) {
    std::vector<Task> tasks;
    for (const ItemPtr& item : ds.items) {
        auto it = ds.samples.find(item->item_id);
        if (it == ds.samples.end()) continue;
        for (const LabeledSample& s : it->second) tasks.push_back({item.get(), &s});
    }
    std::sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) {
        return std::tie(a.item->item_id, a.sample->sample_id) < std::tie(b.item->item_id, b.sample->sample_id);
    });

    std::vector<SamplePrediction> preds(tasks.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const Task& t = tasks[i];
            SamplePrediction& p = preds[i];
            p.item_id = t.item->item_id;
            p.sample_id = t.sample->sample_id;
            p.human = t.sample->human_band;
            try {
                const ScoringParams& sp = params ? *params : t.item->scoring;
                const SimilarityBreakdown b = similarity(t.sample->student, t.item->gold, t.item->ontology, sp);
                p.s = b.s;
                p.predicted = b.band;
            } catch (const std::exception& e) {
                p.error = e.what();
            }
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(tasks.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t k = 1; k < workers; ++k) pool.emplace_back(work);
    work();
    for (std::thread& th : pool) th.join();

    EvalResult r;
    for (const SamplePrediction& p : preds) {
        ItemEval& e = r.per_item[p.item_id];
        ++e.total;
        if (p.predicted) {
            ++e.confusion[static_cast<std::size_t>(p.human)][static_cast<std::size_t>(*p.predicted)];
            if (*p.predicted == p.human) ++e.correct;
        }
    }
    for (auto& [id, e] : r.per_item) {
        e.accuracy = static_cast<double>(e.correct) / static_cast<double>(e.total);
    }
    r.macro_average = macro_average(r.per_item);
    r.predictions = std::move(preds);
    return r;
}

json eval_result_to_json(const EvalResult& r) {
    json items = json::object();
    for (const auto& [id, e] : r.per_item) {
        json confusion = json::array();
        for (const auto& row : e.confusion) confusion.push_back(row);
        items[id] = {{"total", e.total}, {"correct", e.correct}, {"accuracy", e.accuracy}, {"confusion", confusion}};
    }
    json preds = json::array();
    for (const SamplePrediction& p : r.predictions) {
        preds.push_back({{"item_id", p.item_id},
                         {"sample_id", p.sample_id},
                         {"human", std::string(to_string(p.human))},
                         {"predicted", p.predicted ? json(std::string(to_string(*p.predicted))) : json(nullptr)},
                         {"s", p.s},
                         {"error", p.error.empty() ? json(nullptr) : json(p.error)}});
    }
    return {{"per_item", std::move(items)},
            {"macro_average", r.macro_average},
            {"band_order", {"Beginning", "Developing", "Proficient"}},
            {"predictions", std::move(preds)}};
}

TableFormat table_format_from_string(std::string_view s) {
    if (s == "text") return TableFormat::Text;
    if (s == "markdown" || s == "md") return TableFormat::Markdown;
    if (s == "csv") return TableFormat::Csv;
    throw ValueError("unknown table format \"" + std::string(s) + "\"");
}

AccuracyTable table_from_result(const EvalResult& r, const std::string& label) {
    std::vector<std::string> ids;
    for (std::string_view known : kItemOrder) {
        if (r.per_item.contains(std::string(known))) ids.emplace_back(known);
    }
    for (const auto& [id, e] : r.per_item) {
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
    AccuracyTable t;
    AccuracyTable::Row row{label, {}};
    for (const std::string& id : ids) {
        t.columns.push_back(id);
        row.values.push_back(100.0 * r.per_item.at(id).accuracy);
    }
    t.columns.push_back("Average");
    row.values.push_back(100.0 * r.macro_average);
    t.rows.push_back(std::move(row));
    return t;
}

std::string render_table(const AccuracyTable& t, TableFormat format) {
    std::ostringstream out;
    switch (format) {
        case TableFormat::Csv: {
            out << "model";
            for (const std::string& c : t.columns) out << "," << c;
            out << "\n";
            for (const auto& row : t.rows) {
                out << row.label;
                for (double v : row.values) out << "," << fixed1(v);
                out << "\n";
            }
            break;
        }
        case TableFormat::Markdown: {
            out << "| Model |";
            for (const std::string& c : t.columns) out << " " << c << " |";
            out << "\n|---|";
            for (std::size_t i = 0; i < t.columns.size(); ++i) out << "---:|";
            out << "\n";
            for (const auto& row : t.rows) {
                out << "| " << row.label << " |";
                for (double v : row.values) out << " " << fixed1(v) << " |";
                out << "\n";
            }
            break;
        }
        case TableFormat::Text: {
            std::size_t label_w = 5;
            for (const auto& row : t.rows) label_w = std::max(label_w, row.label.size());
            std::vector<std::size_t> widths;
            for (const std::string& c : t.columns) widths.push_back(std::max<std::size_t>(c.size(), 5));
            auto pad = [](const std::string& s, std::size_t w, bool right) {
                const std::string fill(w > s.size() ? w - s.size() : 0, ' ');
                return right ? fill + s : s + fill;
            };
            out << pad("Model", label_w, false);
            for (std::size_t i = 0; i < t.columns.size(); ++i) out << "  " << pad(t.columns[i], widths[i], true);
            out << "\n";
            for (const auto& row : t.rows) {
                out << pad(row.label, label_w, false);
                for (std::size_t i = 0; i < row.values.size() && i < widths.size(); ++i) {
                    out << "  " << pad(fixed1(row.values[i]), widths[i], true);
                }
                out << "\n";
            }
            break;
        }
    }
    return out.str();
}

AccuracyTable parse_table_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    AccuracyTable t;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells = split(line, ',');
        if (header) {
            if (cells.size() < 2 || cells[0] != "model") {
                throw SchemaError("accuracy csv: header must start with \"model\"");
            }
            t.columns.assign(cells.begin() + 1, cells.end());
            header = false;
            continue;
        }
        if (cells.size() != t.columns.size() + 1) {
            throw SchemaError("accuracy csv: row \"" + cells[0] + "\" has the wrong number of cells");
        }
        AccuracyTable::Row row{cells[0], {}};
        for (std::size_t i = 1; i < cells.size(); ++i) {
            try {
                std::size_t used = 0;
                row.values.push_back(std::stod(cells[i], &used));
                if (used != cells[i].size()) throw std::invalid_argument(cells[i]);
            } catch (const std::exception&) {
                throw SchemaError("accuracy csv: \"" + cells[i] + "\" is not a number");
            }
        }
        t.rows.push_back(std::move(row));
    }
    if (header) {
        throw SchemaError("accuracy csv: empty document");
    }
    return t;
}

}  // namespace srg
