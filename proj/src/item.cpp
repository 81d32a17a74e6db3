// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#include "srg/item.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "srg/errors.hpp"
#include "srg/validate.hpp"

namespace srg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_required(const fs::path& p) {
    if (!fs::is_regular_file(p)) {
        throw LayoutError("missing file " + p.string());
    }
    return read_text_file(p.string());
}

json parse_json(const std::string& text, const fs::path& where) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw SpecValidationError(where.string() + ": " + e.what());
    }
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw LayoutError("cannot write " + p.string());
    }
    out << text << "\n";
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

}  // namespace

void validate_item(const ItemSpec& item) {
    if (item.item_id.empty()) {
        throw SpecValidationError("item id is empty");
    }
    if (item.gold.role() != Role::Gold) {
        throw SpecValidationError(item.item_id + ": gold graph must have role \"gold\"");
    }
    if (item.gold.item_id() != item.item_id) {
        throw SpecValidationError(item.item_id + ": gold graph belongs to item \"" + item.gold.item_id() + "\"");
    }
    if (item.gold.empty()) {
        throw SpecValidationError(item.item_id + ": gold graph is empty");
    }
    const ValidationReport report = validate_against_ontology(item.gold, item.ontology);
    if (!report.ok()) {
        throw SpecValidationError(item.item_id + ": gold does not resolve in its ontology: " + report.summary());
    }
    if (const auto missing = missing_phi_keys(item.phi, item.gold); !missing.empty()) {
        std::string keys;
        for (const std::string& k : missing) keys += (keys.empty() ? "" : ", ") + k;
        throw IncompleteMapping(item.item_id + ": no hint template for " + keys);
    }
    try {
        item.scoring.validate();
    } catch (const ValueError& e) {
        throw SpecValidationError(item.item_id + ": " + e.what());
    }
    if (item.gold.highest_bloom() != item.highest_bloom) {
        throw SpecValidationError(item.item_id + ": highest_bloom disagrees with the gold graph");
    }
    if (item.hint_limit == 0 || item.t_max == 0) {
        throw SpecValidationError(item.item_id + ": hint_limit and t_max must be positive");
    }
}

ItemSpec load_item(const fs::path& dir) {
    const json meta = parse_json(read_required(dir / "item.json"), dir / "item.json");
    const std::string ontology_text = read_required(dir / "ontology.json");
    const std::string gold_text = read_required(dir / "gold.srg.json");
    const json phi_doc = parse_json(read_required(dir / "phi.json"), dir / "phi.json");

    ItemSpec item;
    try {
        item.item_id = meta.at("item_id").get<std::string>();
        if (auto p = meta.find("prompt"); p != meta.end()) {
            item.prompt_text = p->value("text", "");
            item.image_refs = p->value("images", std::vector<std::string>{});
        }
        item.rubric_text = meta.value("rubric_text", "");
        item.highest_bloom = bloom_from_string(meta.at("highest_bloom").get<std::string>());
        item.scoring = scoring_params_from_json(meta.value("scoring", json::object()));
        item.hint_limit = meta.value("hint_limit", std::size_t{3});
        item.t_max = meta.value("t_max", kDefaultTMax);
        item.ontology = load_ontology(ontology_text);
        item.gold = parse_srg(gold_text);
        item.phi = phi_from_json(phi_doc, item.gold);
    } catch (const json::exception& e) {
        throw SpecValidationError(dir.string() + ": " + e.what());
    } catch (const IncompleteMapping&) {
        throw;
    } catch (const Error& e) {
        throw SpecValidationError(dir.string() + ": " + e.kind() + ": " + e.what());
    }
    validate_item(item);
    return item;
}

void write_item(const fs::path& dir, const ItemSpec& item) {
    fs::create_directories(dir);
    json meta = {{"item_id", item.item_id},
                 {"prompt", {{"text", item.prompt_text}, {"images", item.image_refs}}},
                 {"rubric_text", item.rubric_text},
                 {"highest_bloom", std::string(to_string(item.highest_bloom))},
                 {"scoring", scoring_params_to_json(item.scoring)},
                 {"hint_limit", item.hint_limit},
                 {"t_max", item.t_max}};
    write_file(dir / "item.json", meta.dump(2));
    write_file(dir / "ontology.json", ontology_to_json(item.ontology).dump(2));
    write_file(dir / "gold.srg.json", serialize_srg(item.gold));
    write_file(dir / "phi.json", phi_to_json(item.phi).dump(2));
}

json item_summary_json(const ItemSpec& item) {
    return {{"item_id", item.item_id},
            {"prompt", item.prompt_text},
            {"highest_bloom", std::string(to_string(item.highest_bloom))},
            {"gold_nodes", item.gold.node_count()},
            {"gold_edges", item.gold.edge_count()}};
}

json item_to_json(const ItemSpec& item, bool include_gold) {
    json out = {{"item_id", item.item_id},
                {"prompt", {{"text", item.prompt_text}, {"images", item.image_refs}}},
                {"rubric_text", item.rubric_text},
                {"highest_bloom", std::string(to_string(item.highest_bloom))},
                {"scoring", scoring_params_to_json(item.scoring)},
                {"hint_limit", item.hint_limit},
                {"t_max", item.t_max}};
    if (include_gold) {
        out["gold"] = srg_to_json(item.gold);
        out["phi"] = phi_to_json(item.phi);
    }
    return out;
}

ItemPtr Dataset::find(std::string_view item_id) const {
    auto it = std::find_if(items.begin(), items.end(), [&](const ItemPtr& i) { return i->item_id == item_id; });
    return it == items.end() ? nullptr : *it;
}

std::size_t Dataset::sample_count() const noexcept {
    std::size_t n = 0;
    for (const auto& [id, v] : samples) n += v.size();
    return n;
}

std::map<std::string, Band> parse_labels_csv(std::string_view text) {
    std::map<std::string, Band> labels;
    std::istringstream in{std::string(text)};
    std::string line;
    bool header = true;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line == "sample_id,band") continue;
            throw LayoutError("labels.csv must start with the header \"sample_id,band\"");
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw LayoutError("labels.csv line " + std::to_string(lineno) + ": expected sample_id,band");
        }
        try {
            labels[trim(line.substr(0, comma))] = band_from_string(trim(line.substr(comma + 1)));
        } catch (const ValueError& e) {
            throw LayoutError("labels.csv line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return labels;
}

Dataset load_dataset(const fs::path& root) {
    if (!fs::is_directory(root)) {
        throw LayoutError(root.string() + " is not a directory");
    }
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory() && fs::exists(entry.path() / "item.json")) dirs.push_back(entry.path());
    }
    if (dirs.empty()) {
        throw LayoutError(root.string() + " contains no item directories");
    }
    std::sort(dirs.begin(), dirs.end());

    Dataset ds;
    for (const fs::path& dir : dirs) {
        auto item = std::make_shared<ItemSpec>(load_item(dir));
        const std::string id = item->item_id;
        std::vector<LabeledSample>& out = ds.samples[id];

        std::map<std::string, Band> labels;
        if (fs::exists(dir / "labels.csv")) {
            labels = parse_labels_csv(read_text_file((dir / "labels.csv").string()));
        }
        std::vector<fs::path> files;
        if (fs::is_directory(dir / "samples")) {
            for (const auto& entry : fs::directory_iterator(dir / "samples")) {
                const std::string name = entry.path().filename().string();
                if (entry.is_regular_file() && name.ends_with(".srg.json")) files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const fs::path& f : files) {
            const std::string name = f.filename().string();
            const std::string sid = name.substr(0, name.size() - std::string(".srg.json").size());
            auto label = labels.find(sid);
            if (label == labels.end()) {
                ds.warnings.push_back(id + "/" + sid + ": no label, skipped");
                continue;
            }
            try {
                Srg g = load_srg_file(f.string());
                if (g.item_id() != id) {
                    throw SchemaError("sample belongs to item \"" + g.item_id() + "\"");
                }
                out.push_back({sid, std::move(g), label->second});
            } catch (const Error& e) {
                ds.warnings.push_back(id + "/" + sid + ": " + e.kind() + ": " + e.what() + ", skipped");
            }
            labels.erase(label);
        }
        for (const auto& [sid, band] : labels) {
            ds.warnings.push_back(id + "/" + sid + ": labeled but no sample file");
        }
        ds.items.push_back(std::move(item));
    }
    std::sort(ds.items.begin(), ds.items.end(),
              [](const ItemPtr& a, const ItemPtr& b) { return a->item_id < b->item_id; });
    return ds;
}

}  // namespace srg
