// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: prints one PASS/FAIL line per check and exits non-zero
// when any check fails. Tolerances are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "srg/agents.hpp"
#include "srg/errors.hpp"
#include "srg/evaluate.hpp"
#include "srg/feedback.hpp"
#include "srg/item.hpp"
#include "srg/loop.hpp"
#include "srg/scoring.hpp"
#include "srg/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace srg;

namespace {

constexpr std::size_t kGedPairs = 200;
constexpr double kGedTimeBudgetSeconds = 60.0;
constexpr double kBeamEqualShare = 0.80;
constexpr std::size_t kBeamWidth = 32;
constexpr std::size_t kIdentityGraphs = 100;
constexpr std::size_t kAlignmentInstances = 500;
constexpr std::size_t kRepairPairs = 100;
constexpr double kMacroTolerance = 1e-12;
constexpr double kPlantedGamma1 = 0.3;
constexpr double kGammaTolerance = 0.05;
constexpr std::size_t kFuzzResponses = 1000;

const fs::path kData = fs::path(SRG_SOURCE_DIR) / "data";

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Srg with_role(const Srg& g, Role role) { return Srg(g.item_id(), role, g.nodes(), g.edges()); }

struct GedPair {
    Ontology ontology;
    Srg student;
    Srg gold;
};

const std::vector<GedPair>& ged_pairs() {
    static const std::vector<GedPair> pairs = [] {
        std::mt19937_64 rng(20260101);
        std::vector<GedPair> out;
        testing::GraphShape shape{5, 6, 0};
        for (std::size_t k = 0; k < kGedPairs; ++k) {
            Ontology o = testing::random_ontology(rng, 10, 3);
            Srg s = testing::random_graph(rng, o, Role::Student, shape, "s");
            Srg g = testing::random_graph(rng, o, Role::Gold, shape, "g");
            out.push_back({std::move(o), std::move(s), std::move(g)});
        }
        return out;
    }();
    return pairs;
}

Outcome ged_oracle() {
    const EditCostModel costs;
    const auto start = std::chrono::steady_clock::now();
    std::size_t mismatches = 0;
    for (const GedPair& p : ged_pairs()) {
        const GedResult r = ged_exact(p.student, p.gold, costs, p.ontology);
        if (r.cost_units != testing::brute_force_ged(p.student, p.gold, costs, p.ontology)) ++mismatches;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {mismatches == 0 && secs < kGedTimeBudgetSeconds,
            fmt("%zu/%zu pairs equal the brute-force optimum, %.2f s", kGedPairs - mismatches, kGedPairs, secs)};
}

// Every (sample, gold) pair shipped with the repository.
std::vector<std::pair<Srg, ItemPtr>> fixture_pairs() {
    std::vector<std::pair<Srg, ItemPtr>> out;
    for (const fs::path& pack : {kData / "fixtures", kData / "synthetic"}) {
        const Dataset ds = load_dataset(pack);
        for (const ItemPtr& item : ds.items) {
            for (const LabeledSample& s : ds.samples.at(item->item_id)) out.emplace_back(s.student, item);
        }
    }
    return out;
}

Outcome beam_bound() {
    const EditCostModel costs;
    std::size_t below = 0, equal = 0;
    for (const GedPair& p : ged_pairs()) {
        const Units exact = ged_exact(p.student, p.gold, costs, p.ontology).cost_units;
        const Units beam = ged_beam(p.student, p.gold, costs, p.ontology, kBeamWidth).cost_units;
        if (beam < exact) ++below;
        if (beam == exact) ++equal;
    }
    const double share = static_cast<double>(equal) / static_cast<double>(kGedPairs);

    const std::vector<std::size_t> widths = {1, 2, 4, 8, 16, 32, 64};
    std::size_t non_monotone = 0;
    const auto fixtures = fixture_pairs();
    for (const auto& [student, item] : fixtures) {
        Units prev = std::numeric_limits<Units>::max();
        for (std::size_t w : widths) {
            const Units c = ged_beam(student, item->gold, costs, item->ontology, w).cost_units;
            if (c > prev) {
                ++non_monotone;
                break;
            }
            prev = c;
        }
    }
    return {below == 0 && share >= kBeamEqualShare && non_monotone == 0,
            fmt("beam >= exact on %zu/%zu, equal on %.1f%%, width-monotone on %zu/%zu fixture pairs",
                kGedPairs - below, kGedPairs, 100.0 * share, fixtures.size() - non_monotone, fixtures.size())};
}

Outcome identity() {
    std::mt19937_64 rng(7);
    const ScoringParams params;  // oa_norm = max
    std::size_t failures = 0;
    for (std::size_t k = 0; k < kIdentityGraphs; ++k) {
        const Ontology o = testing::random_ontology(rng, 12, 3);
        // The first two graphs are the empty and the single-node case.
        const testing::GraphShape shape = k == 0 ? testing::GraphShape{0, 0, 0}
                                          : k == 1 ? testing::GraphShape{1, 0, 1}
                                                   : testing::GraphShape{6, 8, 0};
        const Srg g = testing::random_graph(rng, o, Role::Student, shape);
        const SimilarityBreakdown b = similarity(g, with_role(g, Role::Gold), o, params);
        if (b.s != 1.0) ++failures;
    }
    return {failures == 0, fmt("S(G, G) == 1.0 for %zu/%zu graphs", kIdentityGraphs - failures, kIdentityGraphs)};
}

Outcome alignment_oracle() {
    std::mt19937_64 rng(99);
    std::size_t failures = 0;
    const testing::GraphShape shape{5, 0, 0};
    for (std::size_t k = 0; k < kAlignmentInstances; ++k) {
        const Ontology o = testing::random_ontology(rng, 8, 1);
        AlignmentParams p;
        p.alpha = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        p.w_min = std::uniform_real_distribution<double>(0.0, 0.6)(rng);
        const Srg s = testing::random_graph(rng, o, Role::Student, shape, "s");
        const Srg g = testing::random_graph(rng, o, Role::Gold, shape, "g");
        const Alignment a = best_alignment(s.nodes(), g.nodes(), o, p);
        const testing::BruteAlignment b = testing::brute_force_alignment(s, g, o, p);
        std::vector<std::pair<std::string, std::string>> pairs;
        for (const AlignedPair& ap : a.pairs) pairs.emplace_back(ap.student_id, ap.gold_id);
        if (a.total_units != b.total || pairs != b.pairs) ++failures;
    }
    return {failures == 0,
            fmt("%zu/%zu instances match the enumerated optimum and tie-break", kAlignmentInstances - failures,
                kAlignmentInstances)};
}

// A student derived from the gold graph by removing elements and lowering
// levels, keeping the node correspondence so elements can be put back.
struct Degraded {
    std::vector<SrgNode> nodes;
    std::vector<SrgEdge> edges;
    std::vector<std::string> missing_nodes;  ///< gold ids
    std::vector<SrgEdge> missing_edges;      ///< gold edges with both endpoints present
};

std::string sid(const std::string& gold_id) { return "s_" + gold_id; }

Degraded degrade_tracked(const Srg& gold, std::mt19937_64& rng) {
    Degraded d;
    std::bernoulli_distribution drop_node(0.25), drop_edge(0.3), lower(0.3);
    std::set<std::string> kept;
    for (const SrgNode& n : gold.nodes()) {
        if (drop_node(rng)) {
            d.missing_nodes.push_back(n.id);
            continue;
        }
        SrgNode s = n;
        s.id = sid(n.id);
        if (lower(rng) && ordinal(n.bloom) > 1) {
            s.bloom = bloom_from_ordinal(std::uniform_int_distribution<int>(1, ordinal(n.bloom) - 1)(rng));
        }
        kept.insert(n.id);
        d.nodes.push_back(std::move(s));
    }
    for (const SrgEdge& e : gold.edges()) {
        if (!kept.contains(e.source) || !kept.contains(e.target)) continue;
        if (drop_edge(rng)) {
            d.missing_edges.push_back(e);
            continue;
        }
        d.edges.push_back({sid(e.source), sid(e.target), e.relation});
    }
    return d;
}

Outcome repair_monotonicity() {
    const std::vector<ItemSpec> items = synthetic_items();
    std::mt19937_64 rng(31337);
    std::size_t pairs = 0, readd_checks = 0, readd_fail = 0, lower_checks = 0, lower_fail = 0;
    std::vector<std::string> failures;
    while (pairs < kRepairPairs) {
        const ItemSpec& item = items[pairs % items.size()];
        const Degraded d = degrade_tracked(item.gold, rng);
        if (d.missing_nodes.empty() && d.missing_edges.empty()) continue;
        ++pairs;
        const Srg student(item.item_id, Role::Student, d.nodes, d.edges);
        const double s0 = similarity(student, item.gold, item.ontology, item.scoring).s;

        for (const std::string& gid : d.missing_nodes) {
            std::vector<SrgNode> nodes = d.nodes;
            SrgNode n = *item.gold.find_node(gid);
            n.id = sid(gid);
            nodes.push_back(n);
            const double s1 = similarity(Srg(item.item_id, Role::Student, nodes, d.edges), item.gold,
                                         item.ontology, item.scoring).s;
            ++readd_checks;
            if (!(s1 > s0)) {
                ++readd_fail;
                failures.push_back(fmt("%s node %s: %.6f -> %.6f", item.item_id.c_str(), gid.c_str(), s0, s1));
            }
        }
        for (const SrgEdge& e : d.missing_edges) {
            std::vector<SrgEdge> edges = d.edges;
            edges.push_back({sid(e.source), sid(e.target), e.relation});
            const double s1 = similarity(Srg(item.item_id, Role::Student, d.nodes, edges), item.gold,
                                         item.ontology, item.scoring).s;
            ++readd_checks;
            if (!(s1 > s0)) {
                ++readd_fail;
                failures.push_back(fmt("%s edge %s->%s: %.6f -> %.6f", item.item_id.c_str(), e.source.c_str(),
                                       e.target.c_str(), s0, s1));
            }
        }
        // Lower every matched node in turn: the new level sits below both its
        // current level and its gold level.
        const SimilarityBreakdown b0 = similarity(student, item.gold, item.ontology, item.scoring);
        for (const AlignedPair& ap : b0.alignment.pairs) {
            const int ceiling = std::min(ordinal(item.gold.find_node(ap.gold_id)->bloom),
                                         ordinal(student.find_node(ap.student_id)->bloom));
            if (ceiling == 1) continue;
            std::vector<SrgNode> nodes = d.nodes;
            for (SrgNode& n : nodes) {
                if (n.id == ap.student_id) {
                    n.bloom = bloom_from_ordinal(std::uniform_int_distribution<int>(1, ceiling - 1)(rng));
                }
            }
            const double s1 = similarity(Srg(item.item_id, Role::Student, nodes, d.edges), item.gold,
                                         item.ontology, item.scoring).s;
            ++lower_checks;
            if (s1 > b0.s) ++lower_fail;
        }
    }
    std::string detail = fmt("%zu pairs; re-adding raised S in %zu/%zu cases; lowering never raised S in %zu/%zu",
                             pairs, readd_checks - readd_fail, readd_checks, lower_checks - lower_fail, lower_checks);
    for (std::size_t i = 0; i < failures.size() && i < 3; ++i) detail += "; " + failures[i];
    return {readd_fail == 0 && lower_fail == 0, detail};
}

Outcome worked_example() {
    const ItemSpec item = load_item(kData / "fixtures" / "water-dye");
    const Srg student = load_srg_file((kData / "fixtures" / "water-dye" / "samples" / "fig4b.srg.json").string());
    const Assessment a = assess(student, item);
    const std::set<std::string> missing(a.report.missing_concepts.begin(), a.report.missing_concepts.end());
    const std::set<std::string> expected = {"Dye_Particle_Room", "Temperature_Decrease", "Slower_Motion"};
    bool wpr_hint = false;
    for (const VisualHint& h : a.hints) {
        const std::optional<ElementRef>& ref = h.deficiency.gold_ref;
        if (ref && !ref->is_edge() && ref->concept_id == "Water_Particle_Room" && h.bloom_target == Bloom::Understand) {
            wpr_hint = true;
        }
    }
    const double s = a.breakdown.s;
    const bool pass = a.breakdown.band == Band::Developing && missing == expected && wpr_hint && s >= 0.5 && s < 0.75;
    return {pass, fmt("S = %.4f, band %s, missing concepts %s, Water_Particle_Room hint at Understand %s", s,
                      std::string(to_string(a.breakdown.band)).c_str(), missing == expected ? "exact" : "differ",
                      wpr_hint ? "present" : "absent")};
}

Outcome loop_convergence() {
    const Dataset ds = load_dataset(kData / "synthetic");
    std::size_t runs = 0, failures = 0;
    std::string first_failure;
    for (const ItemPtr& item : ds.items) {
        for (const LabeledSample& sample : ds.samples.at(item->item_id)) {
            const Assessment a0 = assess(sample.student, *item);
            if (a0.breakdown.s >= item->scoring.tau) continue;
            ++runs;
            std::size_t k = 0;
            for (const Deficiency& d : a0.deficiencies) {
                if (d.kind == DeficiencyKind::MissingNode || d.kind == DeficiencyKind::MissingEdge) ++k;
            }
            bool ok = k > 0;
            if (ok) {
                SimulatedStudent model(item->gold, 1.0, 0);
                const LoopTrace trace = loop_run(sample.student, model, *item, k);
                ok = trace.terminated_by == Termination::ThresholdMet && trace.iterations.size() - 1 <= k;
                for (std::size_t t = 1; ok && t < trace.iterations.size(); ++t) {
                    ok = trace.iterations[t].breakdown.s > trace.iterations[t - 1].breakdown.s;
                }
            }
            if (!ok) {
                ++failures;
                if (first_failure.empty()) first_failure = "; first failure " + item->item_id + "/" + sample.sample_id;
            }
        }
    }
    return {failures == 0 && runs > 0,
            fmt("%zu/%zu below-threshold samples converge within k revisions with strictly rising S", runs - failures,
                runs) + first_failure};
}

Outcome metric_pipeline() {
    const EvalResult planted = evaluate(load_dataset(kData / "synthetic"), 4);
    bool all_one = !planted.per_item.empty();
    double sum = 0.0;
    for (const auto& [id, e] : planted.per_item) {
        all_one = all_one && e.accuracy == 1.0;
        sum += e.accuracy;
    }
    const double mean = sum / static_cast<double>(planted.per_item.size());

    const EvalResult micro = evaluate(load_dataset(kData / "fixtures" / "micro-pack"), 2);
    const double micro_acc = micro.per_item.at("water-dye").accuracy;

    const AccuracyTable row = parse_table_csv(read_text_file((kData / "fixtures" / "tables" / "baseline-row.csv").string()));
    EvalResult fixture;
    for (std::size_t i = 0; i < row.columns.size(); ++i) {
        fixture.per_item[row.columns[i]].accuracy = row.rows.at(0).values.at(i) / 100.0;
    }
    fixture.macro_average = macro_average(fixture.per_item);
    const AccuracyTable rendered = parse_table_csv(render_table(table_from_result(fixture, row.rows[0].label), TableFormat::Csv));
    const std::string text = render_table(table_from_result(fixture, row.rows[0].label), TableFormat::Text);
    const std::string average = fmt("%.1f", rendered.rows.at(0).values.back());
    const bool table_ok = rendered.columns.back() == "Average" && average == "55.6" &&
                          text.find("55.6") != std::string::npos;

    const bool pass = all_one && micro_acc == 0.75 && std::abs(planted.macro_average - mean) <= kMacroTolerance &&
                      table_ok;
    return {pass, fmt("planted pack accuracy %s on %zu items; micro item %.2f; |macro - mean| = %.1e; Average cell %s",
                      all_one ? "1.0" : "below 1.0", planted.per_item.size(), micro_acc,
                      std::abs(planted.macro_average - mean), average.c_str())};
}

Outcome calibration_recovery() {
    const std::vector<ItemSpec> items = synthetic_items();
    const std::vector<CalibrationRecord> records = planted_calibration_set(items, kPlantedGamma1, 40, 11);
    CalibrationGrid grid;
    for (int k = 0; k <= 20; ++k) grid.gamma1.push_back(k * 0.05);
    const CalibrationResult r = calibrate(records, grid);
    return {std::abs(r.params.gamma1 - kPlantedGamma1) <= kGammaTolerance,
            fmt("recovered gamma1 = %.2f (planted %.2f) with training accuracy %.3f on %zu records", r.params.gamma1,
                kPlantedGamma1, r.accuracy, records.size())};
}

// --- agents ---------------------------------------------------------------

std::string envelope(const json& content) {
    return json{{"id", "fuzz"}, {"choices", {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", content}}}}}}}
        .dump();
}

// Each generator returns a response body that the boundary must reject.
std::vector<std::function<std::string(std::mt19937_64&, const json&)>> malformed_generators() {
    using Gen = std::function<std::string(std::mt19937_64&, const json&)>;
    auto pick = [](std::mt19937_64& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    auto doc_mutation = [](std::function<void(std::mt19937_64&, json&)> mutate) -> Gen {
        return [mutate](std::mt19937_64& rng, const json& valid) {
            json doc = valid;
            mutate(rng, doc);
            return envelope(doc.dump());
        };
    };
    std::vector<Gen> gens;
    gens.push_back([pick](std::mt19937_64& rng, const json& valid) {  // truncated body
        const std::string full = envelope(valid.dump());
        return full.substr(0, pick(rng, full.size() - 1));
    });
    gens.push_back([pick](std::mt19937_64& rng, const json& valid) {  // truncated content
        const std::string doc = valid.dump();
        return envelope(doc.substr(0, pick(rng, doc.size() - 1)));
    });
    gens.push_back([pick](std::mt19937_64& rng, const json&) {  // prose instead of JSON
        static const char* kProse[] = {"Sure! Here is the graph.", "I cannot see the image.", "nodes: s1, s2",
                                       "```json\n{\"nodes\": []\n```", "<html>502 Bad Gateway</html>"};
        return envelope(std::string(kProse[pick(rng, 5)]));
    });
    gens.push_back([pick](std::mt19937_64& rng, const json&) {  // broken envelope
        switch (pick(rng, 6)) {
            case 0: return std::string("{}");
            case 1: return std::string(R"({"choices": []})");
            case 2: return std::string(R"({"choices": [{"message": {}}]})");
            case 3: return std::string(R"({"choices": [{"message": {"content": null}}]})");
            case 4: return std::string(R"({"choices": [{"message": {"content": 42}}]})");
            default: return std::string("not json at all");
        }
    });
    gens.push_back([pick](std::mt19937_64& rng, const json&) {  // JSON that is not an object
        static const char* kDocs[] = {"[]", "42", "\"graph\"", "null", "true", "[{\"id\": \"s1\"}]"};
        return envelope(std::string(kDocs[pick(rng, 6)]));
    });
    gens.push_back(doc_mutation([pick](std::mt19937_64& rng, json& d) {  // required member removed
        static const char* kKeys[] = {"item_id", "role", "nodes", "edges"};
        d.erase(kKeys[pick(rng, 4)]);
    }));
    gens.push_back(doc_mutation([](std::mt19937_64&, json& d) { d["role"] = "gold"; }));
    gens.push_back(doc_mutation([](std::mt19937_64&, json& d) { d["item_id"] = "another-item"; }));
    gens.push_back(doc_mutation([pick](std::mt19937_64& rng, json& d) {  // bad Bloom level
        static const json kLevels[] = {"Expert", "remember", "", 7, nullptr};
        d["nodes"][pick(rng, d["nodes"].size())]["bloom"] = kLevels[pick(rng, 5)];
    }));
    gens.push_back(doc_mutation([pick](std::mt19937_64& rng, json& d) {  // duplicate node id
        const std::size_t i = pick(rng, d["nodes"].size());
        d["nodes"].push_back(d["nodes"][i]);
    }));
    gens.push_back(doc_mutation([pick](std::mt19937_64& rng, json& d) {  // self-loop
        const std::string id = d["nodes"][pick(rng, d["nodes"].size())]["id"];
        d["edges"].push_back({{"source", id}, {"target", id}, {"relation", "participates_in"}});
    }));
    gens.push_back(doc_mutation([pick](std::mt19937_64& rng, json& d) {  // dangling edge
        json& e = d["edges"][pick(rng, d["edges"].size())];
        e[pick(rng, 2) ? "source" : "target"] = "ghost";
    }));
    gens.push_back(doc_mutation([pick](std::mt19937_64& rng, json& d) {  // duplicate triple
        d["edges"].push_back(d["edges"][pick(rng, d["edges"].size())]);
    }));
    gens.push_back(doc_mutation([pick](std::mt19937_64& rng, json& d) {  // region outside the unit square
        json& n = d["nodes"][pick(rng, d["nodes"].size())];
        n["evidence"]["region"] = {0.1, 0.1, 1.0 + 0.5 * static_cast<double>(pick(rng, 4) + 1), 0.2};
    }));
    gens.push_back(doc_mutation([pick](std::mt19937_64& rng, json& d) {  // empty identifiers
        json& n = d["nodes"][pick(rng, d["nodes"].size())];
        n[pick(rng, 2) ? "id" : "concept"] = "";
    }));
    gens.push_back(doc_mutation([pick](std::mt19937_64& rng, json& d) {  // wrong container types
        static const char* kKeys[] = {"nodes", "edges"};
        d[kKeys[pick(rng, 2)]] = "none";
    }));
    gens.push_back(doc_mutation([pick](std::mt19937_64& rng, json& d) {  // node that is not an object
        d["nodes"][pick(rng, d["nodes"].size())] = json::array({"s1", "Water_Particle_Room"});
    }));
    gens.push_back(doc_mutation([pick](std::mt19937_64& rng, json& d) {  // empty relation
        d["edges"][pick(rng, d["edges"].size())]["relation"] = "";
    }));
    return gens;
}

class ScriptedTransport {
public:
    explicit ScriptedTransport(std::vector<std::string> bodies) : bodies_(std::move(bodies)) {}
    std::string operator()(const EndpointConfig&, const json&) {
        if (next_ >= bodies_.size()) return bodies_.back();
        return bodies_[next_++];
    }

private:
    std::vector<std::string> bodies_;
    std::size_t next_ = 0;
};

Outcome agents_robustness() {
    const ItemSpec item = load_item(kData / "fixtures" / "water-dye");
    const json valid = json::parse(read_text_file((kData / "fixtures" / "water-dye" / "samples" / "fig4b.srg.json").string()));
    EndpointConfig ep;
    ep.base_url = "http://fuzz.invalid";
    ep.model = "fuzz-model";

    const auto gens = malformed_generators();
    std::mt19937_64 rng(4242);
    std::size_t leaked = 0, rejected = 0, bad_logs = 0;
    for (std::size_t k = 0; k < kFuzzResponses; ++k) {
        const std::string body = gens[k % gens.size()](rng, valid);
        AuditLog log;
        auto transport = std::make_shared<ScriptedTransport>(std::vector<std::string>{body});
        RemoteBackend backend(ep, log, [transport](const EndpointConfig& e, const json& b) { return (*transport)(e, b); }, 2);
        try {
            (void)sketch_to_srg("image://fuzz", item, backend);
            ++leaked;
        } catch (const SchemaViolation&) {
            ++rejected;
        }
        const auto recs = log.records();
        if (recs.size() != 3 || recs.back().outcome != AgentRequestLog::Outcome::Failed) ++bad_logs;
    }

    const json transcript = json::parse(read_text_file((kData / "fixtures" / "agents" / "retry-transcript.json").string()));
    AuditLog log;
    auto transport = std::make_shared<ScriptedTransport>(transcript.at("responses").get<std::vector<std::string>>());
    EndpointConfig tep = ep;
    tep.model = transcript.at("model").get<std::string>();
    RemoteBackend backend(tep, log, [transport](const EndpointConfig& e, const json& b) { return (*transport)(e, b); },
                          transcript.at("retries").get<std::size_t>());
    bool transcript_ok = false;
    try {
        const PerceivedSketch p = sketch_to_srg(transcript.at("image_ref").get<std::string>(), item, backend);
        const auto recs = log.records();
        const json& expected = transcript.at("expected_log");
        transcript_ok = p.graph.node_count() == transcript.at("expected_nodes").get<std::size_t>() &&
                        recs.size() == expected.size();
        for (std::size_t i = 0; transcript_ok && i < recs.size(); ++i) {
            transcript_ok = recs[i].attempt == expected[i].at("attempt").get<std::size_t>() &&
                            to_string(recs[i].outcome) == expected[i].at("outcome").get<std::string>() &&
                            recs[i].prompt_id == sketch_prompt().id && recs[i].prompt_sha256 == sketch_prompt().sha256;
        }
    } catch (const Error&) {
        transcript_ok = false;
    }
    return {leaked == 0 && rejected == kFuzzResponses && bad_logs == 0 && transcript_ok,
            fmt("%zu/%zu malformed responses rejected, %zu graphs leaked, %zu bad audit trails; retry transcript %s",
                rejected, kFuzzResponses, leaked, bad_logs, transcript_ok ? "matches" : "differs")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, Outcome (*)()>> checks = {
        {"ged-oracle", ged_oracle},
        {"beam-bound", beam_bound},
        {"identity", identity},
        {"alignment-oracle", alignment_oracle},
        {"repair-monotonicity", repair_monotonicity},
        {"worked-example", worked_example},
        {"loop-convergence", loop_convergence},
        {"metric-pipeline", metric_pipeline},
        {"calibration-recovery", calibration_recovery},
        {"agents-robustness", agents_robustness},
    };
    int failed = 0;
    for (const auto& [name, fn] : checks) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%zu checks, %d failed\n", checks.size(), failed);
    return failed == 0 ? 0 : 1;
}
