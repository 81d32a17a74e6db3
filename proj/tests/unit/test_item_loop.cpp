// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "srg/errors.hpp"
#include "srg/item.hpp"
#include "srg/loop.hpp"

using nlohmann::json;
using namespace srg;
namespace fs = std::filesystem;

namespace {

void copy_item(const fs::path& to) {
    fs::create_directories(to);
    for (const char* f : {"item.json", "ontology.json", "gold.srg.json", "phi.json"}) {
        fs::copy_file(srg::testing::water_dye_dir() / f, to / f);
    }
}

json read_json(const fs::path& p) {
    std::ifstream in(p);
    return json::parse(in);
}

void write_json(const fs::path& p, const json& doc) { std::ofstream(p) << doc.dump(2); }

}  // namespace

TEST(Item, LoadsFixture) {
    const ItemSpec& item = srg::testing::water_dye();
    EXPECT_EQ(item.item_id, "water-dye");
    EXPECT_EQ(item.gold.role(), Role::Gold);
    EXPECT_EQ(item.highest_bloom, Bloom::Analyze);
    EXPECT_EQ(item.hint_limit, 3u);
    EXPECT_EQ(item.t_max, 5u);
    EXPECT_EQ(item.gold.node_count(), 7u);
    EXPECT_FALSE(item_to_json(item, false).contains("gold"));
    EXPECT_TRUE(item_to_json(item, true).contains("gold"));
}

TEST(Item, WriteThenLoadRoundTrips) {
    srg::testing::TempDir tmp;
    write_item(tmp.path() / "copy", srg::testing::water_dye());
    const ItemSpec back = load_item(tmp.path() / "copy");
    EXPECT_EQ(back.gold, srg::testing::water_dye().gold);
    EXPECT_EQ(back.phi, srg::testing::water_dye().phi);
    EXPECT_EQ(back.rubric_text, srg::testing::water_dye().rubric_text);
}

TEST(Item, MissingFileIsLayoutError) {
    srg::testing::TempDir tmp;
    copy_item(tmp.path() / "x");
    fs::remove(tmp.path() / "x" / "phi.json");
    EXPECT_THROW(load_item(tmp.path() / "x"), LayoutError);
    EXPECT_THROW(load_item(tmp.path() / "nowhere"), LayoutError);
}

TEST(Item, PhiMustCoverGold) {
    srg::testing::TempDir tmp;
    const fs::path dir = tmp.path() / "x";
    copy_item(dir);
    json phi = read_json(dir / "phi.json");
    phi["templates"].erase(phi["templates"].begin());
    write_json(dir / "phi.json", phi);
    EXPECT_THROW(load_item(dir), IncompleteMapping);
}

TEST(Item, GoldMustUseOntologyTerms) {
    srg::testing::TempDir tmp;
    const fs::path dir = tmp.path() / "x";
    copy_item(dir);
    json gold = read_json(dir / "gold.srg.json");
    gold["edges"][0]["relation"] = "teleports";
    write_json(dir / "gold.srg.json", gold);
    EXPECT_THROW(load_item(dir), SpecValidationError);
}

TEST(Item, LabelsCsv) {
    const auto labels = parse_labels_csv("sample_id,band\na,Beginning\nb,Proficient\n");
    ASSERT_EQ(labels.size(), 2u);
    EXPECT_EQ(labels.at("b"), Band::Proficient);
    EXPECT_ANY_THROW(parse_labels_csv("sample_id,band\na,Great\n"));
}

TEST(Item, DatasetSkipsBadSamplesWithWarnings) {
    srg::testing::TempDir tmp;
    const fs::path dir = tmp.path() / "water-dye";
    copy_item(dir);
    fs::create_directories(dir / "samples");
    fs::copy_file(srg::testing::water_dye_dir() / "samples" / "fig4b.srg.json", dir / "samples" / "fig4b.srg.json");
    fs::copy_file(srg::testing::water_dye_dir() / "samples" / "blank.srg.json", dir / "samples" / "unlabeled.srg.json");
    std::ofstream(dir / "samples" / "broken.srg.json") << "{";
    std::ofstream(dir / "labels.csv") << "sample_id,band\nfig4b,Developing\nbroken,Beginning\n";

    const Dataset ds = load_dataset(tmp.path());
    ASSERT_EQ(ds.items.size(), 1u);
    EXPECT_EQ(ds.sample_count(), 1u);
    EXPECT_EQ(ds.warnings.size(), 2u);
    EXPECT_NE(ds.find("water-dye"), nullptr);
    EXPECT_EQ(ds.find("nope"), nullptr);

    srg::testing::TempDir empty;
    EXPECT_THROW(load_dataset(empty.path()), LayoutError);
}

TEST(Loop, SimulatedStudentWithCertainRepairConverges) {
    const ItemSpec& item = srg::testing::water_dye();
    SimulatedStudent student(item.gold, 1.0, 42);
    const LoopTrace trace = loop_run(srg::testing::water_dye_sample("fig4b"), student, item, item.t_max);
    EXPECT_EQ(trace.terminated_by, Termination::ThresholdMet);
    ASSERT_GE(trace.iterations.size(), 2u);
    for (std::size_t i = 1; i < trace.iterations.size(); ++i) {
        EXPECT_GE(trace.iterations[i].breakdown.s, trace.iterations[i - 1].breakdown.s);
        EXPECT_EQ(trace.iterations[i].t, i);
    }
    EXPECT_GE(trace.iterations.back().breakdown.s, item.scoring.tau);
    EXPECT_TRUE(trace.iterations.back().hints.empty());
}

TEST(Loop, NoRevisionRunsToMaxIterations) {
    const ItemSpec& item = srg::testing::water_dye();
    NullStudent student;
    const LoopTrace trace = loop_run(srg::testing::water_dye_sample("fig4b"), student, item, 3);
    EXPECT_EQ(trace.terminated_by, Termination::MaxIterations);
    ASSERT_EQ(trace.iterations.size(), 4u);
    EXPECT_TRUE(trace.iterations.back().hints.empty());
    EXPECT_FALSE(trace.iterations.front().hints.empty());
    EXPECT_THROW(loop_run(srg::testing::water_dye_sample("fig4b"), student, item, 0), ValueError);
}

TEST(Loop, AlreadyAdequateStopsImmediately) {
    const ItemSpec& item = srg::testing::water_dye();
    NullStudent student;
    const LoopTrace trace = loop_run(srg::testing::water_dye_sample("gold-copy"), student, item, 5);
    EXPECT_EQ(trace.terminated_by, Termination::ThresholdMet);
    EXPECT_EQ(trace.iterations.size(), 1u);
}

TEST(Loop, SimulatedStudentIsDeterministicPerSeed) {
    const ItemSpec& item = srg::testing::water_dye();
    const Srg start = srg::testing::water_dye_sample("blank");
    const Assessment a = assess(start, item);
    const Srg x = simulated_student(start, a.hints, item.gold, 0.5, 9);
    const Srg y = simulated_student(start, a.hints, item.gold, 0.5, 9);
    EXPECT_EQ(x, y);
    EXPECT_EQ(simulated_student(start, a.hints, item.gold, 0.0, 9), start);
    EXPECT_THROW(simulated_student(start, a.hints, item.gold, 1.5, 9), ValueError);

    SimulatedStudent s1(item.gold, 0.5, 3), s2(item.gold, 0.5, 3);
    EXPECT_EQ(loop_trace_to_json(loop_run(start, s1, item, 5)), loop_trace_to_json(loop_run(start, s2, item, 5)));
}

TEST(Loop, CertainRepairAddsEveryHintedElement) {
    const ItemSpec& item = srg::testing::water_dye();
    const Srg start = srg::testing::water_dye_sample("fig4b");
    const Assessment a = assess(start, item);
    const Srg next = simulated_student(start, a.hints, item.gold, 1.0, 1);
    const Assessment b = assess(next, item);
    for (const VisualHint& h : a.hints) {
        for (const Deficiency& d : b.deficiencies) {
            if (d.kind == h.deficiency.kind) {
                EXPECT_NE(d.key(), h.deficiency.key());
            }
        }
    }
    EXPECT_GT(b.breakdown.s, a.breakdown.s);
}

TEST(Loop, TraceJson) {
    const ItemSpec& item = srg::testing::water_dye();
    SimulatedStudent student(item.gold, 1.0, 42);
    const json doc = loop_trace_to_json(loop_run(srg::testing::water_dye_sample("fig4b"), student, item, 5));
    EXPECT_EQ(doc.at("terminated_by"), "threshold_met");
    EXPECT_TRUE(doc.at("iterations").is_array());
    EXPECT_TRUE(doc.at("iterations")[0].contains("breakdown"));
}
