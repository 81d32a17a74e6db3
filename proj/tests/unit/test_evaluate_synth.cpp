// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "srg/errors.hpp"
#include "srg/evaluate.hpp"
#include "srg/synth.hpp"
#include "srg/validate.hpp"

using nlohmann::json;
using namespace srg;

namespace {

const Dataset& micro_pack() {
    static const Dataset ds = load_dataset(srg::testing::data_dir() / "fixtures" / "micro-pack");
    return ds;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST(Evaluate, MicroPackAccuracyAndConfusion) {
    const EvalResult r = evaluate(micro_pack(), 1);
    ASSERT_EQ(r.per_item.size(), 1u);
    const ItemEval& e = r.per_item.at("water-dye");
    EXPECT_EQ(e.total, 4u);
    EXPECT_EQ(e.correct, 3u);
    EXPECT_DOUBLE_EQ(e.accuracy, 0.75);
    EXPECT_DOUBLE_EQ(r.macro_average, 0.75);
    // fig6a is labelled Proficient but scores Developing.
    EXPECT_EQ(e.confusion[static_cast<int>(Band::Proficient)][static_cast<int>(Band::Developing)], 1u);
    std::size_t sum = 0;
    for (const auto& row : e.confusion) {
        for (std::size_t c : row) sum += c;
    }
    EXPECT_EQ(sum, 4u);
}

TEST(Evaluate, ResultIndependentOfParallelism) {
    const Dataset ds = load_dataset(srg::testing::data_dir() / "synthetic");
    const json one = eval_result_to_json(evaluate(ds, 1));
    EXPECT_EQ(one, eval_result_to_json(evaluate(ds, 4)));
    EXPECT_EQ(one, eval_result_to_json(evaluate(ds, 64)));
}

TEST(Evaluate, MacroAverage) {
    EXPECT_EQ(macro_average({}), 0.0);
    std::map<std::string, ItemEval> m;
    m["a"].accuracy = 0.5;
    m["b"].accuracy = 1.0;
    EXPECT_DOUBLE_EQ(macro_average(m), 0.75);
}

TEST(Evaluate, TableRenderingAndCsvRoundTrip) {
    const AccuracyTable baseline = parse_table_csv(slurp(srg::testing::data_dir() / "fixtures" / "tables" / "baseline-row.csv"));
    ASSERT_EQ(baseline.rows.size(), 1u);
    EXPECT_EQ(baseline.columns.size(), 6u);
    EXPECT_EQ(baseline.rows[0].label, "baseline-mllm");
    EXPECT_NEAR(baseline.rows[0].values.front(), 63.2, 1e-9);

    const AccuracyTable t = table_from_result(evaluate(micro_pack(), 2), "srgrade");
    EXPECT_EQ(t.columns, (std::vector<std::string>{"water-dye", "Average"}));
    const std::string csv = render_table(t, TableFormat::Csv);
    const AccuracyTable back = parse_table_csv(csv);
    EXPECT_EQ(back.columns, t.columns);
    EXPECT_EQ(back.rows[0].label, "srgrade");
    EXPECT_NEAR(back.rows[0].values[0], 75.0, 0.05);

    EXPECT_NE(render_table(t, TableFormat::Markdown).find("| srgrade |"), std::string::npos);
    EXPECT_NE(render_table(t, TableFormat::Text).find("75.0"), std::string::npos);
    EXPECT_THROW(table_format_from_string("html"), ValueError);
    EXPECT_THROW(parse_table_csv("model\n"), SchemaError);
}

TEST(Evaluate, SyntheticColumnOrder) {
    const AccuracyTable t = table_from_result(evaluate(load_dataset(srg::testing::data_dir() / "synthetic"), 4), "x");
    EXPECT_EQ(t.columns, (std::vector<std::string>{"R1-1", "J2-1", "M3-1", "H4-1", "H5-1", "J6-1", "Average"}));
}

TEST(Synth, ItemsAreValid) {
    const std::vector<ItemSpec> items = synthetic_items();
    ASSERT_EQ(items.size(), 6u);
    for (const ItemSpec& item : items) {
        EXPECT_NO_THROW(validate_item(item)) << item.item_id;
        EXPECT_TRUE(validate_against_ontology(item.gold, item.ontology).ok()) << item.item_id;
    }
}

TEST(Synth, SamplesCarryAgreeingLabels) {
    const std::vector<ItemSpec> items = synthetic_items();
    SynthOptions opts;
    opts.samples_per_item = 6;
    opts.seed = 11;
    const std::vector<LabeledSample> samples = synthetic_samples(items[0], opts);
    ASSERT_EQ(samples.size(), 6u);
    std::map<Band, int> per_band;
    for (const LabeledSample& s : samples) {
        ++per_band[s.human_band];
        EXPECT_EQ(similarity(s.student, items[0].gold, items[0].ontology, items[0].scoring).band, s.human_band);
        EXPECT_EQ(s.student.role(), Role::Student);
    }
    EXPECT_EQ(per_band[Band::Beginning], 2);
    EXPECT_EQ(per_band[Band::Developing], 2);
    EXPECT_EQ(per_band[Band::Proficient], 2);
}

TEST(Synth, PackWritesAndLoads) {
    srg::testing::TempDir tmp;
    SynthOptions opts;
    opts.samples_per_item = 3;
    EXPECT_EQ(write_synthetic_pack(tmp.path(), opts), 18u);
    const Dataset ds = load_dataset(tmp.path());
    EXPECT_EQ(ds.items.size(), 6u);
    EXPECT_EQ(ds.sample_count(), 18u);
    EXPECT_TRUE(ds.warnings.empty());
}

TEST(Synth, DegradeStaysInsideTheOntology) {
    const std::vector<ItemSpec> items = synthetic_items();
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
        const ItemSpec& item = items[static_cast<std::size_t>(i) % items.size()];
        const Srg g = degrade(item, rng);
        EXPECT_TRUE(validate_against_ontology(g, item.ontology).ok());
        EXPECT_LE(g.edge_count(), item.gold.edge_count() + 1);  // at most one edge to an extraneous node
    }
}
