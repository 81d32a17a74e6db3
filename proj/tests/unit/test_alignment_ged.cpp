// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "srg/alignment.hpp"
#include "srg/errors.hpp"
#include "srg/ged.hpp"

using namespace srg;

namespace {

SrgNode node(std::string id, std::string c, Bloom b) {
    SrgNode n;
    n.id = std::move(id);
    n.concept_id = std::move(c);
    n.bloom = b;
    return n;
}

Srg as_gold(const Srg& g) { return Srg(g.item_id(), Role::Gold, g.nodes(), g.edges()); }

}  // namespace

TEST(Alignment, PairWeightMixesSimilarityAndBloom) {
    const Ontology& o = srg::testing::water_dye().ontology;
    const AlignmentParams p;
    const SrgNode a = node("a", "Water_Particle_Room", Bloom::Understand);
    EXPECT_DOUBLE_EQ(pair_weight(a, node("g", "Water_Particle_Room", Bloom::Understand), o, p), 1.0);
    EXPECT_DOUBLE_EQ(pair_weight(a, node("g", "Water_Particle_Room", Bloom::Apply), o, p), 0.5);
    EXPECT_NEAR(pair_weight(a, node("g", "Water_Particle_Cold", Bloom::Understand), o, p), 0.5 * 2.0 / 3 + 0.5,
                1e-9);
    EXPECT_DOUBLE_EQ(pair_weight(node("x", "Unknown", Bloom::Apply), node("g", "Unknown", Bloom::Remember), o, p),
                     0.0);
}

TEST(Alignment, RespectsFloorAndNormalization) {
    const ItemSpec& item = srg::testing::water_dye();
    const Srg s = srg::testing::water_dye_sample("fig4b");
    AlignmentParams p;
    const Alignment a = best_alignment(s.nodes(), item.gold.nodes(), item.ontology, p);
    ASSERT_EQ(a.pairs.size(), 4u);
    for (const AlignedPair& pair : a.pairs) EXPECT_GE(pair.weight, p.w_min);
    EXPECT_DOUBLE_EQ(f_oa(a, 4, 7, p), a.total_weight() / 7.0);
    p.oa_norm = OaNorm::Sum;
    EXPECT_DOUBLE_EQ(f_oa(a, 4, 7, p), a.total_weight() / 11.0);

    p.w_min = 1.0;  // only perfect pairs survive
    const Alignment strict = best_alignment(s.nodes(), item.gold.nodes(), item.ontology, p);
    EXPECT_EQ(strict.pairs.size(), 3u);
    EXPECT_EQ(strict.for_student("s1"), nullptr);
}

TEST(Alignment, EmptySides) {
    const AlignmentParams p;
    const Alignment a = best_alignment({}, {}, srg::testing::water_dye().ontology, p);
    EXPECT_TRUE(a.pairs.empty());
    EXPECT_DOUBLE_EQ(f_oa(a, 0, 0, p), 1.0);
    EXPECT_DOUBLE_EQ(f_oa(a, 0, 3, p), 0.0);
}

TEST(Alignment, TieBreakIsLexicographic) {
    // Two interchangeable student nodes and two identical gold nodes.
    const Ontology& o = srg::testing::water_dye().ontology;
    const std::vector<SrgNode> s = {node("s2", "Particle", Bloom::Apply), node("s1", "Particle", Bloom::Apply)};
    const std::vector<SrgNode> g = {node("g2", "Particle", Bloom::Apply), node("g1", "Particle", Bloom::Apply)};
    const Alignment a = best_alignment(s, g, o, {});
    ASSERT_EQ(a.pairs.size(), 2u);
    EXPECT_EQ(a.pairs[0], (AlignedPair{"s1", "g1", 1.0}));
    EXPECT_EQ(a.pairs[1], (AlignedPair{"s2", "g2", 1.0}));
}

TEST(Alignment, AgreesWithEnumerationOnSmallRandomInstances) {
    std::mt19937_64 rng(3);
    for (int round = 0; round < 200; ++round) {
        const Ontology o = srg::testing::random_ontology(rng, 6, 1);
        const Srg s = srg::testing::random_graph(rng, o, Role::Student, {4, 0, 0}, "s");
        const Srg g = srg::testing::random_graph(rng, o, Role::Gold, {4, 0, 0}, "g");
        const Alignment a = best_alignment(s.nodes(), g.nodes(), o, {});
        const auto b = srg::testing::brute_force_alignment(s, g, o, {});
        ASSERT_EQ(a.total_units, b.total);
        ASSERT_EQ(a.pairs.size(), b.pairs.size());
        for (std::size_t i = 0; i < a.pairs.size(); ++i) {
            ASSERT_EQ(a.pairs[i].student_id, b.pairs[i].first);
            ASSERT_EQ(a.pairs[i].gold_id, b.pairs[i].second);
        }
    }
}

TEST(Alignment, ParamsValidateAndRoundTrip) {
    AlignmentParams p;
    p.alpha = 1.5;
    EXPECT_THROW(p.validate(), ValueError);
    p = {};
    p.oa_norm = OaNorm::Sum;
    p.w_min = 0.25;
    const AlignmentParams back = alignment_params_from_json(alignment_params_to_json(p));
    EXPECT_EQ(back.oa_norm, OaNorm::Sum);
    EXPECT_DOUBLE_EQ(back.w_min, 0.25);
    EXPECT_THROW(oa_norm_from_string("min"), ValueError);
}

TEST(Ged, WorkedExampleCost) {
    const ItemSpec& item = srg::testing::water_dye();
    const GedResult r = ged_exact(srg::testing::water_dye_sample("fig4b"), item.gold, item.scoring.costs, item.ontology);
    EXPECT_TRUE(r.exact);
    EXPECT_NEAR(r.cost, 7.1, 1e-9);
    EXPECT_EQ(normalizer_z(srg::testing::water_dye_sample("fig4b"), item.gold), 21u);
}

TEST(Ged, IdentityCostsNothing) {
    const ItemSpec& item = srg::testing::water_dye();
    const GedResult r = ged_exact(srg::testing::water_dye_sample("gold-copy"), item.gold, item.scoring.costs, item.ontology, 14);
    EXPECT_EQ(r.cost_units, 0);
    EXPECT_EQ(normalizer_z(Srg(), Srg()), 1u);
}

TEST(Ged, BloomPenaltyIsDirectional) {
    const Ontology& o = srg::testing::water_dye().ontology;
    const EditCostModel c;
    const SrgNode gold = node("g", "Particle", Bloom::Analyze);
    EXPECT_DOUBLE_EQ(c.node_substitution(node("s", "Particle", Bloom::Remember), gold, o), 0.5 * 3 / 5);
    EXPECT_DOUBLE_EQ(c.node_substitution(node("s", "Particle", Bloom::Create), gold, o), 0.0);
}

TEST(Ged, ScriptReplaysToGoldStructure) {
    std::mt19937_64 rng(8);
    const EditCostModel costs;
    for (int round = 0; round < 100; ++round) {
        const Ontology o = srg::testing::random_ontology(rng, 8, 2);
        const Srg s = srg::testing::random_graph(rng, o, Role::Student, {5, 6, 0}, "s");
        const Srg g = srg::testing::random_graph(rng, o, Role::Gold, {5, 6, 0}, "g");
        for (const GedResult& r : {ged_exact(s, g, costs, o), ged_beam(s, g, costs, o, 4)}) {
            Units sum = 0;
            for (const EditOp& op : r.script) sum += to_units(op.cost);
            ASSERT_EQ(sum, r.cost_units);
            const Srg out = apply_edit_script(s, r);
            ASSERT_EQ(out.node_count(), g.node_count());
            ASSERT_EQ(out.edge_count(), g.edge_count());
            for (const SrgNode& n : g.nodes()) {
                const SrgNode* m = out.find_node(n.id);
                ASSERT_NE(m, nullptr);
                ASSERT_EQ(m->concept_id, n.concept_id);
                ASSERT_EQ(m->bloom, n.bloom);
            }
            for (const SrgEdge& e : g.edges()) ASSERT_TRUE(out.has_edge(e.source, e.target, e.relation));
        }
    }
}

TEST(Ged, ExactMatchesBruteForceAndBeamBoundsIt) {
    std::mt19937_64 rng(12);
    const EditCostModel costs;
    for (int round = 0; round < 100; ++round) {
        const Ontology o = srg::testing::random_ontology(rng, 10, 3);
        const Srg s = srg::testing::random_graph(rng, o, Role::Student, {5, 6, 0}, "s");
        const Srg g = srg::testing::random_graph(rng, o, Role::Gold, {5, 6, 0}, "g");
        const Units exact = ged_exact(s, g, costs, o).cost_units;
        ASSERT_EQ(exact, srg::testing::brute_force_ged(s, g, costs, o));
        ASSERT_GE(ged_beam(s, g, costs, o, 1).cost_units, exact);
    }
}

TEST(Ged, LimitsAndArguments) {
    const ItemSpec& item = srg::testing::water_dye();
    const Srg s = srg::testing::water_dye_sample("gold-copy");
    EXPECT_THROW(ged_exact(s, item.gold, {}, item.ontology, 13), SizeLimitExceeded);
    EXPECT_NO_THROW(ged_exact(s, item.gold, {}, item.ontology, 14));
    EXPECT_THROW(ged_beam(s, item.gold, {}, item.ontology, 0), ValueError);
    EditCostModel bad;
    bad.node_insert = -1;
    EXPECT_THROW(bad.validate(), ValueError);
}

TEST(Ged, CostModelRoundTrip) {
    EditCostModel c;
    c.beta = 0.75;
    c.relation_mismatch = 0.5;
    const EditCostModel back = cost_model_from_json(cost_model_to_json(c));
    EXPECT_DOUBLE_EQ(back.beta, 0.75);
    EXPECT_DOUBLE_EQ(back.relation_mismatch, 0.5);
}

TEST(Ged, SelfDistanceIsZeroOnRandomGraphs) {
    std::mt19937_64 rng(21);
    for (int round = 0; round < 50; ++round) {
        const Ontology o = srg::testing::random_ontology(rng, 8, 2);
        const Srg g = srg::testing::random_graph(rng, o, Role::Student, {6, 8, 0});
        EXPECT_EQ(ged_exact(g, as_gold(g), {}, o).cost_units, 0);
        EXPECT_EQ(ged_beam(g, as_gold(g), {}, o, 32).cost_units, 0);
    }
}
