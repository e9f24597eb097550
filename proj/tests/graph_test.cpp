#include <gtest/gtest.h>

#include <set>

#include "lagbench/errors.hpp"
#include "lagbench/graph.hpp"
#include "oracles.hpp"

using namespace lagbench;

namespace {

GraphConfig reference_config(std::uint64_t seed = 7) { return {4, 2, 9, seed}; }

}  // namespace

TEST(GenerateGraph, ReferenceConfigHasNineEdgesFourAutoregressive) {
    const auto g = generate_graph(reference_config());
    ASSERT_EQ(g.edges.size(), 9u);
    std::size_t self = 0;
    for (const auto& e : g.edges) {
        EXPECT_GE(e.lag, 1u);
        EXPECT_LE(e.lag, 2u);
        if (e.autoregressive() && e.lag == 1) ++self;
        EXPECT_GE(std::abs(e.coeff), kMinCoeffMagnitude);
        EXPECT_LE(std::abs(e.coeff), kMaxCoeffMagnitude);
    }
    EXPECT_GE(self, 4u);
    // The mandatory self edges come first.
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(g.edges[j].key(), (EdgeKey{j, j, 1}));
    EXPECT_NO_THROW(g.validate());
}

TEST(GenerateGraph, SingleVariableBudgetIsExhaustedBySelfEdge) {
    const auto g = generate_graph({1, 1, 1, 0});
    ASSERT_EQ(g.edges.size(), 1u);
    EXPECT_EQ(g.edges[0].key(), (EdgeKey{0, 0, 1}));
}

TEST(GenerateGraph, DeterministicInSeed) {
    EXPECT_EQ(generate_graph(reference_config()), generate_graph(reference_config()));
    EXPECT_NE(generate_graph(reference_config(7)), generate_graph(reference_config(8)));
}

TEST(GenerateGraph, RejectsBudgetOutsideBounds) {
    try {
        generate_graph({4, 2, 3, 0});
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("lower bound"), std::string::npos);
    }
    try {
        generate_graph({4, 2, 33, 0});
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("upper bound"), std::string::npos);
    }
    EXPECT_NO_THROW(generate_graph({4, 2, 32, 0}));  // complete lagged graph
}

TEST(GenerateGraph, PropertiesHoldAcrossConfigurations) {
    for (std::size_t vars : {4u, 6u, 8u}) {
        for (std::size_t lag : {2u, 3u, 4u}) {
            for (std::uint64_t seed = 0; seed < 20; ++seed) {
                const std::size_t edges = default_edge_count(vars);
                const auto g = generate_graph({vars, lag, edges, seed});
                ASSERT_EQ(g.edges.size(), edges);
                std::set<EdgeKey> keys;
                std::vector<bool> has_self(vars, false);
                for (const auto& e : g.edges) {
                    ASSERT_TRUE(keys.insert(e.key()).second);
                    ASSERT_GE(e.lag, 1u);
                    ASSERT_LE(e.lag, lag);
                    if (e.src == e.dst) has_self[e.dst] = true;
                }
                for (bool s : has_self) ASSERT_TRUE(s);
                const auto u = unroll(g);
                ASSERT_TRUE(oracle::acyclic(u.nodes.size(), u.edges));
            }
        }
    }
}

TEST(GenerateGraph, DefaultEdgeDensity) {
    EXPECT_EQ(default_edge_count(4), 9u);
    EXPECT_EQ(default_edge_count(6), 14u);
    EXPECT_EQ(default_edge_count(8), 18u);
}

TEST(AddConfounder, KeepsObservedEdges) {
    const auto base = generate_graph(reference_config());
    ConfounderSpec spec;
    spec.targets = {{1, Coupling::linear}, {3, Coupling::linear}};
    const auto confounded = add_confounder(base, spec);
    EXPECT_EQ(confounded.edges, base.edges);
    ASSERT_TRUE(confounded.confounder.has_value());
    EXPECT_FALSE(base.confounder.has_value());
}

TEST(AddConfounder, QuadraticCouplingTagsSurvive) {
    const auto base = generate_graph(reference_config(3));
    ConfounderSpec spec;
    spec.targets = {{0, Coupling::quadratic}, {2, Coupling::quadratic}};
    const auto g = add_confounder(base, spec);
    for (const auto& t : g.confounder->targets) EXPECT_EQ(t.coupling, Coupling::quadratic);
}

TEST(AddConfounder, RejectsInvalidSpecs) {
    const auto base = generate_graph(reference_config());
    ConfounderSpec one;
    one.targets = {{1, Coupling::linear}};
    EXPECT_THROW(add_confounder(base, one), ConfigError);

    ConfounderSpec out_of_range;
    out_of_range.targets = {{1, Coupling::linear}, {4, Coupling::linear}};
    EXPECT_THROW(add_confounder(base, out_of_range), ConfigError);

    ConfounderSpec explosive;
    explosive.targets = {{1, Coupling::linear}, {2, Coupling::linear}};
    explosive.ar_coeff = 1.0;
    EXPECT_THROW(add_confounder(base, explosive), ConfigError);
}

TEST(Unroll, SingleSelfEdge) {
    TemporalCausalGraph g{1, 1, {{0, 0, 1, 0.3}}, std::nullopt};
    const auto u = unroll(g);
    EXPECT_EQ(u.nodes.size(), 2u);
    ASSERT_EQ(u.edges.size(), 1u);
    EXPECT_EQ(u.nodes[u.edges[0].first], (UnrolledNode{0, 1}));
    EXPECT_EQ(u.nodes[u.edges[0].second], (UnrolledNode{0, 0}));
}

TEST(Unroll, EmptyEdgeSet) {
    TemporalCausalGraph g{3, 2, {}, std::nullopt};
    const auto u = unroll(g);
    EXPECT_EQ(u.nodes.size(), 9u);
    EXPECT_TRUE(u.edges.empty());
}

TEST(Unroll, ReferenceGraphMatchesPairwiseEnumeration) {
    const auto g = generate_graph(reference_config());
    const auto u = unroll(g);
    EXPECT_EQ(u.nodes.size(), 12u);

    // Count node pairs ((a, la), (b, lb)) with la > lb that some edge explains.
    const auto all_keys = g.keys();
    const std::set<EdgeKey> keys(all_keys.begin(), all_keys.end());
    std::size_t expected = 0;
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t la = 0; la <= 2; ++la) {
            for (std::size_t b = 0; b < 4; ++b) {
                for (std::size_t lb = 0; lb < la; ++lb) {
                    if (keys.count({a, b, la - lb})) ++expected;
                }
            }
        }
    }
    EXPECT_EQ(u.edges.size(), expected);
    EXPECT_GE(u.edges.size(), 9u);
    EXPECT_TRUE(oracle::acyclic(u.nodes.size(), u.edges));
}

TEST(GroundTruthJson, FieldOrderAndNullConfounder) {
    const GroundTruth truth{generate_graph(reference_config()), 7, "A1"};
    const std::string json = ground_truth_to_json(truth);
    const char* order[] = {"\"num_variables\"", "\"max_lag\"", "\"edges\"", "\"confounder\"", "\"seed\"",
                           "\"variant_id\""};
    std::size_t pos = 0;
    for (const char* key : order) {
        const std::size_t at = json.find(key, pos);
        ASSERT_NE(at, std::string::npos) << key;
        pos = at;
    }
    EXPECT_NE(json.find("\"confounder\": null"), std::string::npos);
}

TEST(GroundTruthJson, RoundTripIsBitExact) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto g = generate_graph({6, 3, 14, seed});
        if (seed % 2) {
            ConfounderSpec spec;
            spec.targets = {{1, Coupling::quadratic}, {3, Coupling::linear}};
            spec.ar_coeff = 0.1 + 1.0 / 3.0;
            g = add_confounder(g, spec);
        }
        const GroundTruth truth{g, seed, "B1C"};
        const auto back = ground_truth_from_json(ground_truth_to_json(truth));
        ASSERT_EQ(back.graph, g);
        ASSERT_EQ(back.seed, seed);
        ASSERT_EQ(back.variant_id, "B1C");
    }
}

TEST(GroundTruthJson, RejectsInvalidGraph) {
    EXPECT_THROW(ground_truth_from_json(R"({"num_variables":2,"max_lag":1,"edges":[{"src":0,"dst":0,"lag":1,"coeff":0.2}],
        "confounder":null,"seed":0,"variant_id":"x"})"),
                 ConfigError);  // X1 lacks a self edge
    EXPECT_THROW(ground_truth_from_json("{not json"), ConfigError);
}
