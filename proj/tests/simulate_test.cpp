#include <gtest/gtest.h>

#include <cmath>

#include "lagbench/errors.hpp"
#include "lagbench/simulate.hpp"
#include "lagbench/variants.hpp"
#include "oracles.hpp"

using namespace lagbench;

namespace {

std::vector<double> column(const Dataset& d, std::size_t j, std::size_t from = 0, std::size_t to = SIZE_MAX) {
    to = std::min(to, d.rows());
    std::vector<double> out;
    for (std::size_t r = from; r < to; ++r) out.push_back(d.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)));
    return out;
}

ScmSpec linear_spec(TemporalCausalGraph graph) {
    ScmSpec spec;
    spec.graph = std::move(graph);
    spec.form = FunctionalForm::linear;
    spec.noise.assign(spec.graph.num_variables, NoiseModel::gaussian(0.1));
    return spec;
}

TemporalCausalGraph reference() { return reference_graph(11, GraphShape{4, 2, 9}); }

}  // namespace

TEST(SampleNoise, GaussianStdBand) {
    const auto x = sample_noise(NoiseModel::gaussian(0.1), 100000, 1);
    const double sd = std::sqrt(oracle::variance(x));
    EXPECT_GE(sd, 0.097);
    EXPECT_LE(sd, 0.103);
    EXPECT_NEAR(oracle::mean(x), 0.0, 3 * 0.1 / std::sqrt(1e5));
}

TEST(SampleNoise, StudentTIsHeavyTailed) {
    const auto x = sample_noise(NoiseModel::student_t(0.1, 3.0), 100000, 2);
    EXPECT_GT(oracle::excess_kurtosis(x), 1.0);
    const double sd = std::sqrt(oracle::variance(x));
    EXPECT_GE(sd, 0.097);
    EXPECT_LE(sd, 0.103);
}

TEST(SampleNoise, LaplaceMatchesScaleAndKurtosis) {
    const auto x = sample_noise(NoiseModel::laplace(0.1), 100000, 3);
    EXPECT_NEAR(std::sqrt(oracle::variance(x)), 0.1, 0.003);
    EXPECT_NEAR(oracle::excess_kurtosis(x), 3.0, 0.5);  // Laplace excess kurtosis is 3
}

TEST(SampleNoise, MixtureWithRatioOneReproducesGaussian) {
    const auto g = sample_noise(NoiseModel::gaussian(0.1), 5000, 9);
    const auto m = sample_noise(NoiseModel::mixed(0.1, 1.0), 5000, 9);
    EXPECT_EQ(g, m);
}

TEST(SampleNoise, MixtureStdBandAcrossRatios) {
    for (double ratio : {0.0, 0.25, 0.5, 1.0}) {
        const auto x = sample_noise(NoiseModel::mixed(0.1, ratio), 100000, 4);
        const double sd = std::sqrt(oracle::variance(x));
        EXPECT_GE(sd, 0.097) << ratio;
        EXPECT_LE(sd, 0.103) << ratio;
    }
}

TEST(SampleNoise, RejectsInvalidModels) {
    EXPECT_THROW(sample_noise(NoiseModel::gaussian(0.0), 10, 0), ConfigError);
    EXPECT_THROW(sample_noise(NoiseModel::student_t(0.1, 2.0), 10, 0), ConfigError);
    EXPECT_THROW(sample_noise(NoiseModel::mixed(0.1, 1.5), 10, 0), ConfigError);
}

TEST(Simulate, ZeroCoefficientsGiveWhiteNoise) {
    auto g = reference();
    for (auto& e : g.edges) e.coeff = 0.0;
    const auto d = simulate(linear_spec(g), 5000, 5);
    ASSERT_EQ(d.rows(), 5000u);
    for (std::size_t j = 0; j < 4; ++j) {
        const auto x = column(d, j);
        EXPECT_NEAR(oracle::mean(x), 0.0, 3 * 0.1 / std::sqrt(5000.0));
        // Standard error of a sample variance of normal data: sigma^2 sqrt(2 / (n - 1)).
        EXPECT_NEAR(oracle::variance(x), 0.01, 3 * 0.01 * std::sqrt(2.0 / 4999.0));
    }
}

TEST(Simulate, DeterministicInSeed) {
    const auto spec = linear_spec(reference());
    const auto a = simulate(spec, 800, 42);
    const auto b = simulate(spec, 800, 42);
    EXPECT_TRUE((a.values.array() == b.values.array()).all());
    const auto c = simulate(spec, 800, 43);
    EXPECT_FALSE((a.values.array() == c.values.array()).all());
}

TEST(Simulate, OutputIsFiniteOnUnitGrid) {
    const auto d = simulate(linear_spec(reference()), 300, 1);
    EXPECT_TRUE(d.values.allFinite());
    ASSERT_EQ(d.timestamps.size(), 300u);
    for (std::size_t r = 0; r < 300; ++r) EXPECT_EQ(d.timestamps[r], static_cast<double>(r));
    EXPECT_NO_THROW(d.validate());
}

TEST(Simulate, SeasonalPeakAtPeriodTwelve) {
    const auto v = resolve_variant("C1");
    const auto g = reference_graph(3, GraphShape{4, 2, 9});
    const auto d = simulate(make_scm(v, g), 3000, 17);
    for (std::size_t j = 0; j < 4; ++j) {
        EXPECT_EQ(oracle::periodogram_argmax(oracle::detrend(column(d, j))), 250u) << "X" << j;
    }
}

TEST(Simulate, BurnInRemovesInitialTransient) {
    const auto spec = linear_spec(reference());
    const auto d = simulate(spec, 5000, 8);
    for (std::size_t j = 0; j < 4; ++j) {
        const auto first = column(d, j, 0, 1250);
        const auto last = column(d, j, 3750, 5000);
        const double se = std::sqrt(oracle::variance(first) / 1250 + oracle::variance(last) / 1250);
        // Autocorrelation inflates the true standard error, so the bound is generous.
        EXPECT_LT(std::abs(oracle::mean(first) - oracle::mean(last)), 5 * se) << "X" << j;
    }
}

TEST(Simulate, DivergenceRaisesInstabilityWithLocation) {
    TemporalCausalGraph g{2, 1, {{0, 0, 1, 1.5}, {1, 1, 1, 0.2}}, std::nullopt};
    try {
        simulate(linear_spec(g), 1000, 0);
        FAIL() << "expected InstabilityError";
    } catch (const InstabilityError& e) {
        EXPECT_EQ(e.variable(), 0u);
        EXPECT_GE(e.step(), -static_cast<std::ptrdiff_t>(kBurnIn));
        EXPECT_LT(e.step(), 1000);
    }
}

TEST(Simulate, PolynomialFormStaysBounded) {
    const auto v = resolve_variant("B1");
    const auto d = simulate(make_scm(v, reference()), 2000, 4);
    EXPECT_TRUE(d.values.allFinite());
    EXPECT_LT(d.values.cwiseAbs().maxCoeff(), kOverflowGuard);
}

TEST(Simulate, ConfounderRaisesChildCorrelation) {
    const auto g = reference();
    const auto base = simulate(linear_spec(g), 5000, 21);
    const auto confounded =
        simulate(linear_spec(add_confounder(g, default_confounder(4, Coupling::linear))), 5000, 21);
    const double r_base = oracle::pearson(column(base, 1), column(base, 3));
    const double r_conf = oracle::pearson(column(confounded, 1), column(confounded, 3));
    EXPECT_GT(r_conf, r_base);
}

TEST(Stability, ZeroCoefficientsHaveZeroRadius) {
    auto g = reference();
    for (auto& e : g.edges) e.coeff = 0.0;
    const auto report = stability_check(linear_spec(g));
    EXPECT_TRUE(report.stable);
    EXPECT_NEAR(report.spectral_radius, 0.0, 1e-12);
}

TEST(Stability, ScalarExplosiveSelfEdge) {
    TemporalCausalGraph g{1, 1, {{0, 0, 1, 1.05}}, std::nullopt};
    const auto report = stability_check(linear_spec(g));
    EXPECT_FALSE(report.stable);
    EXPECT_NEAR(report.spectral_radius, 1.05, 1e-12);
}

TEST(Stability, CompanionRadiusMatchesCharacteristicRoots) {
    // x(t) = a x(t-1) + b x(t-2): roots of z^2 - a z - b.
    const double a = 0.5, b = 0.3;
    TemporalCausalGraph g{1, 2, {{0, 0, 1, a}, {0, 0, 2, b}}, std::nullopt};
    const double root = (a + std::sqrt(a * a + 4 * b)) / 2;
    EXPECT_NEAR(spectral_radius(companion_matrix(g)), root, 1e-12);
}

TEST(Stability, ReferenceGraphsAreStable) {
    for (std::size_t vars : {4u, 6u, 8u}) {
        for (std::size_t lag : {2u, 3u, 4u}) {
            const auto g = reference_graph(99, GraphShape{vars, lag, 0});
            EXPECT_TRUE(stability_check(linear_spec(g)).stable) << vars << "x" << lag;
        }
    }
}

TEST(Stability, NonlinearFormIsUnsupported) {
    auto spec = make_scm(resolve_variant("B1"), reference());
    EXPECT_THROW(stability_check(spec), ConfigError);
}

TEST(Stability, StabilizeKeepsStructure) {
    auto g = generate_graph({4, 2, 9, 5});
    for (auto& e : g.edges) e.coeff = 0.5;  // radius well above 1
    const auto s = stabilize(g, 5);
    ASSERT_EQ(s.edges.size(), g.edges.size());
    for (std::size_t i = 0; i < g.edges.size(); ++i) EXPECT_EQ(s.edges[i].key(), g.edges[i].key());
    EXPECT_LT(spectral_radius(companion_matrix(s)), kStabilityThreshold);
}
