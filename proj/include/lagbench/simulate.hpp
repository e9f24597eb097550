#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lagbench/dataset.hpp"
#include "lagbench/graph.hpp"
#include "lagbench/seed.hpp"

namespace lagbench {

enum class NoiseKind { gaussian, student_t, laplace, mixed };

std::string_view to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view text);

/// Every kind is normalized so its standard deviation equals `scale`.
struct NoiseModel {
    NoiseKind kind = NoiseKind::gaussian;
    double scale = 0.1;
    double dof = 3.0;        // student_t only
    double mix_ratio = 0.5;  // mixed only: probability of the Gaussian component

    static NoiseModel gaussian(double scale) { return {NoiseKind::gaussian, scale, 3.0, 0.5}; }
    static NoiseModel student_t(double scale, double dof) { return {NoiseKind::student_t, scale, dof, 0.5}; }
    static NoiseModel laplace(double scale) { return {NoiseKind::laplace, scale, 3.0, 0.5}; }
    static NoiseModel mixed(double scale, double ratio) { return {NoiseKind::mixed, scale, 3.0, ratio}; }

    void validate() const;
};

/// Stateful i.i.d. draw source for one NoiseModel. Gaussian draws come from a
/// primary stream; mixture branch choice and Laplace draws use a secondary one,
/// so a mixed model with mix_ratio 1 reproduces the pure Gaussian sequence.
class NoiseSampler {
public:
    NoiseSampler(const NoiseModel& model, std::uint64_t seed);

    double operator()();

private:
    double laplace();

    NoiseModel model_;
    Rng primary_;
    Rng secondary_;
    std::normal_distribution<double> normal_;
    std::student_t_distribution<double> student_;
    double t_rescale_ = 1.0;
};

std::vector<double> sample_noise(const NoiseModel& model, std::size_t n, std::uint64_t seed);

struct Harmonic {
    double amplitude = 1.0;
    int index = 1;  // multiple of the base seasonal frequency
    double phase = 0.0;
};

struct TrendSeason {
    double trend_slope = 0.0;
    int season_period = 12;
    std::vector<Harmonic> harmonics;

    void validate() const;
};

enum class FunctionalForm { linear, polynomial, trig_trend_seasonal };

std::string_view to_string(FunctionalForm form);

struct ScmSpec {
    TemporalCausalGraph graph;
    FunctionalForm form = FunctionalForm::linear;
    std::vector<NoiseModel> noise;         // one per variable
    std::vector<TrendSeason> trend_season;  // one per variable, trig form only
    std::vector<int> poly_degrees;          // one per edge, polynomial form only
    double confounder_linear_coeff = 0.4;
    double confounder_quadratic_coeff = 0.2;

    void validate() const;
};

inline constexpr std::size_t kBurnIn = 200;
inline constexpr double kOverflowGuard = 1e6;
inline constexpr double kPolynomialClip = 10.0;
inline constexpr double kStabilityThreshold = 0.98;

/// Runs the structural recursion on the unit grid t = 0..length-1 after a
/// zero-filled lag window and a discarded burn-in. Pure in (spec, length, seed).
/// Throws InstabilityError if any |x| exceeds kOverflowGuard.
Dataset simulate(const ScmSpec& spec, std::size_t length, std::uint64_t seed);

/// VAR(max_lag) companion matrix of the graph's coefficients, in block form
/// [A_1 A_2 ... A_p; I 0 ...; ...] where A_l(dst, src) is the lag-l weight.
Eigen::MatrixXd companion_matrix(const TemporalCausalGraph& graph);

double spectral_radius(const Eigen::MatrixXd& matrix);

struct StabilityReport {
    bool stable = false;
    double spectral_radius = 0.0;
};

/// Linear form only; throws ConfigError otherwise.
StabilityReport stability_check(const ScmSpec& spec);

/// Redraws coefficients (structure fixed) until the companion radius is below
/// kStabilityThreshold. Deterministic in seed; throws DataError if no stable
/// draw is found within max_attempts.
TemporalCausalGraph stabilize(const TemporalCausalGraph& graph, std::uint64_t seed, int max_attempts = 1000);

}  // namespace lagbench
