#include "lagbench/simulate.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lagbench/errors.hpp"

namespace lagbench {

std::string_view to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::gaussian: return "gaussian";
        case NoiseKind::student_t: return "student_t";
        case NoiseKind::laplace: return "laplace";
        case NoiseKind::mixed: return "mixed";
    }
    return "?";
}

NoiseKind parse_noise_kind(std::string_view text) {
    if (text == "gaussian") return NoiseKind::gaussian;
    if (text == "student_t") return NoiseKind::student_t;
    if (text == "laplace") return NoiseKind::laplace;
    if (text == "mixed") return NoiseKind::mixed;
    throw ConfigError("unknown noise kind '" + std::string(text) + "'");
}

std::string_view to_string(FunctionalForm form) {
    switch (form) {
        case FunctionalForm::linear: return "linear";
        case FunctionalForm::polynomial: return "polynomial";
        case FunctionalForm::trig_trend_seasonal: return "trig_trend_seasonal";
    }
    return "?";
}

void NoiseModel::validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("noise scale must be positive");
    if (kind == NoiseKind::student_t && !(dof > 2.0)) {
        throw ConfigError("student_t noise needs dof > 2 for a finite variance");
    }
    if (kind == NoiseKind::mixed && !(mix_ratio >= 0.0 && mix_ratio <= 1.0)) {
        throw ConfigError("mixed noise mix_ratio must lie in [0, 1]");
    }
}

NoiseSampler::NoiseSampler(const NoiseModel& model, std::uint64_t seed)
    : model_(model),
      primary_(seed),
      secondary_(derive_seed(seed, "secondary")),
      normal_(0.0, model.scale),
      student_(model.kind == NoiseKind::student_t ? model.dof : 3.0) {
    model_.validate();
    if (model_.kind == NoiseKind::student_t) {
        t_rescale_ = model_.scale / std::sqrt(model_.dof / (model_.dof - 2.0));
    }
}

double NoiseSampler::laplace() {
    // Inverse CDF; b = scale / sqrt(2) gives standard deviation `scale`.
    const double b = model_.scale / std::numbers::sqrt2;
    const double u = std::generate_canonical<double, 64>(secondary_) - 0.5;
    const double tail = std::max(1.0 - 2.0 * std::abs(u), std::numeric_limits<double>::min());
    return u < 0.0 ? b * std::log(tail) : -b * std::log(tail);
}

double NoiseSampler::operator()() {
    switch (model_.kind) {
        case NoiseKind::gaussian: return normal_(primary_);
        case NoiseKind::student_t: return t_rescale_ * student_(primary_);
        case NoiseKind::laplace: return laplace();
        case NoiseKind::mixed: {
            const double branch = std::generate_canonical<double, 64>(secondary_);
            return branch < model_.mix_ratio ? normal_(primary_) : laplace();
        }
    }
    return 0.0;
}

std::vector<double> sample_noise(const NoiseModel& model, std::size_t n, std::uint64_t seed) {
    NoiseSampler draw(model, seed);
    std::vector<double> out(n);
    for (auto& x : out) x = draw();
    return out;
}

void TrendSeason::validate() const {
    if (season_period < 2) throw ConfigError("season_period must be >= 2");
    if (!std::isfinite(trend_slope)) throw ConfigError("trend_slope must be finite");
    for (const auto& h : harmonics) {
        if (!std::isfinite(h.amplitude) || !std::isfinite(h.phase)) {
            throw ConfigError("harmonic amplitude and phase must be finite");
        }
        if (h.index < 1) throw ConfigError("harmonic index must be >= 1");
    }
}

void ScmSpec::validate() const {
    graph.validate(false);
    if (noise.size() != graph.num_variables) {
        throw ConfigError("need one noise model per variable (" + std::to_string(graph.num_variables) + "), got " +
                          std::to_string(noise.size()));
    }
    for (const auto& n : noise) n.validate();
    if (form == FunctionalForm::trig_trend_seasonal) {
        if (trend_season.size() != graph.num_variables) {
            throw ConfigError("trig_trend_seasonal form needs one trend/season block per variable");
        }
        for (const auto& ts : trend_season) ts.validate();
    } else if (!trend_season.empty()) {
        throw ConfigError("trend/season parameters are only valid for the trig_trend_seasonal form");
    }
    if (form == FunctionalForm::polynomial) {
        if (poly_degrees.size() != graph.edges.size()) {
            throw ConfigError("polynomial form needs one degree per edge");
        }
        for (int d : poly_degrees) {
            if (d < 1 || d > 3) throw ConfigError("polynomial degree must be 1, 2 or 3");
        }
    } else if (!poly_degrees.empty()) {
        throw ConfigError("poly_degrees are only valid for the polynomial form");
    }
}

Dataset simulate(const ScmSpec& spec, std::size_t length, std::uint64_t seed) {
    if (length < 1) throw ConfigError("simulation length must be >= 1");
    spec.validate();

    const auto& g = spec.graph;
    const std::size_t n = g.num_variables;
    const std::size_t window = g.max_lag;
    const std::size_t total = window + kBurnIn + length;
    const auto origin = static_cast<std::ptrdiff_t>(window + kBurnIn);

    std::vector<NoiseSampler> noise;
    noise.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        noise.emplace_back(spec.noise[j], derive_seed(seed, "noise", std::to_string(j)));
    }

    std::vector<std::vector<std::size_t>> incoming(n);
    for (std::size_t e = 0; e < g.edges.size(); ++e) incoming[g.edges[e].dst].push_back(e);

    std::vector<double> confounder_coeff(n, 0.0);
    std::vector<bool> confounder_quadratic(n, false);
    std::optional<Rng> latent_rng;
    std::normal_distribution<double> latent_shock(0.0, 1.0);
    if (g.confounder) {
        for (const auto& t : g.confounder->targets) {
            confounder_quadratic[t.var] = t.coupling == Coupling::quadratic;
            confounder_coeff[t.var] = confounder_quadratic[t.var] ? spec.confounder_quadratic_coeff
                                                                  : spec.confounder_linear_coeff;
        }
        latent_rng.emplace(derive_seed(seed, "confounder"));
    }

    // Row-major history; the first `window` rows stay zero.
    std::vector<double> x(total * n, 0.0);
    double u = 0.0;

    for (std::size_t step = window; step < total; ++step) {
        const double t = static_cast<double>(static_cast<std::ptrdiff_t>(step) - origin);
        if (latent_rng) {
            u = g.confounder->ar_coeff * u + g.confounder->noise_scale * latent_shock(*latent_rng);
        }
        for (std::size_t j = 0; j < n; ++j) {
            double value = 0.0;
            for (std::size_t e : incoming[j]) {
                const auto& edge = g.edges[e];
                const double parent = x[(step - edge.lag) * n + edge.src];
                switch (spec.form) {
                    case FunctionalForm::linear:
                        value += edge.coeff * parent;
                        break;
                    case FunctionalForm::polynomial: {
                        const double clipped = std::clamp(parent, -kPolynomialClip, kPolynomialClip);
                        value += edge.coeff * std::pow(clipped, spec.poly_degrees[e]);
                        break;
                    }
                    case FunctionalForm::trig_trend_seasonal:
                        value += edge.coeff * (e % 2 == 0 ? std::sin(parent) : std::cos(parent));
                        break;
                }
            }
            if (spec.form == FunctionalForm::trig_trend_seasonal) {
                const auto& ts = spec.trend_season[j];
                value += ts.trend_slope * t;
                for (const auto& h : ts.harmonics) {
                    value += h.amplitude *
                             std::sin(2.0 * std::numbers::pi * h.index * t / ts.season_period + h.phase);
                }
            }
            if (confounder_coeff[j] != 0.0) {
                value += confounder_coeff[j] * (confounder_quadratic[j] ? u * u : u);
            }
            value += noise[j]();
            if (!std::isfinite(value) || std::abs(value) > kOverflowGuard) {
                throw InstabilityError(j, static_cast<std::ptrdiff_t>(step) - origin, value);
            }
            x[step * n + j] = value;
        }
    }

    Dataset out;
    out.values.resize(static_cast<Eigen::Index>(length), static_cast<Eigen::Index>(n));
    out.timestamps.resize(length);
    out.grid_index.resize(length);
    for (std::size_t r = 0; r < length; ++r) {
        out.timestamps[r] = static_cast<double>(r);
        out.grid_index[r] = r;
        for (std::size_t j = 0; j < n; ++j) {
            out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
                x[(static_cast<std::size_t>(origin) + r) * n + j];
        }
    }
    out.meta.seed = seed;
    return out;
}

Eigen::MatrixXd companion_matrix(const TemporalCausalGraph& graph) {
    const auto n = static_cast<Eigen::Index>(graph.num_variables);
    const auto p = static_cast<Eigen::Index>(graph.max_lag);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n * p, n * p);
    for (const auto& e : graph.edges) {
        const auto lag = static_cast<Eigen::Index>(e.lag);
        c(static_cast<Eigen::Index>(e.dst), (lag - 1) * n + static_cast<Eigen::Index>(e.src)) += e.coeff;
    }
    for (Eigen::Index block = 1; block < p; ++block) {
        c.block(block * n, (block - 1) * n, n, n).setIdentity();
    }
    return c;
}

double spectral_radius(const Eigen::MatrixXd& matrix) {
    if (matrix.size() == 0) return 0.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(matrix, false);
    if (solver.info() != Eigen::Success) throw DataError("eigenvalue computation did not converge");
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

StabilityReport stability_check(const ScmSpec& spec) {
    if (spec.form != FunctionalForm::linear) {
        throw ConfigError("stability_check supports the linear form only, got " + std::string(to_string(spec.form)));
    }
    const double radius = spectral_radius(companion_matrix(spec.graph));
    return {radius < kStabilityThreshold, radius};
}

TemporalCausalGraph stabilize(const TemporalCausalGraph& graph, std::uint64_t seed, int max_attempts) {
    TemporalCausalGraph candidate = graph;
    Rng rng(derive_seed(seed, "stabilize"));
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        if (spectral_radius(companion_matrix(candidate)) < kStabilityThreshold) return candidate;
        redraw_coefficients(candidate, rng);
    }
    throw DataError("no stable coefficient draw found in " + std::to_string(max_attempts) + " attempts");
}

}  // namespace lagbench
