#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lagbench/corrupt.hpp"
#include "lagbench/graph.hpp"
#include "lagbench/simulate.hpp"

namespace lagbench {

enum class NoiseFamily {
    gaussian_and_t,          // even variables Gaussian, odd Student-t(3)
    mixed_gaussian_laplace,  // every variable a Gaussian/Laplace mixture
};

/// Forces a single error distribution on "Gaussian and t" variants, as in
/// result tables that report Gaussian and Student-t runs separately.
enum class NoiseOverride { none, gaussian, student_t };

std::string_view to_string(NoiseFamily family);
std::string_view to_string(NoiseOverride override_kind);
NoiseOverride parse_noise_override(std::string_view text);

struct VariantSpec {
    std::string id;
    std::string base_id;  // id without the trailing C
    FunctionalForm form = FunctionalForm::linear;
    NoiseFamily noise = NoiseFamily::gaussian_and_t;
    SamplingScheme sampling;
    MissingnessSpec missingness;
    bool confounded = false;
    Coupling coupling = Coupling::linear;
};

inline constexpr double kNoiseScale = 0.1;
inline constexpr double kStudentDof = 3.0;
inline constexpr double kMixRatio = 0.5;
inline constexpr double kIrregularRate = 0.5;
inline constexpr double kMcarRate = 0.2;
inline constexpr double kCombinedMcarRate = 0.1;

const std::vector<std::string>& variant_ids();

/// Throws ConfigError listing the valid ids for an unknown id.
VariantSpec resolve_variant(std::string_view id);

/// Graph shape of one experiment configuration.
struct GraphShape {
    std::size_t num_variables = 4;
    std::size_t max_lag = 2;
    std::size_t num_edges = 0;  // 0 = default_edge_count(num_variables)

    std::size_t edges() const { return num_edges == 0 ? default_edge_count(num_variables) : num_edges; }
    std::string label() const;
};

/// Seed used for the ground truth of a configuration. It depends only on the
/// master seed and the shape, so every variant and sample size of one
/// configuration shares one structure and one set of coefficients.
std::uint64_t graph_seed(std::uint64_t master_seed, const GraphShape& shape);

/// generate_graph followed by coefficient redraws until the linear companion
/// form is stable.
TemporalCausalGraph reference_graph(std::uint64_t master_seed, const GraphShape& shape);

/// U -> {X1, X3} (or {X0, X1} below four variables) with the given coupling.
ConfounderSpec default_confounder(std::size_t num_variables, Coupling coupling);

std::vector<NoiseModel> noise_models(NoiseFamily family, std::size_t num_variables,
                                     NoiseOverride override_kind = NoiseOverride::none);

/// Per-variable trend and seasonality used by the trigonometric variants: slope
/// 0.01 * scale per step, period 12, harmonics 1 and 2.
std::vector<TrendSeason> default_trend_season(std::size_t num_variables);

/// Degrees alternate 2, 3 by edge index.
std::vector<int> default_poly_degrees(std::size_t num_edges);

/// Full generative specification for `variant` over `graph`. The graph must
/// already carry the confounder block for confounded variants.
ScmSpec make_scm(const VariantSpec& variant, const TemporalCausalGraph& graph,
                 NoiseOverride override_kind = NoiseOverride::none);

struct MaterializedDataset {
    std::string dataset_id;
    VariantSpec variant;
    GraphShape shape;
    std::size_t size = 0;
    GroundTruth truth;
    ScmSpec scm;
    Dataset data;  // complete values plus mask when the variant has missingness
    std::uint64_t master_seed = 0;
    NoiseOverride noise_override = NoiseOverride::none;
};

std::string dataset_id(std::string_view variant_id, const GraphShape& shape, std::size_t size);

std::uint64_t dataset_seed(std::uint64_t master_seed, std::string_view variant_id, const GraphShape& shape,
                           std::size_t size);

/// Simulates and corrupts one dataset of exactly `size` rows. Irregular
/// variants simulate a longer grid and keep the first `size` arrivals.
MaterializedDataset materialize(const VariantSpec& variant, const GraphShape& shape, std::size_t size,
                                std::uint64_t master_seed, NoiseOverride override_kind = NoiseOverride::none);

}  // namespace lagbench
