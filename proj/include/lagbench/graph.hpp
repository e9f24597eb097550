#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lagbench/seed.hpp"

namespace lagbench {

/// Identity of a lagged edge without its weight: X_src(t - lag) -> X_dst(t).
struct EdgeKey {
    std::size_t src = 0;
    std::size_t dst = 0;
    std::size_t lag = 1;

    auto operator<=>(const EdgeKey&) const = default;
};

struct LaggedEdge {
    std::size_t src = 0;
    std::size_t dst = 0;
    std::size_t lag = 1;
    double coeff = 0.0;

    EdgeKey key() const { return {src, dst, lag}; }
    bool autoregressive() const { return src == dst; }
    bool operator==(const LaggedEdge&) const = default;
};

enum class Coupling { linear, quadratic };

std::string_view to_string(Coupling coupling);
Coupling parse_coupling(std::string_view text);

struct ConfounderTarget {
    std::size_t var = 0;
    Coupling coupling = Coupling::linear;

    bool operator==(const ConfounderTarget&) const = default;
};

/// Latent stationary AR(1) driver U shared by several observed variables.
struct ConfounderSpec {
    std::vector<ConfounderTarget> targets;
    double ar_coeff = 0.8;
    double noise_scale = 0.1;

    /// Throws ConfigError on fewer than two targets, duplicate or out-of-range
    /// targets, |ar_coeff| >= 1 or non-positive noise_scale.
    void validate(std::size_t num_variables) const;

    bool operator==(const ConfounderSpec&) const = default;
};

struct TemporalCausalGraph {
    std::size_t num_variables = 0;
    std::size_t max_lag = 1;
    std::vector<LaggedEdge> edges;
    std::optional<ConfounderSpec> confounder;

    /// Checks every invariant; throws ConfigError naming the first violation.
    /// Simulation specs may pass require_nonzero_coeffs = false to run a
    /// structure with some weights switched off.
    void validate(bool require_nonzero_coeffs = true) const;

    std::vector<EdgeKey> keys() const;
    bool operator==(const TemporalCausalGraph&) const = default;
};

struct GraphConfig {
    std::size_t num_variables = 4;
    std::size_t max_lag = 2;
    std::size_t num_edges = 9;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Edge budget used when a configuration does not set one: ceil(2.25 * vars),
/// which gives 9 edges for 4 variables.
std::size_t default_edge_count(std::size_t num_variables);

inline constexpr double kMinCoeffMagnitude = 0.1;
inline constexpr double kMaxCoeffMagnitude = 0.5;

/// Random ground truth: one lag-1 self edge per variable first, then distinct
/// (src, dst, lag) triples drawn uniformly from the rest. Coefficients are
/// random sign times U[0.1, 0.5].
TemporalCausalGraph generate_graph(const GraphConfig& config);

/// Redraws every coefficient from the same distribution generate_graph uses,
/// leaving the structure untouched.
void redraw_coefficients(TemporalCausalGraph& graph, Rng& rng);

TemporalCausalGraph add_confounder(const TemporalCausalGraph& graph, const ConfounderSpec& spec);

struct UnrolledNode {
    std::size_t var = 0;
    std::size_t lag = 0;

    bool operator==(const UnrolledNode&) const = default;
};

/// Window graph over (variable, lag) nodes, lag 0..max_lag. Node index is
/// lag * num_variables + var; an edge points from the older node to the newer.
struct UnrolledGraph {
    std::vector<UnrolledNode> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

UnrolledGraph unroll(const TemporalCausalGraph& graph);

// Ground-truth file

struct GroundTruth {
    TemporalCausalGraph graph;
    std::uint64_t seed = 0;
    std::string variant_id;
};

/// Fixed field order; reals written with 17 significant digits.
std::string ground_truth_to_json(const GroundTruth& truth);
GroundTruth ground_truth_from_json(std::string_view text);

}  // namespace lagbench
