#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>

#include "lagbench/graph.hpp"

namespace lagbench {

/// Algorithm output: directed lagged edges without weights.
struct DiscoveredGraph {
    std::size_t num_variables = 0;
    std::size_t max_lag = 1;
    std::set<EdgeKey> edges;

    static DiscoveredGraph from_truth(const TemporalCausalGraph& graph);

    /// Throws ConfigError on out-of-range variables or lags.
    void validate() const;
    bool operator==(const DiscoveredGraph&) const = default;
};

struct EvalReport {
    double tpr = 0.0;
    double fdr = 0.0;
    std::size_t shd = 0;
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;  // excludes reversals
    std::size_t false_negatives = 0;  // excludes reversals
    std::size_t reversals = 0;

    bool operator==(const EvalReport&) const = default;
};

enum class MatchMode {
    lag_resolved,  // (src, dst, lag) must agree
    summary,       // lags collapsed to one (src, dst) edge per pair
};

/// A pred edge (b, a, l) whose mirror (a, b, l) is an unmatched true edge is a
/// reversal: it costs 1 SHD, is neither a plain FP nor a plain FN, but counts
/// toward FDR. 0/0 ratios are reported as 0.
EvalReport evaluate(const TemporalCausalGraph& truth, const DiscoveredGraph& pred,
                    MatchMode mode = MatchMode::lag_resolved);
EvalReport evaluate(const DiscoveredGraph& truth, const DiscoveredGraph& pred,
                    MatchMode mode = MatchMode::lag_resolved);

inline constexpr std::size_t kOracleMaxUniverse = 18;

/// Minimum number of single-edge additions, deletions and reversals turning
/// pred into truth, by breadth-first search over edge subsets. Only for small
/// inputs; throws OracleCapacityError beyond kOracleMaxUniverse candidate edges.
std::size_t shd_oracle(const DiscoveredGraph& truth, const DiscoveredGraph& pred);

// JSON surfaces

std::string discovered_graph_to_json(const DiscoveredGraph& graph, std::string_view algorithm = {});

/// Accepts the discovered-graph schema; extra fields (for instance "coeff" in a
/// ground-truth file) are ignored, which lets third-party outputs that mirror
/// the ground-truth schema be scored directly.
DiscoveredGraph discovered_graph_from_json(std::string_view text);

std::string eval_report_to_json(const EvalReport& report, std::string_view variant_id, std::string_view algorithm);
EvalReport eval_report_from_json(std::string_view text);

}  // namespace lagbench
