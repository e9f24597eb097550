#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lagbench/dataset.hpp"
#include "lagbench/metrics.hpp"

namespace lagbench {

struct PcConfig {
    double alpha = 0.05;
    std::size_t max_condition_set = 3;
    std::size_t max_lag = 2;

    void validate() const;
};

/// Lag-expanded design: column lag * num_variables + var holds x_var(t - lag).
struct DesignMatrix {
    Eigen::MatrixXd data;
    std::size_t num_variables = 0;
    std::size_t max_lag = 0;
    std::vector<std::size_t> source_rows;  // dataset row supplying lag 0

    std::size_t rows() const { return static_cast<std::size_t>(data.rows()); }
    std::size_t column(std::size_t var, std::size_t lag) const { return lag * num_variables + var; }
};

/// Rows with any masked cell among their (max_lag + 1) * N entries are dropped.
/// Throws InsufficientDataError when the dataset has fewer than max_lag + 2 rows
/// or fewer than 2 complete rows remain.
DesignMatrix lag_expand(const Dataset& data, std::size_t max_lag);

/// Two-sided p-value of H0: partial correlation = 0, via the Fisher z-transform
/// z = sqrt(n_eff - k - 3) * atanh(r). Throws InsufficientDataError unless
/// n_eff > k + 3.
double fisher_z_test(double r, std::size_t n_eff, std::size_t k);

/// Partial correlation of columns x and y of a correlation matrix given the
/// columns in `given`. Throws DegeneracyError on a singular submatrix.
double partial_correlation(const Eigen::MatrixXd& corr, std::size_t x, std::size_t y,
                           std::span<const std::size_t> given);

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& data);

/// Lag-expanded PC skeleton search. Candidates are all lagged columns; each
/// time-t column keeps the candidates that no conditioning set (drawn from its
/// other remaining candidates, levels 0..max_condition_set, PC-stable order)
/// renders independent at level alpha. No RNG.
DiscoveredGraph pc_discover(const Dataset& data, const PcConfig& cfg);

}  // namespace lagbench
