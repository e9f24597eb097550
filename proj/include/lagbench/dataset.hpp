#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lagbench {

using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct Provenance {
    std::string variant_id;
    std::uint64_t seed = 0;
    std::uint64_t graph_seed = 0;
    std::string config_digest;
};

/// Multivariate series. Values under a false mask cell are kept (the complete
/// data stays recoverable); the mask decides what counts as observed.
struct Dataset {
    std::vector<double> timestamps;
    Eigen::MatrixXd values;          // rows = observations, cols = variables
    std::optional<BoolMatrix> mask;  // true = observed
    std::vector<std::size_t> grid_index;  // source row on the simulation grid
    Provenance meta;

    std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }
    bool observed(std::size_t row, std::size_t col) const {
        return !mask || (*mask)(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }
    double missing_fraction() const;

    /// Throws DataError if timestamps are not strictly increasing, any observed
    /// value is non-finite or the shapes disagree.
    void validate() const;
};

}  // namespace lagbench
