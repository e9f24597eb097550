#include "lagbench/dataset.hpp"

#include <cmath>

#include "lagbench/errors.hpp"

namespace lagbench {

double Dataset::missing_fraction() const {
    if (!mask || mask->size() == 0) return 0.0;
    return 1.0 - static_cast<double>(mask->count()) / static_cast<double>(mask->size());
}

void Dataset::validate() const {
    if (timestamps.size() != rows()) {
        throw DataError("dataset has " + std::to_string(timestamps.size()) + " timestamps for " +
                        std::to_string(rows()) + " rows");
    }
    if (!grid_index.empty() && grid_index.size() != rows()) {
        throw DataError("dataset grid index length does not match row count");
    }
    if (mask && (mask->rows() != values.rows() || mask->cols() != values.cols())) {
        throw DataError("dataset mask shape does not match values");
    }
    for (std::size_t t = 1; t < timestamps.size(); ++t) {
        if (!(timestamps[t] > timestamps[t - 1])) {
            throw DataError("timestamps not strictly increasing at row " + std::to_string(t));
        }
    }
    for (std::size_t t = 0; t < rows(); ++t) {
        for (std::size_t j = 0; j < cols(); ++j) {
            if (observed(t, j) && !std::isfinite(values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)))) {
                throw DataError("non-finite observed value at row " + std::to_string(t) + ", column " +
                                std::to_string(j));
            }
        }
    }
}

}  // namespace lagbench
