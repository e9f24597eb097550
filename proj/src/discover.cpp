#include "lagbench/discover.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lagbench/errors.hpp"

namespace lagbench {

namespace {

constexpr double kMinRcond = 1e-12;

std::string column_name(std::size_t column, std::size_t num_variables) {
    const std::size_t var = column % num_variables;
    const std::size_t lag = column / num_variables;
    return "X" + std::to_string(var) + (lag == 0 ? "(t)" : "(t-" + std::to_string(lag) + ")");
}

// Advances `pick` (sorted indices into a pool of `pool_size`) to the next
// k-combination in lexicographic order; false once exhausted.
bool next_combination(std::vector<std::size_t>& pick, std::size_t pool_size) {
    const std::size_t k = pick.size();
    for (std::size_t i = k; i-- > 0;) {
        if (pick[i] < pool_size - k + i) {
            ++pick[i];
            for (std::size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

void PcConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("PC alpha must lie in (0, 1)");
    if (max_lag < 1) throw ConfigError("PC max_lag must be >= 1");
}

DesignMatrix lag_expand(const Dataset& data, std::size_t max_lag) {
    const std::size_t rows = data.rows();
    const std::size_t n = data.cols();
    if (rows < max_lag + 2) {
        throw InsufficientDataError("lag expansion needs at least max_lag + 2 = " + std::to_string(max_lag + 2) +
                                    " rows, dataset has " + std::to_string(rows));
    }
    DesignMatrix out;
    out.num_variables = n;
    out.max_lag = max_lag;
    for (std::size_t t = max_lag; t < rows; ++t) {
        bool complete = true;
        for (std::size_t lag = 0; lag <= max_lag && complete; ++lag) {
            for (std::size_t j = 0; j < n && complete; ++j) complete = data.observed(t - lag, j);
        }
        if (complete) out.source_rows.push_back(t);
    }
    if (out.source_rows.size() < 2) {
        throw InsufficientDataError("only " + std::to_string(out.source_rows.size()) +
                                    " complete rows left after listwise deletion");
    }
    const std::size_t width = n * (max_lag + 1);
    out.data.resize(static_cast<Eigen::Index>(out.source_rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < out.source_rows.size(); ++r) {
        const std::size_t t = out.source_rows[r];
        for (std::size_t lag = 0; lag <= max_lag; ++lag) {
            for (std::size_t j = 0; j < n; ++j) {
                out.data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(out.column(j, lag))) =
                    data.values(static_cast<Eigen::Index>(t - lag), static_cast<Eigen::Index>(j));
            }
        }
    }
    return out;
}

double fisher_z_test(double r, std::size_t n_eff, std::size_t k) {
    if (n_eff <= k + 3) {
        throw InsufficientDataError("Fisher z-test needs n_eff > k + 3 (n_eff = " + std::to_string(n_eff) +
                                    ", k = " + std::to_string(k) + ")");
    }
    if (std::isnan(r)) throw DegeneracyError("partial correlation is NaN");
    if (std::abs(r) >= 1.0) return 0.0;
    const double z = std::sqrt(static_cast<double>(n_eff - k - 3)) * std::atanh(r);
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& data) {
    const Eigen::MatrixXd centered = data.rowwise() - data.colwise().mean();
    Eigen::MatrixXd cov = centered.transpose() * centered;
    const Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
    for (Eigen::Index c = 0; c < sd.size(); ++c) {
        if (!(sd(c) > 0.0)) throw DegeneracyError("column " + std::to_string(c) + " has zero variance");
    }
    const Eigen::VectorXd inv = sd.cwiseInverse();
    return inv.asDiagonal() * cov * inv.asDiagonal();
}

double partial_correlation(const Eigen::MatrixXd& corr, std::size_t x, std::size_t y,
                           std::span<const std::size_t> given) {
    if (given.empty()) return corr(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
    std::vector<std::size_t> cols{x, y};
    cols.insert(cols.end(), given.begin(), given.end());
    const auto m = static_cast<Eigen::Index>(cols.size());
    Eigen::MatrixXd sub(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = 0; b < m; ++b) {
            sub(a, b) = corr(static_cast<Eigen::Index>(cols[a]), static_cast<Eigen::Index>(cols[b]));
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(sub);
    if (llt.info() != Eigen::Success || llt.rcond() < kMinRcond) {
        std::string names;
        for (std::size_t c : cols) names += (names.empty() ? "" : ", ") + std::to_string(c);
        throw DegeneracyError("singular correlation submatrix over columns {" + names + "}");
    }
    const Eigen::MatrixXd precision = llt.solve(Eigen::MatrixXd::Identity(m, m));
    const double r = -precision(0, 1) / std::sqrt(precision(0, 0) * precision(1, 1));
    return std::clamp(r, -1.0, 1.0);
}

DiscoveredGraph pc_discover(const Dataset& data, const PcConfig& cfg) {
    cfg.validate();
    const DesignMatrix design = lag_expand(data, cfg.max_lag);
    const std::size_t n = design.num_variables;
    const std::size_t n_eff = design.rows();

    Eigen::MatrixXd corr;
    try {
        corr = correlation_matrix(design.data);
    } catch (const DegeneracyError&) {
        for (Eigen::Index c = 0; c < design.data.cols(); ++c) {
            const auto col = design.data.col(c);
            if ((col.array() == col(0)).all()) {
                throw DegeneracyError("constant design column " + column_name(static_cast<std::size_t>(c), n));
            }
        }
        throw;
    }

    DiscoveredGraph out;
    out.num_variables = n;
    out.max_lag = cfg.max_lag;

    for (std::size_t dst = 0; dst < n; ++dst) {
        const std::size_t target = design.column(dst, 0);
        std::vector<std::size_t> parents;
        for (std::size_t lag = 1; lag <= cfg.max_lag; ++lag) {
            for (std::size_t src = 0; src < n; ++src) parents.push_back(design.column(src, lag));
        }

        for (std::size_t level = 0; level <= cfg.max_condition_set; ++level) {
            if (parents.size() < level + 1) break;
            if (n_eff <= level + 3) {
                throw InsufficientDataError("too few complete rows (" + std::to_string(n_eff) +
                                            ") for conditioning sets of size " + std::to_string(level));
            }
            // PC-stable: every test at this level conditions on the level's snapshot.
            const std::vector<std::size_t> snapshot = parents;
            std::vector<std::size_t> kept;
            for (std::size_t candidate : snapshot) {
                std::vector<std::size_t> others;
                for (std::size_t c : snapshot) {
                    if (c != candidate) others.push_back(c);
                }
                bool independent = false;
                std::vector<std::size_t> pick(level);
                for (std::size_t i = 0; i < level; ++i) pick[i] = i;
                std::vector<std::size_t> given(level);
                do {
                    for (std::size_t i = 0; i < level; ++i) given[i] = others[pick[i]];
                    double r = 0.0;
                    try {
                        r = partial_correlation(corr, target, candidate, given);
                    } catch (const DegeneracyError&) {
                        std::string names = column_name(target, n) + ", " + column_name(candidate, n);
                        for (std::size_t c : given) names += ", " + column_name(c, n);
                        throw DegeneracyError("singular correlation submatrix over {" + names + "}");
                    }
                    if (fisher_z_test(r, n_eff, level) > cfg.alpha) {
                        independent = true;
                        break;
                    }
                } while (level > 0 && next_combination(pick, others.size()));
                if (!independent) kept.push_back(candidate);
            }
            parents = std::move(kept);
        }

        for (std::size_t c : parents) {
            out.edges.insert({c % n, dst, c / n});
        }
    }
    return out;
}

}  // namespace lagbench
