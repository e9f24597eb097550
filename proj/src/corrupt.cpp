#include "lagbench/corrupt.hpp"

#include <cmath>
#include <random>
#include <string>

#include "lagbench/errors.hpp"
#include "lagbench/seed.hpp"

namespace lagbench {

namespace {

BoolMatrix observed_mask(const Dataset& data) {
    if (data.mask) return *data.mask;
    return BoolMatrix::Constant(data.values.rows(), data.values.cols(), true);
}

}  // namespace

std::string_view to_string(SamplingKind kind) {
    return kind == SamplingKind::regular ? "regular" : "irregular_exponential";
}

std::string_view to_string(MissingKind kind) {
    switch (kind) {
        case MissingKind::none: return "none";
        case MissingKind::mcar: return "mcar";
        case MissingKind::block: return "block";
        case MissingKind::combined: return "combined";
    }
    return "?";
}

std::string_view to_string(BlockTrigger trigger) { return trigger == BlockTrigger::mar ? "mar" : "nmar"; }

void SamplingScheme::validate() const {
    if (kind == SamplingKind::irregular_exponential && !(rate > 0.0 && std::isfinite(rate))) {
        throw ConfigError("irregular sampling rate must be positive");
    }
}

void MissingnessSpec::validate() const {
    const bool wants_mcar = kind == MissingKind::mcar || kind == MissingKind::combined;
    const bool wants_block = kind == MissingKind::block || kind == MissingKind::combined;
    if (wants_mcar && !(mcar_rate >= 0.0 && mcar_rate <= 0.5)) {
        throw ConfigError("mcar_rate must lie in [0, 0.5]");
    }
    if (!wants_mcar && mcar_rate != 0.0) throw ConfigError("mcar_rate set for a missingness kind without MCAR");
    if (wants_block != block.has_value()) {
        throw ConfigError(wants_block ? "block parameters required for block/combined missingness"
                                      : "block parameters given for a missingness kind without blocks");
    }
    if (block) {
        if (!(block->mean_length >= 1.0)) throw ConfigError("block mean_length must be >= 1");
        if (!(block->rate >= 0.0 && block->rate < 1.0)) throw ConfigError("block rate must lie in [0, 1)");
        if (std::isnan(block->threshold)) throw ConfigError("block threshold must not be NaN");
    }
}

Dataset resample_irregular(const Dataset& data, const SamplingScheme& scheme, std::uint64_t seed,
                           std::size_t max_lag) {
    scheme.validate();
    if (scheme.kind == SamplingKind::regular) return data;

    const std::size_t rows = data.rows();
    Rng rng(seed);
    std::exponential_distribution<double> wait(scheme.rate);

    std::vector<std::size_t> taken;
    std::vector<double> arrivals;
    const double span = rows == 0 ? 0.0 : static_cast<double>(rows - 1);
    double clock = 0.0;
    std::size_t next_free = 0;
    while (true) {
        clock += wait(rng);
        if (clock > span) break;
        const auto nearest = static_cast<std::size_t>(std::llround(clock));
        const std::size_t row = std::max(nearest, next_free);
        if (row >= rows) break;
        taken.push_back(row);
        arrivals.push_back(clock);
        next_free = row + 1;
    }
    if (taken.size() < max_lag + 2) {
        throw InsufficientDataError("irregular sampling kept " + std::to_string(taken.size()) +
                                    " rows; need at least max_lag + 2 = " + std::to_string(max_lag + 2));
    }

    Dataset out;
    out.meta = data.meta;
    out.timestamps = std::move(arrivals);
    out.values.resize(static_cast<Eigen::Index>(taken.size()), data.values.cols());
    if (data.mask) out.mask = BoolMatrix(out.values.rows(), out.values.cols());
    out.grid_index.resize(taken.size());
    for (std::size_t i = 0; i < taken.size(); ++i) {
        const auto src = static_cast<Eigen::Index>(taken[i]);
        out.values.row(static_cast<Eigen::Index>(i)) = data.values.row(src);
        if (data.mask) out.mask->row(static_cast<Eigen::Index>(i)) = data.mask->row(src);
        out.grid_index[i] = data.grid_index.empty() ? taken[i] : data.grid_index[taken[i]];
    }
    return out;
}

Dataset apply_mcar(const Dataset& data, double rate, std::uint64_t seed) {
    if (!(rate >= 0.0 && rate <= 0.5)) throw ConfigError("MCAR rate must lie in [0, 0.5]");
    Dataset out = data;
    BoolMatrix mask = observed_mask(data);
    Rng rng(seed);
    std::bernoulli_distribution drop(rate);
    for (Eigen::Index t = 0; t < mask.rows(); ++t) {
        for (Eigen::Index j = 0; j < mask.cols(); ++j) {
            if (drop(rng)) mask(t, j) = false;
        }
    }
    out.mask = std::move(mask);
    return out;
}

Dataset apply_block(const Dataset& data, const MissingnessSpec& spec, std::uint64_t seed) {
    if (spec.kind != MissingKind::block && spec.kind != MissingKind::combined) {
        throw ConfigError("apply_block needs block or combined missingness");
    }
    if (!spec.block || !(spec.block->mean_length >= 1.0)) {
        throw ConfigError("block missingness needs mean_length >= 1");
    }
    spec.validate();
    const BlockSpec& b = *spec.block;

    Dataset out = data;
    const BoolMatrix before = observed_mask(data);
    BoolMatrix mask = before;
    const Eigen::Index rows = mask.rows();
    const Eigen::Index cols = mask.cols();

    std::geometric_distribution<long long> extra_length(1.0 / b.mean_length);
    for (Eigen::Index j = 0; j < cols; ++j) {
        Rng rng(derive_seed(seed, "block", std::to_string(j)));
        std::bernoulli_distribution start(b.rate);
        const Eigen::Index trigger_col = b.trigger == BlockTrigger::mar ? (j + 1) % cols : j;
        Eigen::Index t = 0;
        while (t < rows) {
            // MAR only sees trigger values that were observed before this pass.
            const bool trigger_visible = b.trigger == BlockTrigger::nmar || before(t, trigger_col);
            const bool fires = trigger_visible && data.values(t, trigger_col) > b.threshold;
            if (fires && start(rng)) {
                // geometric_distribution counts failures; +1 gives support {1, 2, ...}
                const Eigen::Index length = 1 + static_cast<Eigen::Index>(extra_length(rng));
                const Eigen::Index end = std::min(rows, t + length);
                for (Eigen::Index s = t; s < end; ++s) mask(s, j) = false;
                t = end;
            } else {
                ++t;
            }
        }
    }
    out.mask = std::move(mask);
    return out;
}

Dataset apply_missingness(const Dataset& data, const MissingnessSpec& spec, std::uint64_t seed) {
    spec.validate();
    switch (spec.kind) {
        case MissingKind::none: return data;
        case MissingKind::mcar: return apply_mcar(data, spec.mcar_rate, derive_seed(seed, "mcar"));
        case MissingKind::block: return apply_block(data, spec, derive_seed(seed, "block"));
        case MissingKind::combined:
            return apply_mcar(apply_block(data, spec, derive_seed(seed, "block")), spec.mcar_rate,
                              derive_seed(seed, "mcar"));
    }
    return data;
}

}  // namespace lagbench
