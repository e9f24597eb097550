#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "lagbench/dataset.hpp"

namespace lagbench {

enum class SamplingKind { regular, irregular_exponential };

struct SamplingScheme {
    SamplingKind kind = SamplingKind::regular;
    double rate = 1.0;  // arrivals per time unit, irregular only

    void validate() const;
};

enum class MissingKind { none, mcar, block, combined };
enum class BlockTrigger { mar, nmar };

std::string_view to_string(SamplingKind kind);
std::string_view to_string(MissingKind kind);
std::string_view to_string(BlockTrigger trigger);

struct BlockSpec {
    double mean_length = 10.0;
    BlockTrigger trigger = BlockTrigger::mar;
    double threshold = 0.0;
    double rate = 0.05;
};

struct MissingnessSpec {
    MissingKind kind = MissingKind::none;
    double mcar_rate = 0.0;
    std::optional<BlockSpec> block;

    void validate() const;
};

/// Subsamples a unit-grid series at exponential(rate) arrival times. Each
/// arrival takes the nearest grid row after the previously taken one; the
/// returned timestamps are the real-valued arrival times. Regular schemes
/// return the input unchanged. Throws InsufficientDataError when fewer than
/// max_lag + 2 rows survive.
Dataset resample_irregular(const Dataset& data, const SamplingScheme& scheme, std::uint64_t seed,
                           std::size_t max_lag);

/// Masks each cell independently with probability `rate`, on top of any
/// existing mask.
Dataset apply_mcar(const Dataset& data, double rate, std::uint64_t seed);

/// Value-triggered contiguous blocks. MAR gates a block start for variable j on
/// variable (j + 1) mod N; NMAR on variable j itself. Block lengths are
/// geometric with the configured mean.
Dataset apply_block(const Dataset& data, const MissingnessSpec& spec, std::uint64_t seed);

/// Dispatch on spec.kind; `combined` applies blocks first, then MCAR.
Dataset apply_missingness(const Dataset& data, const MissingnessSpec& spec, std::uint64_t seed);

}  // namespace lagbench
