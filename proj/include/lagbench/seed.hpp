#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace lagbench {

using Rng = std::mt19937_64;

/// 64-bit FNV-1a over raw bytes. Stable across platforms and runs.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

std::uint64_t splitmix64(std::uint64_t x);

/// Derives an independent stream seed from a parent seed and a label path,
/// e.g. derive_seed(master, "A1", "500", "4x2").
template <typename... Labels>
std::uint64_t derive_seed(std::uint64_t parent, const Labels&... labels) {
    std::uint64_t h = splitmix64(parent);
    ((h = splitmix64(fnv1a64(std::string_view(labels), h) ^ 0x9e3779b97f4a7c15ULL)), ...);
    return h;
}

std::string to_hex(std::uint64_t value);

}  // namespace lagbench
