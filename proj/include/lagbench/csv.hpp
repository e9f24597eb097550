#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "lagbench/dataset.hpp"

namespace lagbench {

enum class CsvView {
    observed,  // masked cells left empty
    complete,  // every simulated value
    mask,      // 1 = observed, 0 = missing
};

/// Header `time,X0,...,X{N-1}`; reals with 17 significant digits.
std::string dataset_to_csv(const Dataset& data, CsvView view);

/// Parses a data CSV. Empty cells become unobserved (value 0). A mask CSV, when
/// given, is authoritative for which cells are observed.
Dataset dataset_from_csv(std::string_view data_csv, std::optional<std::string_view> mask_csv = std::nullopt);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace lagbench
