#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lagbench/discover.hpp"
#include "lagbench/metrics.hpp"
#include "lagbench/variants.hpp"

namespace lagbench {

inline const std::vector<std::size_t> kSupportedSizes{500, 1000, 3000, 5000};
inline const std::vector<std::size_t> kSupportedVariables{4, 6, 8};
inline const std::vector<std::size_t> kSupportedLags{2, 3, 4};

/// Name of the built-in lag-expanded PC baseline. Any other algorithm id is
/// looked up as imported results under import_dir/<algorithm>/<dataset_id>.json.
inline constexpr std::string_view kBuiltinPc = "pc";

struct RunManifest {
    std::uint64_t master_seed = 0;
    std::vector<VariantSpec> variants;
    std::vector<std::size_t> sizes;
    std::vector<GraphShape> graph_configs;
    std::vector<std::string> algorithms;
    std::filesystem::path output_dir = "lagbench-out";
    std::optional<std::filesystem::path> import_dir;
    NoiseOverride noise_override = NoiseOverride::none;
    bool allow_custom_sizes = false;
    double pc_alpha = 0.05;
    std::size_t pc_max_condition_set = 3;

    void validate() const;
    std::filesystem::path imports() const { return import_dir ? *import_dir : output_dir / "imports"; }
};

/// Parses the manifest JSON; `base_dir` resolves relative paths inside it.
RunManifest parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir = {});
RunManifest load_manifest(const std::filesystem::path& path);
std::string manifest_to_json(const RunManifest& manifest);

struct DatasetEntry {
    std::string dataset_id;
    std::string variant_id;
    GraphShape shape;
    std::size_t size = 0;
    std::filesystem::path dir;
};

/// One entry per (variant, size, graph config), in manifest order.
std::vector<DatasetEntry> suite_entries(const RunManifest& manifest);

/// Writes data.csv, complete.csv, mask.csv (masked variants), truth.json and
/// provenance.json under output_dir/datasets/<dataset_id>/. Overwrites
/// previous output identically. On failure throws DataError describing how many
/// datasets were written and which failed.
std::vector<DatasetEntry> generate_suite(const RunManifest& manifest, unsigned threads = 0);

/// Writes the files of one materialized dataset into `dir`.
void write_dataset(const MaterializedDataset& dataset, const std::filesystem::path& dir);

std::string provenance_json(const MaterializedDataset& dataset, std::string_view truth_digest);

struct ResultCell {
    std::optional<EvalReport> report;
    std::string status;  // "ok", "missing" or "error: ..."
};

struct ResultRow {
    std::string dataset_id;
    std::string variant_id;
    GraphShape shape;
    std::size_t size = 0;
    std::vector<ResultCell> cells;  // parallel to ResultsTable::algorithms
};

struct ResultsTable {
    std::vector<std::string> algorithms;
    std::vector<ResultRow> rows;
};

/// Rows = datasets, then a (tpr, fdr, shd, status) column group per algorithm.
/// Missing results print as "--".
std::string results_to_csv(const ResultsTable& table);
ResultsTable results_from_csv(std::string_view text);

struct BenchmarkOptions {
    unsigned threads = 0;  // 0 = hardware concurrency
    /// When false the built-in baseline is not rerun; its stored
    /// results/pc/<dataset_id>.graph.json predictions are scored instead.
    bool run_discovery = true;
};

/// Runs every configured algorithm on every dataset of the manifest,
/// generating datasets that are not on disk yet. Per-dataset reports go to
/// output_dir/results/<algorithm>/<dataset_id>.json and the aggregate table to
/// output_dir/results/table.csv. A failure on one dataset is recorded in its
/// status cell.
ResultsTable run_benchmark(const RunManifest& manifest, std::vector<std::string>* warnings = nullptr,
                           const BenchmarkOptions& options = {});

/// Runs the built-in baseline on every dataset and writes
/// output_dir/results/pc/<dataset_id>.graph.json. Returns the number written;
/// failures are appended to `warnings`.
std::size_t discover_suite(const RunManifest& manifest, std::vector<std::string>* warnings = nullptr,
                           unsigned threads = 0);

/// Loads data.csv (plus mask.csv when present) from a dataset directory.
Dataset load_dataset_dir(const std::filesystem::path& dir);

/// SVG grouped bar charts tpr.svg, fdr.svg, shd.svg (group per row, bar per
/// algorithm) plus series/<dataset_id>.svg line plots. Returns written paths.
std::vector<std::filesystem::path> emit_plots(const ResultsTable& results, const std::vector<DatasetEntry>& datasets,
                                              const std::filesystem::path& out_dir,
                                              std::vector<std::string>* warnings = nullptr);

std::string series_svg(const Dataset& data, std::string_view title);

}  // namespace lagbench
