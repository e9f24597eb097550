#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lagbench/csv.hpp"
#include "lagbench/discover.hpp"
#include "lagbench/errors.hpp"
#include "lagbench/metrics.hpp"
#include "lagbench/suite.hpp"

namespace fs = std::filesystem;
using namespace lagbench;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct ManifestArgs {
    std::string manifest;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::vector<std::string> variants;
    std::vector<std::size_t> sizes;
    std::vector<std::string> configs;  // "4x2"
    unsigned threads = 0;

    void add_to(CLI::App* cmd, bool with_grid) {
        cmd->add_option("--manifest", manifest, "Run manifest (JSON)");
        cmd->add_option("--seed", seed, "Override the manifest master seed");
        cmd->add_option("--out", out, "Override the output directory");
        cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
        if (with_grid) {
            cmd->add_option("--variants", variants, "Variant ids when no manifest is given (or 'all')")->delimiter(',');
            cmd->add_option("--sizes", sizes, "Sample sizes when no manifest is given")->delimiter(',');
            cmd->add_option("--configs", configs, "Graph configs VARSxLAG when no manifest is given")->delimiter(',');
        }
    }

    bool has_grid() const { return !variants.empty() || !sizes.empty() || !configs.empty(); }

    RunManifest resolve(const std::vector<std::string>& algorithms = {}) const {
        RunManifest m;
        if (!manifest.empty()) {
            m = load_manifest(manifest);
        } else if (has_grid()) {
            std::vector<std::string> ids = variants.empty() ? std::vector<std::string>{"A1"} : variants;
            if (ids.size() == 1 && ids[0] == "all") ids = variant_ids();
            for (const auto& id : ids) m.variants.push_back(resolve_variant(id));
            m.sizes = sizes.empty() ? std::vector<std::size_t>{500} : sizes;
            for (const auto& c : configs.empty() ? std::vector<std::string>{"4x2"} : configs) {
                const auto x = c.find('x');
                if (x == std::string::npos) throw ConfigError("graph config '" + c + "' must look like 4x2");
                GraphShape s;
                s.num_variables = std::stoul(c.substr(0, x));
                s.max_lag = std::stoul(c.substr(x + 1));
                m.graph_configs.push_back(s);
            }
            m.algorithms = algorithms;
        } else {
            throw ConfigError("pass --manifest or a grid (--variants/--sizes/--configs)");
        }
        if (seed) m.master_seed = *seed;
        if (!out.empty()) m.output_dir = out;
        m.validate();
        return m;
    }
};

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

int run_generate(const ManifestArgs& args) {
    const RunManifest m = args.resolve();
    const auto entries = generate_suite(m, args.threads);
    write_text_file(m.output_dir / "manifest.json", manifest_to_json(m));
    std::cout << "generated " << entries.size() << " datasets under " << (m.output_dir / "datasets").string() << '\n';
    return 0;
}

struct DiscoverArgs {
    std::string data;
    std::string mask;
    std::size_t max_lag = 2;
    double alpha = 0.05;
    std::size_t max_condition_set = 3;
};

int run_discover(const ManifestArgs& margs, const DiscoverArgs& args) {
    if (args.data.empty()) {
        RunManifest m = margs.resolve({std::string(kBuiltinPc)});
        std::vector<std::string> warnings;
        const std::size_t written = discover_suite(m, &warnings, margs.threads);
        print_warnings(warnings);
        std::cout << "wrote " << written << " discovered graphs under "
                  << (m.output_dir / "results" / std::string(kBuiltinPc)).string() << '\n';
        return warnings.empty() ? 0 : kExitRuntime;
    }
    std::optional<std::string> mask;
    if (!args.mask.empty()) mask = read_text_file(args.mask);
    const std::string text = read_text_file(args.data);
    const Dataset data = dataset_from_csv(text, mask ? std::optional<std::string_view>(*mask) : std::nullopt);
    const DiscoveredGraph g = pc_discover(data, PcConfig{args.alpha, args.max_condition_set, args.max_lag});
    const std::string json = discovered_graph_to_json(g, kBuiltinPc);
    if (margs.out.empty()) {
        std::cout << json;
    } else {
        write_text_file(margs.out, json);
    }
    return 0;
}

struct EvaluateArgs {
    std::string truth;
    std::string pred;
    std::string algorithm = "imported";
    bool summary = false;
};

void print_table(const ResultsTable& table) {
    std::cout << results_to_csv(table);
}

int run_evaluate(const ManifestArgs& margs, const EvaluateArgs& args, const std::vector<std::string>& algorithms) {
    if (args.truth.empty() && args.pred.empty()) {
        RunManifest m = margs.resolve(algorithms);
        if (!algorithms.empty()) m.algorithms = algorithms;
        std::vector<std::string> warnings;
        BenchmarkOptions opts;
        opts.threads = margs.threads;
        opts.run_discovery = false;
        const ResultsTable table = run_benchmark(m, &warnings, opts);
        print_warnings(warnings);
        print_table(table);
        return 0;
    }
    if (args.truth.empty() || args.pred.empty()) throw ConfigError("evaluate needs both --truth and --pred");
    const GroundTruth truth = ground_truth_from_json(read_text_file(args.truth));
    const DiscoveredGraph pred = discovered_graph_from_json(read_text_file(args.pred));
    const EvalReport report = evaluate(truth.graph, pred, args.summary ? MatchMode::summary : MatchMode::lag_resolved);
    const std::string json = eval_report_to_json(report, truth.variant_id, args.algorithm);
    if (margs.out.empty()) {
        std::cout << json;
    } else {
        write_text_file(margs.out, json);
    }
    return 0;
}

int run_benchmark_cmd(const ManifestArgs& margs, const std::vector<std::string>& algorithms) {
    RunManifest m = margs.resolve(algorithms.empty() ? std::vector<std::string>{std::string(kBuiltinPc)} : algorithms);
    if (!algorithms.empty()) m.algorithms = algorithms;
    if (!m.algorithms.empty()) generate_suite(m, margs.threads);
    write_text_file(m.output_dir / "manifest.json", manifest_to_json(m));
    std::vector<std::string> warnings;
    BenchmarkOptions opts;
    opts.threads = margs.threads;
    const ResultsTable table = run_benchmark(m, &warnings, opts);
    print_warnings(warnings);
    print_table(table);
    return 0;
}

int run_plot(const ManifestArgs& margs, const std::string& results_path) {
    std::vector<std::string> warnings;
    std::vector<fs::path> written;
    if (!results_path.empty()) {
        const ResultsTable table = results_from_csv(read_text_file(results_path));
        const fs::path out = margs.out.empty() ? fs::path(results_path).parent_path() / "plots" : fs::path(margs.out);
        written = emit_plots(table, {}, out, &warnings);
    } else {
        const RunManifest m = margs.resolve();
        const fs::path table_path = m.output_dir / "results" / "table.csv";
        if (!fs::exists(table_path)) throw DataError("no results table at " + table_path.string() + "; run benchmark first");
        const ResultsTable table = results_from_csv(read_text_file(table_path));
        written = emit_plots(table, suite_entries(m), m.output_dir / "plots", &warnings);
    }
    print_warnings(warnings);
    for (const auto& p : written) std::cout << p.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic temporal causal-discovery benchmark generator and scorer"};
    app.require_subcommand(1);

    ManifestArgs gen_args, disc_margs, eval_margs, bench_args, plot_args;
    DiscoverArgs disc_args;
    EvaluateArgs eval_args;
    std::vector<std::string> eval_algorithms, bench_algorithms;
    std::string plot_results;

    auto* generate = app.add_subcommand("generate", "Write datasets and ground truths for a manifest");
    gen_args.add_to(generate, true);

    auto* discover = app.add_subcommand("discover", "Run the lag-expanded PC baseline");
    disc_margs.add_to(discover, true);
    discover->add_option("--data", disc_args.data, "Single data CSV instead of a manifest");
    discover->add_option("--mask", disc_args.mask, "Mask CSV for --data");
    discover->add_option("--max-lag", disc_args.max_lag, "Maximum lag for --data");
    discover->add_option("--alpha", disc_args.alpha, "Significance level for --data");
    discover->add_option("--max-cond", disc_args.max_condition_set, "Largest conditioning set for --data");

    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score discovered graphs against ground truth");
    eval_margs.add_to(evaluate_cmd, true);
    evaluate_cmd->add_option("--truth", eval_args.truth, "Ground-truth JSON");
    evaluate_cmd->add_option("--pred", eval_args.pred, "Discovered-graph JSON");
    evaluate_cmd->add_option("--algorithm", eval_args.algorithm, "Algorithm name recorded in the report");
    evaluate_cmd->add_flag("--summary", eval_args.summary, "Lag-collapsed matching instead of lag-resolved");
    evaluate_cmd->add_option("--algorithms", eval_algorithms, "Override manifest algorithms")->delimiter(',');

    auto* benchmark = app.add_subcommand("benchmark", "Generate, discover, score and aggregate");
    bench_args.add_to(benchmark, true);
    benchmark->add_option("--algorithms", bench_algorithms, "Override manifest algorithms")->delimiter(',');

    auto* plot = app.add_subcommand("plot", "Write SVG bar charts and series plots");
    plot_args.add_to(plot, true);
    plot->add_option("--results", plot_results, "Results table CSV instead of a manifest");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*generate) return run_generate(gen_args);
        if (*discover) return run_discover(disc_margs, disc_args);
        if (*evaluate_cmd) return run_evaluate(eval_margs, eval_args, eval_algorithms);
        if (*benchmark) return run_benchmark_cmd(bench_args, bench_algorithms);
        if (*plot) return run_plot(plot_args, plot_results);
    } catch (const ConfigError& ex) {
        std::cerr << "configuration error: " << ex.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
