#include "lagbench/suite.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include <json.hpp>

#include "lagbench/csv.hpp"
#include "lagbench/errors.hpp"
#include "parallel.hpp"

namespace lagbench {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::string_view kGeneratorVersion = "lagbench 1.0";

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string one_line(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s;
}

std::string describe(const std::exception_ptr& error) {
    try {
        std::rethrow_exception(error);
    } catch (const std::exception& ex) {
        return ex.what();
    } catch (...) {
        return "unknown error";
    }
}

bool contains(const std::vector<std::size_t>& values, std::size_t v) {
    return std::find(values.begin(), values.end(), v) != values.end();
}

GraphShape parse_shape(const nlohmann::json& j) {
    GraphShape s;
    if (j.is_array()) {
        if (j.size() < 2 || j.size() > 3) throw ConfigError("graph config arrays are [vars, lag] or [vars, lag, edges]");
        s.num_variables = j[0].get<std::size_t>();
        s.max_lag = j[1].get<std::size_t>();
        if (j.size() == 3) s.num_edges = j[2].get<std::size_t>();
        return s;
    }
    for (const auto& [key, _] : j.items()) {
        if (key != "vars" && key != "lag" && key != "edges") throw ConfigError("unknown graph config key '" + key + "'");
    }
    s.num_variables = j.at("vars").get<std::size_t>();
    s.max_lag = j.at("lag").get<std::size_t>();
    s.num_edges = j.value("edges", std::size_t{0});
    return s;
}

}  // namespace

void RunManifest::validate() const {
    if (variants.empty()) throw ConfigError("manifest lists no variants");
    if (sizes.empty()) throw ConfigError("manifest lists no sample sizes");
    if (graph_configs.empty()) throw ConfigError("manifest lists no graph configs");
    for (std::size_t n : sizes) {
        if (!allow_custom_sizes && !contains(kSupportedSizes, n)) {
            throw ConfigError("sample size " + std::to_string(n) +
                              " not in {500, 1000, 3000, 5000}; set allow_custom_sizes to override");
        }
    }
    for (const auto& shape : graph_configs) {
        if (!allow_custom_sizes &&
            (!contains(kSupportedVariables, shape.num_variables) || !contains(kSupportedLags, shape.max_lag))) {
            throw ConfigError("graph config " + shape.label() +
                              " outside vars {4, 6, 8} x lag {2, 3, 4}; set allow_custom_sizes to override");
        }
        GraphConfig{shape.num_variables, shape.max_lag, shape.edges(), 0}.validate();
        for (std::size_t n : sizes) {
            if (n < shape.max_lag + 2) {
                throw ConfigError("sample size " + std::to_string(n) + " too small for lag " + std::to_string(shape.max_lag));
            }
        }
    }
    PcConfig{pc_alpha, pc_max_condition_set, 1}.validate();
    std::set<std::string> seen;
    for (const auto& a : algorithms) {
        if (a.empty() || a.find_first_of("/\\,") != std::string::npos) {
            throw ConfigError("algorithm id '" + a + "' must be non-empty and free of '/', '\\', ','");
        }
        if (!seen.insert(a).second) throw ConfigError("algorithm '" + a + "' listed twice");
    }
}

RunManifest parse_manifest(std::string_view json_text, const fs::path& base_dir) {
    RunManifest m;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("manifest is not valid JSON: ") + ex.what());
    }
    if (!j.is_object()) throw ConfigError("manifest must be a JSON object");
    static const std::set<std::string> known{"master_seed", "variants", "sizes", "graph_configs", "algorithms",
                                             "output_dir", "import_dir", "noise", "allow_custom_sizes", "pc"};
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) throw ConfigError("unknown manifest key '" + key + "'");
    }
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() || base_dir.empty() ? fs::path(p) : base_dir / p; };
    try {
        m.master_seed = j.value("master_seed", std::uint64_t{0});
        const auto& variants = j.at("variants");
        std::vector<std::string> ids;
        if (variants.is_string()) {
            ids.push_back(variants.get<std::string>());
        } else {
            ids = variants.get<std::vector<std::string>>();
        }
        if (ids.size() == 1 && ids[0] == "all") ids = variant_ids();
        for (const auto& id : ids) m.variants.push_back(resolve_variant(id));
        m.sizes = j.at("sizes").get<std::vector<std::size_t>>();
        for (const auto& g : j.at("graph_configs")) m.graph_configs.push_back(parse_shape(g));
        m.algorithms = j.value("algorithms", std::vector<std::string>{});
        if (j.contains("output_dir")) m.output_dir = resolve(j.at("output_dir").get<std::string>());
        if (j.contains("import_dir") && !j.at("import_dir").is_null()) {
            m.import_dir = resolve(j.at("import_dir").get<std::string>());
        }
        m.noise_override = parse_noise_override(j.value("noise", std::string("default")));
        m.allow_custom_sizes = j.value("allow_custom_sizes", false);
        if (j.contains("pc")) {
            const auto& pc = j.at("pc");
            for (const auto& [key, _] : pc.items()) {
                if (key != "alpha" && key != "max_condition_set") throw ConfigError("unknown pc key '" + key + "'");
            }
            m.pc_alpha = pc.value("alpha", m.pc_alpha);
            m.pc_max_condition_set = pc.value("max_condition_set", m.pc_max_condition_set);
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("malformed manifest: ") + ex.what());
    }
    m.validate();
    return m;
}

RunManifest load_manifest(const fs::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const DataError& ex) {
        throw ConfigError(ex.what());
    }
    return parse_manifest(text, path.parent_path());
}

std::string manifest_to_json(const RunManifest& m) {
    ordered_json j;
    j["master_seed"] = m.master_seed;
    j["variants"] = ordered_json::array();
    for (const auto& v : m.variants) j["variants"].push_back(v.id);
    j["sizes"] = m.sizes;
    j["graph_configs"] = ordered_json::array();
    for (const auto& s : m.graph_configs) {
        ordered_json g{{"vars", s.num_variables}, {"lag", s.max_lag}};
        if (s.num_edges != 0) g["edges"] = s.num_edges;
        j["graph_configs"].push_back(g);
    }
    j["algorithms"] = m.algorithms;
    j["output_dir"] = m.output_dir.string();
    if (m.import_dir) j["import_dir"] = m.import_dir->string();
    j["noise"] = std::string(to_string(m.noise_override));
    j["allow_custom_sizes"] = m.allow_custom_sizes;
    j["pc"] = {{"alpha", m.pc_alpha}, {"max_condition_set", m.pc_max_condition_set}};
    return j.dump(2) + "\n";
}

std::vector<DatasetEntry> suite_entries(const RunManifest& manifest) {
    std::vector<DatasetEntry> out;
    for (const auto& v : manifest.variants) {
        for (std::size_t size : manifest.sizes) {
            for (const auto& shape : manifest.graph_configs) {
                DatasetEntry e;
                e.dataset_id = dataset_id(v.id, shape, size);
                e.variant_id = v.id;
                e.shape = shape;
                e.size = size;
                e.dir = manifest.output_dir / "datasets" / e.dataset_id;
                out.push_back(std::move(e));
            }
        }
    }
    return out;
}

std::string provenance_json(const MaterializedDataset& d, std::string_view truth_digest) {
    ordered_json j;
    j["generator"] = std::string(kGeneratorVersion);
    j["dataset_id"] = d.dataset_id;
    j["variant_id"] = d.variant.id;
    j["base_variant"] = d.variant.base_id;
    j["master_seed"] = d.master_seed;
    j["dataset_seed"] = d.data.meta.seed;
    j["graph_seed"] = d.data.meta.graph_seed;
    j["config_digest"] = d.data.meta.config_digest;
    j["truth_digest"] = std::string(truth_digest);
    j["num_variables"] = d.shape.num_variables;
    j["max_lag"] = d.shape.max_lag;
    j["num_edges"] = d.truth.graph.edges.size();
    j["size"] = d.size;
    j["form"] = std::string(to_string(d.variant.form));
    j["noise_family"] = std::string(to_string(d.variant.noise));
    j["noise_override"] = std::string(to_string(d.noise_override));
    j["noise"] = ordered_json::array();
    for (std::size_t v = 0; v < d.scm.noise.size(); ++v) {
        const auto& n = d.scm.noise[v];
        ordered_json e{{"var", v}, {"kind", std::string(to_string(n.kind))}, {"scale", n.scale}};
        if (n.kind == NoiseKind::student_t) e["dof"] = n.dof;
        if (n.kind == NoiseKind::mixed) e["mix_ratio"] = n.mix_ratio;
        j["noise"].push_back(e);
    }
    if (d.variant.form == FunctionalForm::polynomial) j["poly_degrees"] = d.scm.poly_degrees;
    if (d.variant.form == FunctionalForm::trig_trend_seasonal) {
        j["trend_season"] = ordered_json::array();
        for (const auto& ts : d.scm.trend_season) {
            ordered_json e{{"trend_slope", ts.trend_slope}, {"season_period", ts.season_period}};
            e["harmonics"] = ordered_json::array();
            for (const auto& h : ts.harmonics) {
                e["harmonics"].push_back({{"amplitude", h.amplitude}, {"index", h.index}, {"phase", h.phase}});
            }
            j["trend_season"].push_back(e);
        }
    }
    if (d.variant.confounded) {
        j["confounder_coeff"] = {{"linear", d.scm.confounder_linear_coeff},
                                 {"quadratic", d.scm.confounder_quadratic_coeff}};
    }
    j["sampling"] = {{"kind", std::string(to_string(d.variant.sampling.kind))}};
    if (d.variant.sampling.kind == SamplingKind::irregular_exponential) j["sampling"]["rate"] = d.variant.sampling.rate;
    const auto& ms = d.variant.missingness;
    j["missingness"] = {{"kind", std::string(to_string(ms.kind))}, {"mcar_rate", ms.mcar_rate}};
    if (ms.block) {
        j["missingness"]["block"] = {{"mean_length", ms.block->mean_length},
                                     {"trigger", std::string(to_string(ms.block->trigger))},
                                     {"threshold", ms.block->threshold},
                                     {"rate", ms.block->rate}};
    } else {
        j["missingness"]["block"] = nullptr;
    }
    j["missing_fraction"] = d.data.missing_fraction();
    j["confounded"] = d.variant.confounded;
    j["burn_in"] = kBurnIn;
    j["files"] = ordered_json::array({"data.csv", "complete.csv"});
    if (d.data.mask) j["files"].push_back("mask.csv");
    j["files"].push_back("truth.json");
    return j.dump(2) + "\n";
}

void write_dataset(const MaterializedDataset& d, const fs::path& dir) {
    fs::create_directories(dir);
    const std::string truth = ground_truth_to_json(d.truth);
    write_text_file(dir / "truth.json", truth);
    write_text_file(dir / "data.csv", dataset_to_csv(d.data, CsvView::observed));
    write_text_file(dir / "complete.csv", dataset_to_csv(d.data, CsvView::complete));
    if (d.data.mask) {
        write_text_file(dir / "mask.csv", dataset_to_csv(d.data, CsvView::mask));
    } else {
        fs::remove(dir / "mask.csv");
    }
    write_text_file(dir / "provenance.json", provenance_json(d, to_hex(fnv1a64(truth))));
}

namespace {

void materialize_entry(const RunManifest& manifest, const DatasetEntry& e) {
    const auto d = materialize(resolve_variant(e.variant_id), e.shape, e.size, manifest.master_seed,
                               manifest.noise_override);
    write_dataset(d, e.dir);
}

}  // namespace

std::vector<DatasetEntry> generate_suite(const RunManifest& manifest, unsigned threads) {
    manifest.validate();
    const auto entries = suite_entries(manifest);
    const auto errors = detail::parallel_for(entries.size(), threads,
                                             [&](std::size_t i) { materialize_entry(manifest, entries[i]); });
    std::size_t failed = 0;
    std::string detail_msg;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!errors[i]) continue;
        ++failed;
        detail_msg += "\n  " + entries[i].dataset_id + ": " + describe(errors[i]);
    }
    if (failed > 0) {
        throw DataError("wrote " + std::to_string(entries.size() - failed) + " of " + std::to_string(entries.size()) +
                        " datasets; failed:" + detail_msg);
    }
    return entries;
}

std::string results_to_csv(const ResultsTable& table) {
    std::string out = "dataset,variant,vars,lag,n";
    for (const auto& a : table.algorithms) out += "," + a + "_tpr," + a + "_fdr," + a + "_shd," + a + "_status";
    out += '\n';
    for (const auto& row : table.rows) {
        out += row.dataset_id + "," + row.variant_id + "," + std::to_string(row.shape.num_variables) + "," +
               std::to_string(row.shape.max_lag) + "," + std::to_string(row.size);
        for (const auto& cell : row.cells) {
            if (cell.report) {
                out += "," + fixed2(cell.report->tpr) + "," + fixed2(cell.report->fdr) + "," +
                       fixed2(static_cast<double>(cell.report->shd));
            } else {
                out += ",--,--,--";
            }
            out += "," + one_line(cell.status);
        }
        out += '\n';
    }
    return out;
}

ResultsTable results_from_csv(std::string_view text) {
    ResultsTable table;
    std::vector<std::vector<std::string>> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t s = 0;
        while (true) {
            const std::size_t c = line.find(',', s);
            cells.emplace_back(line.substr(s, c == std::string_view::npos ? std::string_view::npos : c - s));
            if (c == std::string_view::npos) break;
            s = c + 1;
        }
        lines.push_back(std::move(cells));
    }
    if (lines.empty() || lines[0].size() < 5 || (lines[0].size() - 5) % 4 != 0 || lines[0][0] != "dataset") {
        throw DataError("results table header is malformed");
    }
    for (std::size_t c = 5; c < lines[0].size(); c += 4) {
        const std::string& h = lines[0][c];
        if (h.size() < 5 || h.substr(h.size() - 4) != "_tpr") throw DataError("results column '" + h + "' is not *_tpr");
        table.algorithms.push_back(h.substr(0, h.size() - 4));
    }
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& cells = lines[r];
        if (cells.size() != lines[0].size()) throw DataError("results row " + std::to_string(r + 1) + " has wrong width");
        ResultRow row;
        row.dataset_id = cells[0];
        row.variant_id = cells[1];
        row.shape.num_variables = std::stoul(cells[2]);
        row.shape.max_lag = std::stoul(cells[3]);
        row.size = std::stoul(cells[4]);
        for (std::size_t c = 5; c < cells.size(); c += 4) {
            ResultCell cell;
            cell.status = cells[c + 3];
            if (cells[c] != "--") {
                EvalReport rep;
                rep.tpr = std::stod(cells[c]);
                rep.fdr = std::stod(cells[c + 1]);
                rep.shd = static_cast<std::size_t>(std::stod(cells[c + 2]) + 0.5);
                cell.report = rep;
            }
            row.cells.push_back(std::move(cell));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

Dataset load_dataset_dir(const fs::path& dir) {
    std::optional<std::string> mask;
    if (fs::exists(dir / "mask.csv")) mask = read_text_file(dir / "mask.csv");
    const std::string data_csv = read_text_file(dir / "data.csv");
    return dataset_from_csv(data_csv, mask ? std::optional<std::string_view>(*mask) : std::nullopt);
}

std::size_t discover_suite(const RunManifest& manifest, std::vector<std::string>* warnings, unsigned threads) {
    manifest.validate();
    const auto entries = suite_entries(manifest);
    const fs::path out_dir = manifest.output_dir / "results" / std::string(kBuiltinPc);
    const auto errors = detail::parallel_for(entries.size(), threads, [&](std::size_t i) {
        const auto& e = entries[i];
        if (!fs::exists(e.dir / "truth.json") || !fs::exists(e.dir / "data.csv")) materialize_entry(manifest, e);
        const GroundTruth truth = ground_truth_from_json(read_text_file(e.dir / "truth.json"));
        const DiscoveredGraph pred = pc_discover(
            load_dataset_dir(e.dir), PcConfig{manifest.pc_alpha, manifest.pc_max_condition_set, truth.graph.max_lag});
        write_text_file(out_dir / (e.dataset_id + ".graph.json"), discovered_graph_to_json(pred, kBuiltinPc));
    });
    std::size_t written = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!errors[i]) {
            ++written;
        } else if (warnings) {
            warnings->push_back(entries[i].dataset_id + ": " + describe(errors[i]));
        }
    }
    return written;
}

ResultsTable run_benchmark(const RunManifest& manifest, std::vector<std::string>* warnings,
                           const BenchmarkOptions& options) {
    manifest.validate();
    ResultsTable table;
    table.algorithms = manifest.algorithms;
    const fs::path results_dir = manifest.output_dir / "results";
    if (manifest.algorithms.empty()) {
        if (warnings) warnings->push_back("no algorithms configured; results table is empty");
        write_text_file(results_dir / "table.csv", results_to_csv(table));
        return table;
    }

    const auto entries = suite_entries(manifest);
    table.rows.resize(entries.size());
    const auto errors = detail::parallel_for(entries.size(), options.threads, [&](std::size_t i) {
        const auto& e = entries[i];
        ResultRow& row = table.rows[i];
        row.dataset_id = e.dataset_id;
        row.variant_id = e.variant_id;
        row.shape = e.shape;
        row.size = e.size;
        row.cells.assign(manifest.algorithms.size(), ResultCell{std::nullopt, "missing"});

        if (!fs::exists(e.dir / "truth.json") || !fs::exists(e.dir / "data.csv")) materialize_entry(manifest, e);
        const GroundTruth truth = ground_truth_from_json(read_text_file(e.dir / "truth.json"));

        for (std::size_t a = 0; a < manifest.algorithms.size(); ++a) {
            const std::string& algo = manifest.algorithms[a];
            ResultCell& cell = row.cells[a];
            try {
                DiscoveredGraph pred;
                if (algo == kBuiltinPc && !options.run_discovery) {
                    const fs::path stored = results_dir / algo / (e.dataset_id + ".graph.json");
                    if (!fs::exists(stored)) continue;
                    pred = discovered_graph_from_json(read_text_file(stored));
                } else if (algo == kBuiltinPc) {
                    pred = pc_discover(load_dataset_dir(e.dir), PcConfig{manifest.pc_alpha,
                                                                        manifest.pc_max_condition_set,
                                                                        truth.graph.max_lag});
                    write_text_file(results_dir / algo / (e.dataset_id + ".graph.json"),
                                    discovered_graph_to_json(pred, algo));
                } else {
                    const fs::path imported = manifest.imports() / algo / (e.dataset_id + ".json");
                    if (!fs::exists(imported)) continue;
                    pred = discovered_graph_from_json(read_text_file(imported));
                }
                const EvalReport report = evaluate(truth.graph, pred);
                write_text_file(results_dir / algo / (e.dataset_id + ".json"),
                                eval_report_to_json(report, e.variant_id, algo));
                cell.report = report;
                cell.status = "ok";
            } catch (const std::exception& ex) {
                cell.report.reset();
                cell.status = "error: " + one_line(ex.what());
            }
        }
    });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!errors[i]) continue;
        // Whole-dataset failure (generation or truth loading): every cell errors.
        const std::string msg = "error: " + one_line(describe(errors[i]));
        auto& row = table.rows[i];
        row.dataset_id = entries[i].dataset_id;
        row.variant_id = entries[i].variant_id;
        row.shape = entries[i].shape;
        row.size = entries[i].size;
        row.cells.assign(manifest.algorithms.size(), ResultCell{std::nullopt, msg});
        if (warnings) warnings->push_back(entries[i].dataset_id + ": " + describe(errors[i]));
    }
    write_text_file(results_dir / "table.csv", results_to_csv(table));
    return table;
}

}  // namespace lagbench
