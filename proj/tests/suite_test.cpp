#include <gtest/gtest.h>

#include <json.hpp>

#include "lagbench/csv.hpp"
#include "lagbench/errors.hpp"
#include "lagbench/seed.hpp"
#include "lagbench/suite.hpp"
#include "testutil.hpp"

using namespace lagbench;
namespace fs = std::filesystem;

namespace {

RunManifest small_manifest(const fs::path& out, std::vector<std::string> variants = {"A1"},
                           std::vector<std::size_t> sizes = {500}) {
    RunManifest m;
    m.master_seed = 2024;
    for (const auto& v : variants) m.variants.push_back(resolve_variant(v));
    m.sizes = std::move(sizes);
    m.graph_configs = {GraphShape{4, 2, 0}};
    m.output_dir = out;
    return m;
}

}  // namespace

TEST(ResolveVariant, BaselineAndConfounded) {
    const auto a1 = resolve_variant("A1");
    EXPECT_EQ(a1.form, FunctionalForm::linear);
    EXPECT_EQ(a1.sampling.kind, SamplingKind::regular);
    EXPECT_EQ(a1.missingness.kind, MissingKind::none);
    EXPECT_FALSE(a1.confounded);

    const auto a1c = resolve_variant("A1C");
    EXPECT_TRUE(a1c.confounded);
    EXPECT_EQ(a1c.base_id, "A1");
    EXPECT_EQ(a1c.form, a1.form);
    EXPECT_EQ(a1c.noise, a1.noise);
}

TEST(ResolveVariant, D2CAndD3) {
    const auto d2c = resolve_variant("D2C");
    EXPECT_EQ(d2c.form, FunctionalForm::polynomial);
    EXPECT_EQ(d2c.sampling.kind, SamplingKind::irregular_exponential);
    EXPECT_EQ(d2c.missingness.kind, MissingKind::block);
    EXPECT_TRUE(d2c.confounded);
    EXPECT_EQ(d2c.coupling, Coupling::quadratic);

    const auto d3 = resolve_variant("D3");
    EXPECT_EQ(d3.form, FunctionalForm::trig_trend_seasonal);
    EXPECT_EQ(d3.noise, NoiseFamily::mixed_gaussian_laplace);
    EXPECT_EQ(d3.sampling.kind, SamplingKind::irregular_exponential);
    EXPECT_EQ(d3.missingness.kind, MissingKind::combined);
    EXPECT_FALSE(d3.confounded);
}

TEST(ResolveVariant, UnknownIdListsValidIds) {
    try {
        resolve_variant("E9");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("A1C"), std::string::npos);
        EXPECT_NE(msg.find("D3C"), std::string::npos);
    }
    EXPECT_EQ(variant_ids().size(), 18u);
}

TEST(Manifest, ParsesAndRejectsUnknownKeys) {
    const auto m = parse_manifest(R"({"master_seed": 3, "variants": "all", "sizes": [500, 1000],
        "graph_configs": [{"vars": 4, "lag": 2}, [6, 3, 20]], "algorithms": ["pc"]})");
    EXPECT_EQ(m.variants.size(), 18u);
    EXPECT_EQ(m.graph_configs[1].edges(), 20u);
    EXPECT_EQ(suite_entries(m).size(), 18u * 2 * 2);
    EXPECT_THROW(parse_manifest(R"({"variants": ["A1"], "sizes": [500], "graph_configs": [[4,2]], "colour": 1})"),
                 ConfigError);
    EXPECT_THROW(parse_manifest(R"({"variants": ["A1"], "sizes": [700], "graph_configs": [[4,2]]})"), ConfigError);
    EXPECT_NO_THROW(parse_manifest(
        R"({"variants": ["A1"], "sizes": [700], "graph_configs": [[4,2]], "allow_custom_sizes": true})"));
    EXPECT_THROW(parse_manifest(R"({"variants": [], "sizes": [500], "graph_configs": [[4,2]]})"), ConfigError);
    EXPECT_THROW(parse_manifest(R"({"variants": ["A1"], "sizes": [500], "graph_configs": [[5,2]]})"), ConfigError);
}

TEST(Manifest, RoundTrip) {
    const auto m = parse_manifest(R"({"master_seed": 3, "variants": ["A1", "D3C"], "sizes": [500],
        "graph_configs": [[8, 4]], "algorithms": ["pc", "pcmci"], "output_dir": "/tmp/x", "noise": "gaussian"})");
    const auto back = parse_manifest(manifest_to_json(m));
    EXPECT_EQ(manifest_to_json(back), manifest_to_json(m));
    EXPECT_EQ(back.noise_override, NoiseOverride::gaussian);
}

TEST(Suite, FullGridCount) {
    RunManifest m = small_manifest("/nonexistent", variant_ids(), kSupportedSizes);
    EXPECT_EQ(suite_entries(m).size(), 72u);
}

TEST(Suite, SingleDatasetShape) {
    testutil::TempDir tmp("single");
    const auto entries = generate_suite(small_manifest(tmp.path()), 1);
    ASSERT_EQ(entries.size(), 1u);
    const Dataset d = load_dataset_dir(entries[0].dir);
    EXPECT_EQ(d.rows(), 500u);
    EXPECT_EQ(d.cols(), 4u);
    const auto truth = ground_truth_from_json(read_text_file(entries[0].dir / "truth.json"));
    EXPECT_EQ(truth.graph.edges.size(), 9u);
    EXPECT_EQ(truth.variant_id, "A1");
    EXPECT_FALSE(fs::exists(entries[0].dir / "mask.csv"));
    EXPECT_EQ(read_text_file(entries[0].dir / "data.csv").rfind("time,X0,X1,X2,X3\n", 0), 0u);
}

TEST(Suite, RegenerationIsByteIdentical) {
    testutil::TempDir a("regen-a"), b("regen-b");
    const std::vector<std::string> variants{"A1", "B2C", "D3"};
    generate_suite(small_manifest(a.path(), variants), 1);
    generate_suite(small_manifest(b.path(), variants), 1);
    const auto ta = testutil::tree(a.path());
    EXPECT_EQ(ta.size(), 3u * 4 + 1);  // only D3 adds a mask
    EXPECT_EQ(ta, testutil::tree(b.path()));
    generate_suite(small_manifest(a.path(), variants), 1);
    EXPECT_EQ(ta, testutil::tree(a.path()));
}

TEST(Suite, ProvenanceDigestMatchesTruth) {
    testutil::TempDir tmp("prov");
    for (const auto& e : generate_suite(small_manifest(tmp.path(), {"A1", "C2C", "D1"}), 1)) {
        const auto prov = nlohmann::json::parse(read_text_file(e.dir / "provenance.json"));
        EXPECT_EQ(prov.at("truth_digest").get<std::string>(), to_hex(fnv1a64(read_text_file(e.dir / "truth.json"))));
        EXPECT_EQ(prov.at("dataset_id").get<std::string>(), e.dataset_id);
    }
}

TEST(Suite, ConfoundedVariantsShareObservedTruth) {
    for (const auto& id : variant_ids()) {
        const auto v = resolve_variant(id);
        if (!v.confounded) continue;
        const auto c = materialize(v, GraphShape{4, 2, 0}, 500, 77);
        const auto b = materialize(resolve_variant(v.base_id), GraphShape{4, 2, 0}, 500, 77);
        EXPECT_EQ(c.truth.graph.edges, b.truth.graph.edges) << id;
        EXPECT_TRUE(c.truth.graph.confounder.has_value());
    }
}

TEST(Suite, ObservedCsvLeavesMaskedCellsEmpty) {
    const auto m = materialize(resolve_variant("D1"), GraphShape{4, 2, 0}, 500, 5);
    ASSERT_TRUE(m.data.mask.has_value());
    const auto observed = dataset_from_csv(dataset_to_csv(m.data, CsvView::observed));
    const auto complete = dataset_from_csv(dataset_to_csv(m.data, CsvView::complete));
    for (std::size_t r = 0; r < 500; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            EXPECT_EQ(observed.observed(r, c), m.data.observed(r, c));
            EXPECT_EQ(complete.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)),
                      m.data.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
        }
    }
}

TEST(Suite, MaterializedSizesAndMissingness) {
    for (const auto& id : variant_ids()) {
        const auto m = materialize(resolve_variant(id), GraphShape{4, 2, 0}, 1000, 9);
        EXPECT_EQ(m.data.rows(), 1000u) << id;
        EXPECT_NO_THROW(m.data.validate()) << id;
        const bool masked = m.variant.missingness.kind != MissingKind::none;
        EXPECT_EQ(m.data.mask.has_value(), masked) << id;
        if (masked) {
            EXPECT_GT(m.data.missing_fraction(), 0.0) << id;
            EXPECT_LT(m.data.missing_fraction(), 0.5) << id;
        }
    }
}

TEST(Benchmark, ImportedTruthScoresPerfect) {
    testutil::TempDir tmp("import");
    auto m = small_manifest(tmp.path());
    m.algorithms = {"oracle"};
    const auto entries = generate_suite(m, 1);
    write_text_file(m.imports() / "oracle" / (entries[0].dataset_id + ".json"),
                    read_text_file(entries[0].dir / "truth.json"));
    const auto table = run_benchmark(m, nullptr, {1, true});
    ASSERT_EQ(table.rows.size(), 1u);
    ASSERT_TRUE(table.rows[0].cells[0].report.has_value());
    EXPECT_EQ(table.rows[0].cells[0].report->tpr, 1.0);
    EXPECT_EQ(table.rows[0].cells[0].report->fdr, 0.0);
    EXPECT_EQ(table.rows[0].cells[0].report->shd, 0u);
    const std::string csv = read_text_file(tmp.path() / "results" / "table.csv");
    EXPECT_NE(csv.find(",1.00,0.00,0.00,ok"), std::string::npos) << csv;
}

TEST(Benchmark, MissingImportPrintsDashes) {
    testutil::TempDir tmp("missing");
    auto m = small_manifest(tmp.path());
    m.algorithms = {"fges"};
    const auto table = run_benchmark(m, nullptr, {1, true});
    EXPECT_FALSE(table.rows[0].cells[0].report.has_value());
    EXPECT_EQ(table.rows[0].cells[0].status, "missing");
    EXPECT_NE(results_to_csv(table).find(",--,--,--,missing"), std::string::npos);
}

TEST(Benchmark, NoAlgorithmsGivesEmptyTableAndWarning) {
    testutil::TempDir tmp("empty");
    std::vector<std::string> warnings;
    const auto table = run_benchmark(small_manifest(tmp.path()), &warnings, {1, true});
    EXPECT_TRUE(table.rows.empty());
    EXPECT_FALSE(warnings.empty());
    EXPECT_EQ(read_text_file(tmp.path() / "results" / "table.csv"), "dataset,variant,vars,lag,n\n");
}

TEST(Benchmark, BaselineOnLinearGaussian) {
    testutil::TempDir tmp("baseline");
    auto m = small_manifest(tmp.path(), {"A1"}, {5000});
    m.algorithms = {"pc"};
    m.noise_override = NoiseOverride::gaussian;
    const auto table = run_benchmark(m, nullptr, {1, true});
    ASSERT_TRUE(table.rows[0].cells[0].report.has_value());
    EXPECT_GE(table.rows[0].cells[0].report->tpr, 0.8);
    EXPECT_LE(table.rows[0].cells[0].report->fdr, 0.2);
    EXPECT_TRUE(fs::exists(tmp.path() / "results" / "pc" / (table.rows[0].dataset_id + ".graph.json")));
}

TEST(Results, CsvRoundTrip) {
    ResultsTable t;
    t.algorithms = {"pc", "lpcmci"};
    ResultRow row{"A1_v4_l2_n500", "A1", {4, 2, 0}, 500, {}};
    row.cells.push_back({EvalReport{0.78, 0.12, 3, 7, 1, 2, 0}, "ok"});
    row.cells.push_back({std::nullopt, "missing"});
    t.rows.push_back(row);
    const auto csv = results_to_csv(t);
    const auto back = results_from_csv(csv);
    EXPECT_EQ(results_to_csv(back), csv);
    EXPECT_EQ(back.rows[0].cells[0].report->shd, 3u);
}

TEST(Plots, BarChartsAndSeries) {
    testutil::TempDir tmp("plots");
    auto m = small_manifest(tmp.path());
    m.algorithms = {"pc"};
    const auto table = run_benchmark(m, nullptr, {1, true});
    const auto written = emit_plots(table, suite_entries(m), tmp.path() / "plots");
    ASSERT_EQ(written.size(), 4u);
    for (const char* name : {"tpr.svg", "fdr.svg", "shd.svg"}) EXPECT_TRUE(fs::exists(tmp.path() / "plots" / name));
    const std::string series = read_text_file(tmp.path() / "plots" / "series" / (table.rows[0].dataset_id + ".svg"));
    std::size_t traces = 0;
    for (std::size_t p = series.find("<polyline"); p != std::string::npos; p = series.find("<polyline", p + 1)) ++traces;
    EXPECT_EQ(traces, 4u);
}

TEST(Plots, EmptyResultsWriteNothing) {
    testutil::TempDir tmp("noplots");
    std::vector<std::string> warnings;
    const auto written = emit_plots(ResultsTable{}, {}, tmp.path() / "plots", &warnings);
    EXPECT_TRUE(written.empty());
    EXPECT_FALSE(warnings.empty());
    EXPECT_FALSE(fs::exists(tmp.path() / "plots"));
}
