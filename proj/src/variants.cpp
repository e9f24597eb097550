#include "lagbench/variants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lagbench/errors.hpp"
#include "lagbench/seed.hpp"

namespace lagbench {

namespace {

BlockSpec default_block(BlockTrigger trigger) {
    BlockSpec b;
    b.mean_length = 10.0;
    b.trigger = trigger;
    b.threshold = 0.0;
    b.rate = 0.05;
    return b;
}

SamplingScheme irregular() { return {SamplingKind::irregular_exponential, kIrregularRate}; }

Dataset head(const Dataset& data, std::size_t rows) {
    Dataset out;
    out.meta = data.meta;
    const auto r = static_cast<Eigen::Index>(rows);
    out.values = data.values.topRows(r);
    if (data.mask) out.mask = data.mask->topRows(r);
    out.timestamps.assign(data.timestamps.begin(), data.timestamps.begin() + r);
    if (!data.grid_index.empty()) out.grid_index.assign(data.grid_index.begin(), data.grid_index.begin() + r);
    return out;
}

}  // namespace

std::string_view to_string(NoiseFamily family) {
    return family == NoiseFamily::gaussian_and_t ? "gaussian_and_t" : "mixed_gaussian_laplace";
}

std::string_view to_string(NoiseOverride override_kind) {
    switch (override_kind) {
        case NoiseOverride::none: return "default";
        case NoiseOverride::gaussian: return "gaussian";
        case NoiseOverride::student_t: return "student_t";
    }
    return "?";
}

NoiseOverride parse_noise_override(std::string_view text) {
    if (text.empty() || text == "default" || text == "none") return NoiseOverride::none;
    if (text == "gaussian") return NoiseOverride::gaussian;
    if (text == "student_t") return NoiseOverride::student_t;
    throw ConfigError("unknown noise override '" + std::string(text) + "' (expected default, gaussian, student_t)");
}

const std::vector<std::string>& variant_ids() {
    static const std::vector<std::string> ids{"A1", "A1C", "A2", "A2C", "B1", "B1C", "B2", "B2C", "C1",
                                              "C1C", "C2", "C2C", "D1", "D1C", "D2", "D2C", "D3", "D3C"};
    return ids;
}

VariantSpec resolve_variant(std::string_view id) {
    const auto& ids = variant_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
        std::string valid;
        for (const auto& v : ids) valid += (valid.empty() ? "" : ", ") + v;
        throw ConfigError("unknown variant '" + std::string(id) + "'; valid ids: " + valid);
    }
    VariantSpec v;
    v.id = std::string(id);
    v.confounded = id.back() == 'C';
    v.base_id = v.confounded ? v.id.substr(0, v.id.size() - 1) : v.id;

    const std::string& base = v.base_id;
    if (base == "A1" || base == "A2" || base == "D1") {
        v.form = FunctionalForm::linear;
    } else if (base == "B1" || base == "B2" || base == "D2") {
        v.form = FunctionalForm::polynomial;
    } else {
        v.form = FunctionalForm::trig_trend_seasonal;
    }
    v.noise = (base == "B2" || base == "D3") ? NoiseFamily::mixed_gaussian_laplace : NoiseFamily::gaussian_and_t;
    if (base == "A2" || base == "B2" || base == "C2" || base == "D2" || base == "D3") v.sampling = irregular();

    if (base == "D1") {
        v.missingness.kind = MissingKind::mcar;
        v.missingness.mcar_rate = kMcarRate;
    } else if (base == "D2") {
        v.missingness.kind = MissingKind::block;
        v.missingness.block = default_block(BlockTrigger::nmar);
    } else if (base == "D3") {
        v.missingness.kind = MissingKind::combined;
        v.missingness.mcar_rate = kCombinedMcarRate;
        v.missingness.block = default_block(BlockTrigger::mar);
    }
    v.coupling = v.form == FunctionalForm::linear ? Coupling::linear : Coupling::quadratic;
    return v;
}

std::string GraphShape::label() const {
    return std::to_string(num_variables) + "x" + std::to_string(max_lag) + "e" + std::to_string(edges());
}

std::uint64_t graph_seed(std::uint64_t master_seed, const GraphShape& shape) {
    return derive_seed(master_seed, "graph", shape.label());
}

TemporalCausalGraph reference_graph(std::uint64_t master_seed, const GraphShape& shape) {
    const std::uint64_t seed = graph_seed(master_seed, shape);
    const GraphConfig cfg{shape.num_variables, shape.max_lag, shape.edges(), seed};
    return stabilize(generate_graph(cfg), seed);
}

ConfounderSpec default_confounder(std::size_t num_variables, Coupling coupling) {
    ConfounderSpec spec;
    if (num_variables >= 4) {
        spec.targets = {{1, coupling}, {3, coupling}};
    } else {
        spec.targets = {{0, coupling}, {1, coupling}};
    }
    spec.ar_coeff = 0.8;
    spec.noise_scale = kNoiseScale;
    return spec;
}

std::vector<NoiseModel> noise_models(NoiseFamily family, std::size_t num_variables, NoiseOverride override_kind) {
    std::vector<NoiseModel> out;
    out.reserve(num_variables);
    for (std::size_t j = 0; j < num_variables; ++j) {
        if (family == NoiseFamily::mixed_gaussian_laplace) {
            out.push_back(NoiseModel::mixed(kNoiseScale, kMixRatio));
        } else if (override_kind == NoiseOverride::gaussian) {
            out.push_back(NoiseModel::gaussian(kNoiseScale));
        } else if (override_kind == NoiseOverride::student_t) {
            out.push_back(NoiseModel::student_t(kNoiseScale, kStudentDof));
        } else {
            out.push_back(j % 2 == 0 ? NoiseModel::gaussian(kNoiseScale)
                                     : NoiseModel::student_t(kNoiseScale, kStudentDof));
        }
    }
    return out;
}

std::vector<TrendSeason> default_trend_season(std::size_t num_variables) {
    std::vector<TrendSeason> out(num_variables);
    for (std::size_t j = 0; j < num_variables; ++j) {
        auto& ts = out[j];
        ts.trend_slope = 0.01 * kNoiseScale;
        ts.season_period = 12;
        const double phase = static_cast<double>(j) * std::numbers::pi / 4.0;
        ts.harmonics = {{20.0 * kNoiseScale, 1, phase}, {5.0 * kNoiseScale, 2, 2.0 * phase + std::numbers::pi / 2.0}};
    }
    return out;
}

std::vector<int> default_poly_degrees(std::size_t num_edges) {
    std::vector<int> out(num_edges);
    for (std::size_t e = 0; e < num_edges; ++e) out[e] = e % 2 == 0 ? 2 : 3;
    return out;
}

ScmSpec make_scm(const VariantSpec& variant, const TemporalCausalGraph& graph, NoiseOverride override_kind) {
    if (variant.confounded != graph.confounder.has_value()) {
        throw ConfigError("variant " + variant.id + (variant.confounded ? " needs" : " must not have") +
                          " a confounder block");
    }
    ScmSpec spec;
    spec.graph = graph;
    spec.form = variant.form;
    spec.noise = noise_models(variant.noise, graph.num_variables, override_kind);
    if (variant.form == FunctionalForm::trig_trend_seasonal) spec.trend_season = default_trend_season(graph.num_variables);
    if (variant.form == FunctionalForm::polynomial) spec.poly_degrees = default_poly_degrees(graph.edges.size());
    spec.validate();
    return spec;
}

std::string dataset_id(std::string_view variant_id, const GraphShape& shape, std::size_t size) {
    std::string id = std::string(variant_id) + "_v" + std::to_string(shape.num_variables) + "_l" +
                     std::to_string(shape.max_lag);
    if (shape.num_edges != 0 && shape.num_edges != default_edge_count(shape.num_variables)) {
        id += "_e" + std::to_string(shape.num_edges);
    }
    return id + "_n" + std::to_string(size);
}

std::uint64_t dataset_seed(std::uint64_t master_seed, std::string_view variant_id, const GraphShape& shape,
                           std::size_t size) {
    return derive_seed(master_seed, variant_id, std::to_string(size), shape.label());
}

MaterializedDataset materialize(const VariantSpec& variant, const GraphShape& shape, std::size_t size,
                                std::uint64_t master_seed, NoiseOverride override_kind) {
    if (size < shape.max_lag + 2) {
        throw ConfigError("sample size " + std::to_string(size) + " too small for max_lag " +
                          std::to_string(shape.max_lag));
    }
    MaterializedDataset out;
    out.dataset_id = dataset_id(variant.id, shape, size);
    out.variant = variant;
    out.shape = shape;
    out.size = size;
    out.master_seed = master_seed;
    out.noise_override = override_kind;

    TemporalCausalGraph graph = reference_graph(master_seed, shape);
    if (variant.confounded) graph = add_confounder(graph, default_confounder(shape.num_variables, variant.coupling));
    out.truth = {graph, graph_seed(master_seed, shape), variant.id};
    out.scm = make_scm(variant, graph, override_kind);

    const std::uint64_t seed = dataset_seed(master_seed, variant.id, shape, size);
    Dataset data;
    if (variant.sampling.kind == SamplingKind::irregular_exponential) {
        // Grid long enough that about 1.5 * size arrivals fall inside it.
        const auto grid = static_cast<std::size_t>(std::ceil(1.5 * static_cast<double>(size) / variant.sampling.rate)) + 64;
        const Dataset full = simulate(out.scm, grid, derive_seed(seed, "simulate"));
        const Dataset sampled = resample_irregular(full, variant.sampling, derive_seed(seed, "sampling"), shape.max_lag);
        if (sampled.rows() < size) {
            throw InsufficientDataError("irregular sampling produced " + std::to_string(sampled.rows()) +
                                        " rows, fewer than the requested " + std::to_string(size));
        }
        data = head(sampled, size);
    } else {
        data = simulate(out.scm, size, derive_seed(seed, "simulate"));
    }
    data = apply_missingness(data, variant.missingness, derive_seed(seed, "missingness"));
    data.meta.variant_id = variant.id;
    data.meta.seed = seed;
    data.meta.graph_seed = out.truth.seed;
    data.meta.config_digest = to_hex(fnv1a64(variant.id + "|" + shape.label() + "|" + std::to_string(size) + "|" +
                                             std::string(to_string(override_kind))));
    data.validate();
    out.data = std::move(data);
    return out;
}

}  // namespace lagbench
