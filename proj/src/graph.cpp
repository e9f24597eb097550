#include "lagbench/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lagbench/errors.hpp"

namespace lagbench {

namespace {

std::string real17(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

double draw_coefficient(Rng& rng) {
    std::uniform_real_distribution<double> magnitude(kMinCoeffMagnitude, kMaxCoeffMagnitude);
    std::bernoulli_distribution negative(0.5);
    const double m = magnitude(rng);
    return negative(rng) ? -m : m;
}

}  // namespace

std::string_view to_string(Coupling coupling) {
    return coupling == Coupling::linear ? "linear" : "quadratic";
}

Coupling parse_coupling(std::string_view text) {
    if (text == "linear") return Coupling::linear;
    if (text == "quadratic") return Coupling::quadratic;
    throw ConfigError("unknown coupling '" + std::string(text) + "' (expected linear or quadratic)");
}

void ConfounderSpec::validate(std::size_t num_variables) const {
    if (targets.size() < 2) {
        throw ConfigError("confounder needs at least 2 targets, got " + std::to_string(targets.size()));
    }
    std::set<std::size_t> seen;
    for (const auto& t : targets) {
        if (t.var >= num_variables) {
            throw ConfigError("confounder target X" + std::to_string(t.var) + " out of range for " +
                              std::to_string(num_variables) + " variables");
        }
        if (!seen.insert(t.var).second) {
            throw ConfigError("confounder target X" + std::to_string(t.var) + " listed twice");
        }
    }
    if (!(std::abs(ar_coeff) < 1.0)) {
        throw ConfigError("confounder ar_coeff must satisfy |ar_coeff| < 1, got " + real17(ar_coeff));
    }
    if (!(noise_scale > 0.0) || !std::isfinite(noise_scale)) {
        throw ConfigError("confounder noise_scale must be positive, got " + real17(noise_scale));
    }
}

void TemporalCausalGraph::validate(bool require_nonzero_coeffs) const {
    if (num_variables == 0) throw ConfigError("graph must have at least one variable");
    if (max_lag == 0) throw ConfigError("graph max_lag must be >= 1");
    std::set<EdgeKey> seen;
    std::vector<bool> has_self(num_variables, false);
    for (const auto& e : edges) {
        if (e.src >= num_variables || e.dst >= num_variables) {
            throw ConfigError("edge X" + std::to_string(e.src) + "->X" + std::to_string(e.dst) +
                              " references a variable >= " + std::to_string(num_variables));
        }
        if (e.lag < 1 || e.lag > max_lag) {
            throw ConfigError("edge lag " + std::to_string(e.lag) + " outside [1, " + std::to_string(max_lag) + "]");
        }
        if (!std::isfinite(e.coeff) || (require_nonzero_coeffs && e.coeff == 0.0)) {
            throw ConfigError("edge coefficient must be finite and non-zero");
        }
        if (!seen.insert(e.key()).second) {
            throw ConfigError("duplicate edge X" + std::to_string(e.src) + "->X" + std::to_string(e.dst) +
                              " at lag " + std::to_string(e.lag));
        }
        if (e.autoregressive()) has_self[e.dst] = true;
    }
    for (std::size_t j = 0; j < num_variables; ++j) {
        if (!has_self[j]) throw ConfigError("variable X" + std::to_string(j) + " has no autoregressive edge");
    }
    if (confounder) confounder->validate(num_variables);
}

std::vector<EdgeKey> TemporalCausalGraph::keys() const {
    std::vector<EdgeKey> out;
    out.reserve(edges.size());
    for (const auto& e : edges) out.push_back(e.key());
    return out;
}

void GraphConfig::validate() const {
    if (num_variables < 1) throw ConfigError("num_variables must be >= 1");
    if (max_lag < 1) throw ConfigError("max_lag must be >= 1");
    if (num_edges < num_variables) {
        throw ConfigError("num_edges " + std::to_string(num_edges) + " below lower bound num_variables = " +
                          std::to_string(num_variables));
    }
    const std::size_t capacity = num_variables * num_variables * max_lag;
    if (num_edges > capacity) {
        throw ConfigError("num_edges " + std::to_string(num_edges) +
                          " above upper bound num_variables^2 * max_lag = " + std::to_string(capacity));
    }
}

std::size_t default_edge_count(std::size_t num_variables) {
    // ceil(9 * n / 4) in integers
    return (9 * num_variables + 3) / 4;
}

TemporalCausalGraph generate_graph(const GraphConfig& config) {
    config.validate();
    Rng rng(config.seed);

    TemporalCausalGraph g;
    g.num_variables = config.num_variables;
    g.max_lag = config.max_lag;
    g.edges.reserve(config.num_edges);

    for (std::size_t j = 0; j < config.num_variables; ++j) {
        g.edges.push_back({j, j, 1, 0.0});
    }

    std::vector<EdgeKey> pool;
    for (std::size_t lag = 1; lag <= config.max_lag; ++lag) {
        for (std::size_t dst = 0; dst < config.num_variables; ++dst) {
            for (std::size_t src = 0; src < config.num_variables; ++src) {
                if (lag == 1 && src == dst) continue;
                pool.push_back({src, dst, lag});
            }
        }
    }
    // Partial Fisher-Yates: the first k slots become a uniform draw without replacement.
    const std::size_t extra = config.num_edges - config.num_variables;
    for (std::size_t i = 0; i < extra; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
        g.edges.push_back({pool[i].src, pool[i].dst, pool[i].lag, 0.0});
    }

    redraw_coefficients(g, rng);
    return g;
}

void redraw_coefficients(TemporalCausalGraph& graph, Rng& rng) {
    for (auto& e : graph.edges) e.coeff = draw_coefficient(rng);
}

TemporalCausalGraph add_confounder(const TemporalCausalGraph& graph, const ConfounderSpec& spec) {
    spec.validate(graph.num_variables);
    TemporalCausalGraph out = graph;
    out.confounder = spec;
    return out;
}

UnrolledGraph unroll(const TemporalCausalGraph& graph) {
    UnrolledGraph out;
    const std::size_t n = graph.num_variables;
    out.nodes.reserve(n * (graph.max_lag + 1));
    for (std::size_t lag = 0; lag <= graph.max_lag; ++lag) {
        for (std::size_t v = 0; v < n; ++v) out.nodes.push_back({v, lag});
    }
    for (const auto& e : graph.edges) {
        for (std::size_t offset = 0; offset + e.lag <= graph.max_lag; ++offset) {
            out.edges.emplace_back((offset + e.lag) * n + e.src, offset * n + e.dst);
        }
    }
    return out;
}

std::string ground_truth_to_json(const GroundTruth& truth) {
    const auto& g = truth.graph;
    std::ostringstream os;
    os << "{\n";
    os << "  \"num_variables\": " << g.num_variables << ",\n";
    os << "  \"max_lag\": " << g.max_lag << ",\n";
    os << "  \"edges\": [";
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        os << (i == 0 ? "\n" : ",\n") << "    {\"src\": " << e.src << ", \"dst\": " << e.dst
           << ", \"lag\": " << e.lag << ", \"coeff\": " << real17(e.coeff) << "}";
    }
    os << (g.edges.empty() ? "],\n" : "\n  ],\n");
    os << "  \"confounder\": ";
    if (g.confounder) {
        const auto& c = *g.confounder;
        os << "{\"targets\": [";
        for (std::size_t i = 0; i < c.targets.size(); ++i) {
            os << (i == 0 ? "" : ", ") << "{\"var\": " << c.targets[i].var << ", \"coupling\": \""
               << to_string(c.targets[i].coupling) << "\"}";
        }
        os << "], \"ar_coeff\": " << real17(c.ar_coeff) << ", \"noise_scale\": " << real17(c.noise_scale) << "}";
    } else {
        os << "null";
    }
    os << ",\n";
    os << "  \"seed\": " << truth.seed << ",\n";
    os << "  \"variant_id\": " << nlohmann::json(truth.variant_id).dump() << "\n";
    os << "}\n";
    return os.str();
}

GroundTruth ground_truth_from_json(std::string_view text) {
    GroundTruth out;
    try {
        const auto j = nlohmann::json::parse(text);
        auto& g = out.graph;
        g.num_variables = j.at("num_variables").get<std::size_t>();
        g.max_lag = j.at("max_lag").get<std::size_t>();
        for (const auto& e : j.at("edges")) {
            g.edges.push_back({e.at("src").get<std::size_t>(), e.at("dst").get<std::size_t>(),
                               e.at("lag").get<std::size_t>(), e.at("coeff").get<double>()});
        }
        if (j.contains("confounder") && !j.at("confounder").is_null()) {
            const auto& c = j.at("confounder");
            ConfounderSpec spec;
            for (const auto& t : c.at("targets")) {
                spec.targets.push_back({t.at("var").get<std::size_t>(),
                                        parse_coupling(t.at("coupling").get<std::string>())});
            }
            spec.ar_coeff = c.at("ar_coeff").get<double>();
            spec.noise_scale = c.at("noise_scale").get<double>();
            g.confounder = spec;
        }
        out.seed = j.value("seed", std::uint64_t{0});
        out.variant_id = j.value("variant_id", std::string{});
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("malformed ground-truth JSON: ") + ex.what());
    }
    out.graph.validate();
    return out;
}

}  // namespace lagbench
