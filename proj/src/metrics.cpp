#include "lagbench/metrics.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <vector>

#include <json.hpp>

#include "lagbench/errors.hpp"

namespace lagbench {

namespace {

EdgeKey mirror(const EdgeKey& e) { return {e.dst, e.src, e.lag}; }

std::set<EdgeKey> collapse(const std::set<EdgeKey>& edges) {
    std::set<EdgeKey> out;
    for (const auto& e : edges) out.insert({e.src, e.dst, 0});
    return out;
}

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

EvalReport score(const std::set<EdgeKey>& truth, const std::set<EdgeKey>& pred) {
    EvalReport r;
    for (const auto& e : pred) {
        if (truth.count(e)) {
            ++r.true_positives;
        } else if (e.src != e.dst && truth.count(mirror(e)) && !pred.count(mirror(e))) {
            ++r.reversals;
        }
    }
    r.false_positives = pred.size() - r.true_positives - r.reversals;
    r.false_negatives = truth.size() - r.true_positives - r.reversals;
    r.shd = r.false_positives + r.false_negatives + r.reversals;
    r.tpr = ratio(r.true_positives, truth.size());
    r.fdr = ratio(pred.size() - r.true_positives, pred.size());
    return r;
}

}  // namespace

DiscoveredGraph DiscoveredGraph::from_truth(const TemporalCausalGraph& graph) {
    DiscoveredGraph out;
    out.num_variables = graph.num_variables;
    out.max_lag = graph.max_lag;
    for (const auto& e : graph.edges) out.edges.insert(e.key());
    return out;
}

void DiscoveredGraph::validate() const {
    for (const auto& e : edges) {
        if (e.src >= num_variables || e.dst >= num_variables) {
            throw ConfigError("discovered edge references a variable >= " + std::to_string(num_variables));
        }
        if (e.lag < 1 || e.lag > max_lag) {
            throw ConfigError("discovered edge lag " + std::to_string(e.lag) + " outside [1, " +
                              std::to_string(max_lag) + "]");
        }
    }
}

EvalReport evaluate(const TemporalCausalGraph& truth, const DiscoveredGraph& pred, MatchMode mode) {
    return evaluate(DiscoveredGraph::from_truth(truth), pred, mode);
}

EvalReport evaluate(const DiscoveredGraph& truth, const DiscoveredGraph& pred, MatchMode mode) {
    if (truth.num_variables != pred.num_variables) {
        throw EvaluationError("variable count mismatch: truth has " + std::to_string(truth.num_variables) +
                              ", prediction has " + std::to_string(pred.num_variables));
    }
    if (mode == MatchMode::summary) return score(collapse(truth.edges), collapse(pred.edges));
    return score(truth.edges, pred.edges);
}

std::size_t shd_oracle(const DiscoveredGraph& truth, const DiscoveredGraph& pred) {
    // Edits only ever need edges from either graph or their mirrors.
    std::set<EdgeKey> universe_set;
    for (const auto* g : {&truth, &pred}) {
        for (const auto& e : g->edges) {
            universe_set.insert(e);
            universe_set.insert(mirror(e));
        }
    }
    if (universe_set.size() > kOracleMaxUniverse) {
        throw OracleCapacityError("shd_oracle: " + std::to_string(universe_set.size()) +
                                  " candidate edges exceed capacity " + std::to_string(kOracleMaxUniverse));
    }
    const std::vector<EdgeKey> universe(universe_set.begin(), universe_set.end());
    const std::size_t m = universe.size();
    std::map<EdgeKey, std::size_t> index;
    for (std::size_t i = 0; i < m; ++i) index[universe[i]] = i;

    auto encode = [&](const std::set<EdgeKey>& edges) {
        std::uint32_t bits = 0;
        for (const auto& e : edges) bits |= 1u << index.at(e);
        return bits;
    };
    std::vector<int> mirror_of(m, -1);
    for (std::size_t i = 0; i < m; ++i) {
        if (universe[i].src != universe[i].dst) mirror_of[i] = static_cast<int>(index.at(mirror(universe[i])));
    }

    const std::uint32_t start = encode(pred.edges);
    const std::uint32_t goal = encode(truth.edges);
    std::vector<int> dist(std::size_t{1} << m, -1);
    std::deque<std::uint32_t> queue{start};
    dist[start] = 0;
    while (!queue.empty()) {
        const std::uint32_t s = queue.front();
        queue.pop_front();
        if (s == goal) return static_cast<std::size_t>(dist[s]);
        auto visit = [&](std::uint32_t next) {
            if (dist[next] < 0) {
                dist[next] = dist[s] + 1;
                queue.push_back(next);
            }
        };
        for (std::size_t i = 0; i < m; ++i) {
            const std::uint32_t bit = 1u << i;
            visit(s ^ bit);  // addition or deletion
            if ((s & bit) && mirror_of[i] >= 0) {
                const std::uint32_t mbit = 1u << mirror_of[i];
                if (!(s & mbit)) visit((s & ~bit) | mbit);  // reversal
            }
        }
    }
    return static_cast<std::size_t>(dist[goal]);
}

std::string discovered_graph_to_json(const DiscoveredGraph& graph, std::string_view algorithm) {
    nlohmann::ordered_json j;
    j["num_variables"] = graph.num_variables;
    j["max_lag"] = graph.max_lag;
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : graph.edges) {
        j["edges"].push_back({{"src", e.src}, {"dst", e.dst}, {"lag", e.lag}});
    }
    if (!algorithm.empty()) j["algorithm"] = std::string(algorithm);
    return j.dump(2) + "\n";
}

DiscoveredGraph discovered_graph_from_json(std::string_view text) {
    DiscoveredGraph out;
    try {
        const auto j = nlohmann::json::parse(text);
        out.num_variables = j.at("num_variables").get<std::size_t>();
        out.max_lag = j.at("max_lag").get<std::size_t>();
        for (const auto& e : j.at("edges")) {
            const EdgeKey key{e.at("src").get<std::size_t>(), e.at("dst").get<std::size_t>(),
                              e.at("lag").get<std::size_t>()};
            if (!out.edges.insert(key).second) {
                throw ConfigError("duplicate discovered edge X" + std::to_string(key.src) + "->X" +
                                  std::to_string(key.dst) + " lag " + std::to_string(key.lag));
            }
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("malformed discovered-graph JSON: ") + ex.what());
    }
    out.validate();
    return out;
}

std::string eval_report_to_json(const EvalReport& report, std::string_view variant_id, std::string_view algorithm) {
    nlohmann::ordered_json j;
    j["variant_id"] = std::string(variant_id);
    j["algorithm"] = std::string(algorithm);
    j["tpr"] = report.tpr;
    j["fdr"] = report.fdr;
    j["shd"] = report.shd;
    j["tp"] = report.true_positives;
    j["fp"] = report.false_positives;
    j["fn"] = report.false_negatives;
    j["reversals"] = report.reversals;
    return j.dump(2) + "\n";
}

EvalReport eval_report_from_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        EvalReport r;
        r.tpr = j.at("tpr").get<double>();
        r.fdr = j.at("fdr").get<double>();
        r.shd = j.at("shd").get<std::size_t>();
        r.true_positives = j.at("tp").get<std::size_t>();
        r.false_positives = j.at("fp").get<std::size_t>();
        r.false_negatives = j.at("fn").get<std::size_t>();
        r.reversals = j.at("reversals").get<std::size_t>();
        return r;
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("malformed evaluation report JSON: ") + ex.what());
    }
}

}  // namespace lagbench
