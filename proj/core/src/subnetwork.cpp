#include "ghd/subnetwork.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "detect_engine.hpp"
#include "ghd/stat.hpp"

namespace ghd {

namespace {

std::pair<double, double> centered_stat_and_mu(const LabeledGraph& a, const LabeledGraph& b,
                                               const std::vector<int>& nodes,
                                               WeightScheme scheme) {
    LabeledGraph ia = a.induced(nodes);
    LabeledGraph ib = b.induced(nodes);
    CenteredWeights ca = center(make_weights(ia, scheme));
    CenteredWeights cb = center(make_weights(ib, scheme));
    PermutationMoments pm = permutation_moments(ca, cb);
    return {ghd(ca, cb), pm.mu};
}

void validate_config(const DetectionConfig& cfg, int n) {
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw std::invalid_argument("detect: alpha must be in (0,1)");
    if (cfg.n_min < 4)
        throw std::invalid_argument("detect: n_min must be at least 4");
    if (cfg.n_min >= n)
        throw std::invalid_argument("detect: n_min must be smaller than the graph (n_min=" +
                                    std::to_string(cfg.n_min) + ", N=" + std::to_string(n) + ")");
    if (cfg.batch < 1) throw std::invalid_argument("detect: batch must be >= 1");
    if (cfg.adjust != "BH")
        throw std::invalid_argument("detect: unsupported p-value adjustment '" + cfg.adjust + "'");
}

} // namespace

double centered_ghd(const LabeledGraph& a, const LabeledGraph& b,
                    const std::vector<int>& nodes, WeightScheme scheme) {
    if (!a.same_labels(b))
        throw std::invalid_argument("centered_ghd: graphs must share one labelled node set");
    auto [stat, mu] = centered_stat_and_mu(a, b, nodes, scheme);
    return stat - mu;
}

double node_influence(const LabeledGraph& a, const LabeledGraph& b,
                      const std::vector<int>& nodes, int node, WeightScheme scheme) {
    if (nodes.size() < 5)
        throw std::domain_error("node_influence: need at least 5 nodes so the reduced set "
                                "still supports the test");
    std::vector<int> reduced;
    reduced.reserve(nodes.size() - 1);
    bool found = false;
    for (int v : nodes) {
        if (v == node) {
            found = true;
            continue;
        }
        reduced.push_back(v);
    }
    if (!found) throw std::invalid_argument("node_influence: node not in the candidate set");
    return centered_ghd(a, b, reduced, scheme) - centered_ghd(a, b, nodes, scheme);
}

std::vector<double> adjust_pvalues(const std::vector<double>& p) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (std::isnan(p[i])) continue;
        if (p[i] < 0.0 || p[i] > 1.0)
            throw std::invalid_argument("adjust_pvalues: p-values must lie in [0,1]");
        idx.push_back(i);
    }
    std::vector<double> out(p);
    if (idx.empty()) return out;
    const double m = static_cast<double>(idx.size());
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        if (p[x] != p[y]) return p[x] < p[y];
        return x < y;
    });
    double running = 1.0;
    for (std::size_t r = idx.size(); r-- > 0;) {
        double candidate = p[idx[r]] * m / static_cast<double>(r + 1);
        running = std::min(running, candidate);
        out[idx[r]] = running;
    }
    return out;
}

DetectionResult detect(const LabeledGraph& a, const LabeledGraph& b, const DetectionConfig& cfg) {
    if (!a.same_labels(b))
        throw std::invalid_argument("detect: graphs must share one labelled node set "
                                    "(same labels, same order)");
    const int n = a.size();
    validate_config(cfg, n);

    detail::DetectEngine engine(a, b, cfg.scheme);
    DetectionResult result;

    while (true) {
        engine.refresh();
        detail::StepStats st = engine.stats();

        DetectionStep step;
        step.k = st.k;
        step.statistic = st.statistic;
        step.mu = st.mu;
        step.sigma2 = st.sigma2;
        step.z = st.z;
        step.p_raw = st.p_association;
        step.degenerate = st.degenerate;

        const int k = engine.size();
        if (k <= cfg.n_min) {
            result.steps.push_back(std::move(step));
            break;
        }

        std::vector<int> live = engine.live_ids();
        std::vector<double> deltas = engine.deltas(cfg.n_workers);
        if (cfg.delta_observer) cfg.delta_observer(live, deltas);

        const int batch_eff = std::min(cfg.batch, k - cfg.n_min);
        std::vector<std::size_t> order(deltas.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            if (deltas[x] != deltas[y]) return deltas[x] > deltas[y];
            return live[x] < live[y];
        });
        step.forced = deltas[order[0]] <= 0.0;

        std::vector<int> doomed;
        doomed.reserve(static_cast<std::size_t>(batch_eff));
        for (int t = 0; t < batch_eff; ++t) {
            std::size_t pick = order[static_cast<std::size_t>(t)];
            doomed.push_back(live[pick]);
            step.removed.push_back(a.label(live[pick]));
            step.removed_delta.push_back(deltas[pick]);
        }
        engine.remove(doomed);
        result.steps.push_back(std::move(step));
    }

    std::vector<double> p_raw;
    p_raw.reserve(result.steps.size());
    for (const auto& s : result.steps) p_raw.push_back(s.p_raw);
    std::vector<double> p_adj = adjust_pvalues(p_raw);
    for (std::size_t i = 0; i < result.steps.size(); ++i)
        result.steps[i].p_adjusted = p_adj[i];

    // Detected subnetwork: the node set tested at the largest size whose
    // adjusted p-value exceeds alpha (sizes were visited in decreasing order).
    std::size_t chosen = result.steps.size();
    for (std::size_t i = 0; i < result.steps.size(); ++i) {
        if (!std::isnan(result.steps[i].p_adjusted) && result.steps[i].p_adjusted > cfg.alpha) {
            chosen = i;
            break;
        }
    }
    if (chosen < result.steps.size()) {
        result.stop_k = result.steps[chosen].k;
        std::vector<char> removed_before(static_cast<std::size_t>(n), 0);
        for (std::size_t i = 0; i < chosen; ++i)
            for (const auto& label : result.steps[i].removed) {
                int id = a.index_of(label);
                removed_before[static_cast<std::size_t>(id)] = 1;
            }
        for (int v = 0; v < n; ++v)
            if (!removed_before[static_cast<std::size_t>(v)]) result.v_star.push_back(a.label(v));
    }
    return result;
}

DetectionResult detect_dhd(const LabeledGraph& a, const LabeledGraph& b, DetectionConfig cfg) {
    cfg.scheme = WeightScheme::adjacency;
    return detect(a, b, cfg);
}

} // namespace ghd
