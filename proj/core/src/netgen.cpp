#include "ghd/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "ghd/rng.hpp"

namespace ghd {

namespace {

std::vector<std::string> numeric_labels(int n) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return labels;
}

void require_n(int n, const char* what) {
    if (n < 1) throw std::invalid_argument(std::string(what) + ": n must be >= 1");
}

inline std::uint64_t edge_key(int i, int j, int n) {
    if (i > j) std::swap(i, j);
    return static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n) +
           static_cast<std::uint64_t>(j);
}

// Degree CDF sampler for P(k) ~ k^(-alpha), k = 1..kmax.
struct PowerlawSampler {
    std::vector<double> cdf;

    PowerlawSampler(double alpha, int kmax) {
        cdf.resize(static_cast<std::size_t>(kmax));
        double acc = 0.0;
        for (int k = 1; k <= kmax; ++k) {
            acc += std::pow(static_cast<double>(k), -alpha);
            cdf[static_cast<std::size_t>(k - 1)] = acc;
        }
        for (double& c : cdf) c /= acc;
        cdf.back() = 1.0;
    }

    int draw(Rng& rng) const {
        double u = next_double(rng);
        auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        return static_cast<int>(it - cdf.begin()) + 1;
    }
};

// Pair stubs into a simple graph.  Self-loops and duplicate edges are
// repaired by re-pairing swaps against randomly chosen accepted edges, which
// keeps the degree sequence exact whenever a swap exists.  Conflicts that
// outlive the repair budget are dropped (the rejection step): heavy-tailed
// sequences with hubs beyond the structural cutoff of simple graphs cannot be
// realized exactly, so a few hub degrees truncate while the bulk of the
// distribution is untouched.
std::vector<std::pair<int, int>> realize_configuration(const std::vector<int>& degrees, Rng& rng) {
    const int n = static_cast<int>(degrees.size());
    std::vector<int> stubs;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < degrees[static_cast<std::size_t>(i)]; ++k) stubs.push_back(i);
    if (stubs.size() % 2 != 0) throw std::logic_error("realize_configuration: odd stub count");
    shuffle(stubs, rng);

    std::vector<std::pair<int, int>> edges;
    std::vector<std::pair<int, int>> bad;
    std::unordered_set<std::uint64_t> seen;
    edges.reserve(stubs.size() / 2);
    seen.reserve(stubs.size());
    for (std::size_t t = 0; t + 1 < stubs.size(); t += 2) {
        int u = stubs[t], v = stubs[t + 1];
        if (u == v || !seen.insert(edge_key(u, v, n)).second)
            bad.emplace_back(u, v);
        else
            edges.emplace_back(u, v);
    }

    auto try_swap = [&](int u, int v) {
        if (edges.empty()) return false;
        std::size_t g = static_cast<std::size_t>(next_below(rng, edges.size()));
        auto [x, y] = edges[g];
        if (next_below(rng, 2) == 1) std::swap(x, y);
        // propose replacing (x,y) with (u,x) and (v,y)
        if (u == x || v == y) return false;
        std::uint64_t k1 = edge_key(u, x, n), k2 = edge_key(v, y, n);
        if (k1 == k2 || seen.count(k1) || seen.count(k2)) return false;
        seen.erase(edge_key(x, y, n));
        seen.insert(k1);
        seen.insert(k2);
        edges[g] = {u, x};
        edges.emplace_back(v, y);
        return true;
    };

    const int max_passes = 30;
    for (int pass = 0; pass < max_passes && !bad.empty(); ++pass) {
        std::vector<std::pair<int, int>> still_bad;
        for (auto [u, v] : bad) {
            bool fixed = false;
            for (int attempt = 0; attempt < 50 && !fixed; ++attempt) fixed = try_swap(u, v);
            if (!fixed) still_bad.emplace_back(u, v);
        }
        bad.swap(still_bad);
    }
    // last-ditch budget per leftover conflict, then drop it
    for (auto [u, v] : bad) {
        bool fixed = false;
        for (int attempt = 0; attempt < 500 && !fixed; ++attempt) fixed = try_swap(u, v);
    }
    return edges;
}

} // namespace

std::string to_string(GraphModel m) {
    switch (m) {
        case GraphModel::rg2d: return "rg2d";
        case GraphModel::sf: return "sf";
        case GraphModel::er: return "er";
    }
    return "?";
}

std::string to_string(SfWiring w) {
    return w == SfWiring::configuration ? "configuration" : "chung_lu";
}

std::string to_string(RewireMode m) {
    return m == RewireMode::delete_reinsert ? "delete_reinsert" : "degree_swaps";
}

GraphModel graph_model_from_string(const std::string& s) {
    if (s == "rg2d" || s == "rg") return GraphModel::rg2d;
    if (s == "sf") return GraphModel::sf;
    if (s == "er") return GraphModel::er;
    throw std::invalid_argument("unknown graph model '" + s + "' (expected rg2d, sf, or er)");
}

SfWiring sf_wiring_from_string(const std::string& s) {
    if (s == "configuration") return SfWiring::configuration;
    if (s == "chung_lu") return SfWiring::chung_lu;
    throw std::invalid_argument("unknown sf wiring '" + s + "' (expected configuration or chung_lu)");
}

RewireMode rewire_mode_from_string(const std::string& s) {
    if (s == "delete_reinsert") return RewireMode::delete_reinsert;
    if (s == "degree_swaps") return RewireMode::degree_swaps;
    throw std::invalid_argument("unknown rewire mode '" + s + "' (expected delete_reinsert or degree_swaps)");
}

LabeledGraph random_geometric(int n, double d, std::uint64_t seed) {
    require_n(n, "random_geometric");
    if (!(d >= 0.0)) throw std::invalid_argument("random_geometric: d must be >= 0");
    Rng rng = make_rng(seed);
    std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = next_double(rng);
        y[static_cast<std::size_t>(i)] = next_double(rng);
    }
    const double d2 = d * d;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double dx = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
            double dy = y[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(j)];
            if (dx * dx + dy * dy < d2) edges.emplace_back(i, j);
        }
    return LabeledGraph(numeric_labels(n), edges);
}

LabeledGraph erdos_renyi(int n, double p, std::uint64_t seed) {
    require_n(n, "erdos_renyi");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("erdos_renyi: p must be in [0,1]");
    Rng rng = make_rng(seed);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (next_double(rng) < p) edges.emplace_back(i, j);
    return LabeledGraph(numeric_labels(n), edges);
}

LabeledGraph scale_free(int n, double alpha, std::uint64_t seed, SfWiring wiring) {
    require_n(n, "scale_free");
    if (!(alpha > 1.0)) throw std::invalid_argument("scale_free: alpha must be > 1");
    if (n < 2) return LabeledGraph(numeric_labels(n), {});

    int kmax = n - 1;
    if (alpha > 2.0) {
        double k = std::floor(std::pow(static_cast<double>(n), 1.0 / (alpha - 1.0)));
        kmax = std::max(1, std::min(n - 1, static_cast<int>(k)));
    }
    PowerlawSampler sampler(alpha, kmax);

    const int max_resamples = 50;
    for (int attempt = 0; attempt < max_resamples; ++attempt) {
        Rng rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(attempt), 0xdeafULL));
        std::vector<int> degrees(static_cast<std::size_t>(n));
        long long total = 0;
        for (int i = 0; i < n; ++i) {
            degrees[static_cast<std::size_t>(i)] = sampler.draw(rng);
            total += degrees[static_cast<std::size_t>(i)];
        }
        if (total % 2 != 0) {
            // Resample a single degree until the parity flips.
            bool fixed = false;
            for (int tries = 0; tries < 10000 && !fixed; ++tries) {
                std::size_t idx = static_cast<std::size_t>(next_below(rng, static_cast<std::uint64_t>(n)));
                int fresh = sampler.draw(rng);
                if ((fresh & 1) != (degrees[idx] & 1)) {
                    total += fresh - degrees[idx];
                    degrees[idx] = fresh;
                    fixed = true;
                }
            }
            if (!fixed) continue; // e.g. kmax == 1 with odd n: resample everything
        }

        if (wiring == SfWiring::chung_lu) {
            // Expected-degree wiring: P(i~j) = min(1, w_i w_j / sum w).
            const double s = static_cast<double>(total);
            std::vector<std::pair<int, int>> edges;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    double pij = static_cast<double>(degrees[static_cast<std::size_t>(i)]) *
                                 static_cast<double>(degrees[static_cast<std::size_t>(j)]) / s;
                    if (next_double(rng) < std::min(1.0, pij)) edges.emplace_back(i, j);
                }
            return LabeledGraph(numeric_labels(n), edges);
        }

        return LabeledGraph(numeric_labels(n), realize_configuration(degrees, rng));
    }
    throw std::runtime_error("scale_free: could not draw an even-sum degree sequence");
}

LabeledGraph generate(const GeneratorSpec& spec, std::uint64_t seed) {
    switch (spec.model) {
        case GraphModel::rg2d: return random_geometric(spec.n, spec.d, seed);
        case GraphModel::sf: return scale_free(spec.n, spec.alpha, seed, spec.wiring);
        case GraphModel::er: return erdos_renyi(spec.n, spec.p, seed);
    }
    throw std::invalid_argument("generate: unknown model");
}

LabeledGraph shuffle_edges(const LabeledGraph& g, double gamma, std::uint64_t seed,
                           RewireMode mode) {
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw std::invalid_argument("shuffle_edges: gamma must be in [0,1]");
    const int n = g.size();
    std::vector<std::pair<int, int>> edges = g.edges(); // canonical order
    const long long e = static_cast<long long>(edges.size());
    const long long m = static_cast<long long>(std::ceil(gamma * static_cast<double>(e)));
    Rng rng = make_rng(seed);
    if (m == 0) return LabeledGraph(g.labels(), edges);

    if (mode == RewireMode::degree_swaps) {
        // Double-edge swaps; each success rewires two edges.
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(edges.size() * 2);
        for (const auto& [i, j] : edges) seen.insert(edge_key(i, j, n));
        const long long target = (m + 1) / 2;
        long long done = 0;
        const long long max_attempts = 200 * target + 1000;
        for (long long attempt = 0; attempt < max_attempts && done < target; ++attempt) {
            if (edges.size() < 2) break;
            std::size_t s1 = static_cast<std::size_t>(next_below(rng, edges.size()));
            std::size_t s2 = static_cast<std::size_t>(next_below(rng, edges.size()));
            if (s1 == s2) continue;
            auto [a, b] = edges[s1];
            auto [c, d] = edges[s2];
            if (next_below(rng, 2) == 1) std::swap(c, d);
            // propose (a,c) and (b,d)
            if (a == c || b == d) continue;
            std::uint64_t k1 = edge_key(a, c, n), k2 = edge_key(b, d, n);
            if (k1 == k2 || seen.count(k1) || seen.count(k2)) continue;
            seen.erase(edge_key(a, b, n));
            seen.erase(edge_key(c, d, n));
            seen.insert(k1);
            seen.insert(k2);
            edges[s1] = {a, c};
            edges[s2] = {b, d};
            ++done;
        }
        return LabeledGraph(g.labels(), edges);
    }

    // delete_reinsert
    std::vector<int> doomed = sample_without_replacement(static_cast<int>(e), static_cast<int>(m), rng);
    std::vector<char> is_doomed(edges.size(), 0);
    for (int idx : doomed) is_doomed[static_cast<std::size_t>(idx)] = 1;
    std::vector<std::pair<int, int>> kept;
    kept.reserve(edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k)
        if (!is_doomed[k]) kept.push_back(edges[k]);

    const double total_pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    const long long non_edges = static_cast<long long>(total_pairs) - static_cast<long long>(kept.size());
    if (non_edges < m)
        throw std::invalid_argument("shuffle_edges: not enough non-edges to reinsert into");

    std::unordered_set<std::uint64_t> occupied;
    occupied.reserve(kept.size() * 2 + static_cast<std::size_t>(m) * 2);
    for (const auto& [i, j] : kept) occupied.insert(edge_key(i, j, n));

    const double kept_density = static_cast<double>(kept.size()) / total_pairs;
    if (kept_density <= 0.5) {
        // Rejection sampling: cheap while most pairs are free.
        long long inserted = 0;
        while (inserted < m) {
            int i = static_cast<int>(next_below(rng, static_cast<std::uint64_t>(n)));
            int j = static_cast<int>(next_below(rng, static_cast<std::uint64_t>(n)));
            if (i == j) continue;
            std::uint64_t key = edge_key(i, j, n);
            if (!occupied.insert(key).second) continue;
            kept.emplace_back(std::min(i, j), std::max(i, j));
            ++inserted;
        }
    } else {
        // Dense: enumerate free slots and sample without replacement.
        std::vector<std::pair<int, int>> free_slots;
        free_slots.reserve(static_cast<std::size_t>(non_edges));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (!occupied.count(edge_key(i, j, n))) free_slots.emplace_back(i, j);
        std::vector<int> pick = sample_without_replacement(static_cast<int>(free_slots.size()),
                                                           static_cast<int>(m), rng);
        for (int idx : pick) kept.push_back(free_slots[static_cast<std::size_t>(idx)]);
    }
    return LabeledGraph(g.labels(), kept);
}

PlantedPair plant_differential(const GeneratorSpec& spec, double gamma, int subnet_size,
                               std::uint64_t seed, RewireMode mode) {
    if (spec.model != GraphModel::rg2d)
        throw std::invalid_argument("plant_differential: parent model must be rg2d "
                                    "(the planted overlays resample its d)");
    if (subnet_size < 1 || subnet_size > spec.n)
        throw std::invalid_argument("plant_differential: need 1 <= subnet_size <= n");

    LabeledGraph base = random_geometric(spec.n, spec.d, derive_seed(seed, 1));
    LabeledGraph noisy = shuffle_edges(base, gamma, derive_seed(seed, 2), mode);

    Rng pick_rng = make_rng(derive_seed(seed, 3));
    std::vector<int> v_star = sample_without_replacement(spec.n, subnet_size, pick_rng);
    std::sort(v_star.begin(), v_star.end());
    std::vector<char> inside(static_cast<std::size_t>(spec.n), 0);
    for (int v : v_star) inside[static_cast<std::size_t>(v)] = 1;

    auto rebuild = [&](const LabeledGraph& g, std::uint64_t overlay_seed) {
        std::vector<std::pair<int, int>> edges;
        for (const auto& [i, j] : g.edges())
            if (!(inside[static_cast<std::size_t>(i)] && inside[static_cast<std::size_t>(j)]))
                edges.emplace_back(i, j);
        LabeledGraph overlay = random_geometric(subnet_size, spec.d, overlay_seed);
        for (const auto& [k, l] : overlay.edges())
            edges.emplace_back(v_star[static_cast<std::size_t>(k)],
                               v_star[static_cast<std::size_t>(l)]);
        return LabeledGraph(g.labels(), edges);
    };

    PlantedPair out;
    out.a = rebuild(base, derive_seed(seed, 4));
    out.b = rebuild(noisy, derive_seed(seed, 5));
    out.v_star = std::move(v_star);
    return out;
}

} // namespace ghd
