#include "ghd/baselines.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ghd/netgen.hpp"
#include "ghd/parallel.hpp"
#include "ghd/rng.hpp"
#include "ghd/stat.hpp"

namespace ghd {

namespace {

void require_aligned(const LabeledGraph& a, const LabeledGraph& b, const char* what) {
    if (!a.same_labels(b))
        throw std::invalid_argument(std::string(what) +
                                    ": graphs must share the same labelled node set (use align_to)");
}

// Shared (unordered) edge count via row AND popcounts.
long long shared_edges(const LabeledGraph& a, const LabeledGraph& b) {
    long long ordered = 0;
    const std::size_t words = a.row_words();
    for (int i = 0; i < a.size(); ++i) {
        const std::uint64_t* ra = a.row_bits(i);
        const std::uint64_t* rb = b.row_bits(i);
        for (std::size_t w = 0; w < words; ++w) ordered += std::popcount(ra[w] & rb[w]);
    }
    return ordered / 2;
}

inline int bit_at(const std::uint64_t* row, int j) {
    return static_cast<int>((row[static_cast<std::size_t>(j >> 6)] >> (j & 63)) & 1ULL);
}

// Mismatch (MAD numerator) and overlap (QAP numerator) counts after
// relabelling `a` by perm, over unordered pairs.
struct PairCounts {
    long long mismatch = 0;
    long long overlap = 0;
};

PairCounts permuted_counts(const LabeledGraph& a, const LabeledGraph& b,
                           const std::vector<int>& perm) {
    PairCounts c;
    const int n = a.size();
    for (int i = 0; i < n; ++i) {
        const std::uint64_t* rb = b.row_bits(i);
        const std::uint64_t* ra = a.row_bits(perm[static_cast<std::size_t>(i)]);
        for (int j = i + 1; j < n; ++j) {
            int av = bit_at(ra, perm[static_cast<std::size_t>(j)]);
            int bv = bit_at(rb, j);
            c.mismatch += av ^ bv;
            c.overlap += av & bv;
        }
    }
    return c;
}

double pair_count_to_mean(long long unordered_count, int n) {
    return 2.0 * static_cast<double>(unordered_count) /
           (static_cast<double>(n) * static_cast<double>(n - 1));
}

} // namespace

std::string to_string(BaselineMethod m) {
    switch (m) {
        case BaselineMethod::mad: return "MAD";
        case BaselineMethod::qap: return "QAP";
        case BaselineMethod::cug: return "CUG";
    }
    return "?";
}

double mad(const LabeledGraph& a, const LabeledGraph& b) {
    require_aligned(a, b, "mad");
    return pair_count_to_mean(hamming_distance(a, b), a.size());
}

double qap(const LabeledGraph& a, const LabeledGraph& b) {
    require_aligned(a, b, "qap");
    return pair_count_to_mean(shared_edges(a, b), a.size());
}

double gcor(const LabeledGraph& a, const LabeledGraph& b) {
    require_aligned(a, b, "gcor");
    const int n = a.size();
    if (n < 2) throw std::domain_error("gcor: need at least 2 nodes");
    const double m = static_cast<double>(n) * static_cast<double>(n - 1);
    const double max_edges = m / 2.0;
    const double ea = static_cast<double>(a.edge_count());
    const double eb = static_cast<double>(b.edge_count());
    if (ea == 0.0 || ea == max_edges || eb == 0.0 || eb == max_edges)
        throw std::domain_error("gcor: undefined for constant adjacency (empty or complete graph)");
    // sum (A - mean_A)(B - mean_B) over ordered distinct pairs
    return 2.0 * static_cast<double>(shared_edges(a, b)) - 4.0 * ea * eb / m;
}

BaselineResult permutation_test(BaselineMethod method, const LabeledGraph& a,
                                const LabeledGraph& b, long long n_perm, std::uint64_t seed,
                                int n_workers) {
    if (method != BaselineMethod::mad && method != BaselineMethod::qap)
        throw std::invalid_argument("permutation_test: method must be MAD or QAP");
    require_aligned(a, b, "permutation_test");
    if (n_perm < 1) throw std::invalid_argument("permutation_test: n_perm must be >= 1");
    const int n = a.size();

    const long long obs_mismatch = hamming_distance(a, b);
    const long long obs_overlap = shared_edges(a, b);

    std::vector<std::uint8_t> hit(static_cast<std::size_t>(n_perm), 0);
    parallel_for(n_perm, n_workers, [&](std::int64_t k) {
        Rng rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
        std::vector<int> perm = random_permutation(n, rng);
        PairCounts c = permuted_counts(a, b, perm);
        // Association direction: similar graphs have small MAD, large QAP.
        bool extreme = method == BaselineMethod::mad ? c.mismatch <= obs_mismatch
                                                     : c.overlap >= obs_overlap;
        hit[static_cast<std::size_t>(k)] = extreme ? 1 : 0;
    });
    long long count = 0;
    for (std::uint8_t f : hit) count += f;

    BaselineResult r;
    r.method = method;
    r.statistic = method == BaselineMethod::mad ? pair_count_to_mean(obs_mismatch, n)
                                                : pair_count_to_mean(obs_overlap, n);
    r.p_value = static_cast<double>(1 + count) / static_cast<double>(n_perm + 1);
    r.n_draws = n_perm;
    r.seed = seed;
    return r;
}

BaselineResult cug_test(const LabeledGraph& a, const LabeledGraph& b, long long n_sim,
                        std::uint64_t seed, int n_workers) {
    require_aligned(a, b, "cug_test");
    if (n_sim < 1) throw std::invalid_argument("cug_test: n_sim must be >= 1");
    const int n = a.size();

    BaselineResult r;
    r.method = BaselineMethod::cug;
    r.n_draws = n_sim;
    r.seed = seed;

    double observed;
    try {
        observed = gcor(a, b);
    } catch (const std::domain_error&) {
        r.degenerate = true;
        r.statistic = std::numeric_limits<double>::quiet_NaN();
        r.p_value = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    r.statistic = observed;

    const double max_edges = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    const double pa = static_cast<double>(a.edge_count()) / max_edges;
    const double pb = static_cast<double>(b.edge_count()) / max_edges;

    // 0: not usable (degenerate simulated gcor), 1: |gcor| >= |observed|, 2: below.
    std::vector<std::uint8_t> outcome(static_cast<std::size_t>(n_sim), 0);
    parallel_for(n_sim, n_workers, [&](std::int64_t k) {
        LabeledGraph ga = erdos_renyi(n, pa, derive_seed(seed, static_cast<std::uint64_t>(k), 1));
        LabeledGraph gb = erdos_renyi(n, pb, derive_seed(seed, static_cast<std::uint64_t>(k), 2));
        try {
            double g = gcor(ga, gb);
            outcome[static_cast<std::size_t>(k)] =
                std::abs(g) >= std::abs(observed) ? 1 : 2;
        } catch (const std::domain_error&) {
            outcome[static_cast<std::size_t>(k)] = 0;
        }
    });
    long long usable = 0, extreme = 0;
    for (std::uint8_t o : outcome) {
        if (o != 0) ++usable;
        if (o == 1) ++extreme;
    }
    if (usable == 0) {
        r.degenerate = true;
        r.p_value = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    r.p_value = static_cast<double>(1 + extreme) / static_cast<double>(usable + 1);
    return r;
}

} // namespace ghd
