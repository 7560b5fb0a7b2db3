#include "ghd/stat.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ghd/detail/kahan.hpp"
#include "ghd/parallel.hpp"
#include "ghd/rng.hpp"

namespace ghd {

namespace {

void require_same_n(int na, int nb, const char* what) {
    if (na != nb)
        throw std::invalid_argument(std::string(what) + ": dimensions differ (" +
                                    std::to_string(na) + " vs " + std::to_string(nb) + ")");
}

// Squared-difference mean over ordered distinct pairs for any symmetric
// accessor pair.
template <typename GetA, typename GetB>
double pair_mean_sqdiff(int n, GetA&& av, GetB&& bv) {
    if (n < 2) return 0.0;
    detail::Kahan acc;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double d = av(i, j) - bv(i, j);
            acc.add(d * d);
        }
    return 2.0 * acc.value() / (static_cast<double>(n) * static_cast<double>(n - 1));
}

template <typename Get>
MomentTerms accumulate_terms(int n, Get&& get) {
    MomentTerms m;
    detail::Kahan s1, s2, t;
    std::vector<double> row(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        detail::Kahan r;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double v = get(i, j);
            r.add(v);
            if (j > i) {
                s1.add(2.0 * v);
                s2.add(2.0 * v * v);
            }
        }
        row[static_cast<std::size_t>(i)] = r.value();
    }
    for (int i = 0; i < n; ++i) {
        double r = row[static_cast<std::size_t>(i)];
        t.add(r * r);
    }
    m.s1 = s1.value();
    m.s2 = s2.value();
    m.t = t.value();
    m.a = m.s1 * m.s1;
    m.b = m.t - m.s2;
    m.c = m.a + 2.0 * m.s2 - 4.0 * m.t;
    return m;
}

} // namespace

PermutationMoments moments_from_terms(int n, MomentTerms ta, MomentTerms tb) {
    if (n < 4)
        throw std::domain_error("permutation_moments: need N >= 4, got N = " + std::to_string(n));
    const double nn = static_cast<double>(n);
    const double m = nn * (nn - 1.0);

    PermutationMoments out;
    out.terms_a = ta;
    out.terms_b = tb;
    out.mu = (ta.s2 + tb.s2) / m - 2.0 * ta.s1 * tb.s1 / (m * m);

    // The four bracketed terms are assembled first; the common factor
    // 4 / (N^3 (N-1)^3) is applied once at the end.
    const double t1 = 2.0 * ta.s2 * tb.s2;
    const double t2 = 4.0 * ta.b * tb.b / (nn - 2.0);
    const double t3 = ta.c * tb.c / ((nn - 2.0) * (nn - 3.0));
    const double t4 = ta.a * tb.a / m;
    double sigma2 = 4.0 * (((t1 + t2) + t3) - t4) / (m * m * m);
    if (sigma2 < 0.0) {
        if (sigma2 < -1e-12)
            throw std::runtime_error("permutation_moments: variance " + std::to_string(sigma2) +
                                     " negative beyond tolerance");
        sigma2 = 0.0;
    }
    out.sigma2 = sigma2;
    return out;
}

double ghd(const CenteredWeights& a, const CenteredWeights& b) {
    require_same_n(a.n(), b.n(), "ghd");
    return pair_mean_sqdiff(a.n(), [&](int i, int j) { return a.values(i, j); },
                            [&](int i, int j) { return b.values(i, j); });
}

double ghd_raw(const WeightMatrix& a, const WeightMatrix& b) {
    require_same_n(a.n(), b.n(), "ghd_raw");
    return pair_mean_sqdiff(a.n(), [&](int i, int j) { return a.values(i, j); },
                            [&](int i, int j) { return b.values(i, j); });
}

double ghd_permuted(const WeightMatrix& a, const WeightMatrix& b, const std::vector<int>& perm) {
    require_same_n(a.n(), b.n(), "ghd_permuted");
    if (static_cast<int>(perm.size()) != a.n())
        throw std::invalid_argument("ghd_permuted: permutation length mismatch");
    return pair_mean_sqdiff(a.n(),
                            [&](int i, int j) {
                                return a.values(perm[static_cast<std::size_t>(i)],
                                                perm[static_cast<std::size_t>(j)]);
                            },
                            [&](int i, int j) { return b.values(i, j); });
}

long long hamming_distance(const LabeledGraph& a, const LabeledGraph& b) {
    if (!a.same_labels(b))
        throw std::invalid_argument("hamming_distance: node labels differ; align graphs first");
    long long ordered = 0;
    const std::size_t words = a.row_words();
    for (int i = 0; i < a.size(); ++i) {
        const std::uint64_t* ra = a.row_bits(i);
        const std::uint64_t* rb = b.row_bits(i);
        for (std::size_t w = 0; w < words; ++w) ordered += std::popcount(ra[w] ^ rb[w]);
    }
    return ordered / 2;
}

PermutationMoments permutation_moments(const WeightMatrix& a, const WeightMatrix& b) {
    require_same_n(a.n(), b.n(), "permutation_moments");
    const int n = a.n();
    return moments_from_terms(n,
                              accumulate_terms(n, [&](int i, int j) { return a.values(i, j); }),
                              accumulate_terms(n, [&](int i, int j) { return b.values(i, j); }));
}

PermutationMoments permutation_moments(const CenteredWeights& a, const CenteredWeights& b) {
    require_same_n(a.n(), b.n(), "permutation_moments");
    const int n = a.n();
    return moments_from_terms(n,
                              accumulate_terms(n, [&](int i, int j) { return a.values(i, j); }),
                              accumulate_terms(n, [&](int i, int j) { return b.values(i, j); }));
}

NormalityDiagnostic normality_diagnostic(const CenteredWeights& w) {
    detail::Kahan sq, cube;
    for (double s : w.row_sums) {
        sq.add(s * s);
        cube.add(s * s * s);
    }
    NormalityDiagnostic d;
    const double denom = sq.value();
    if (denom <= 0.0) {
        d.defined = false;
        d.ratio = 0.0;
        return d;
    }
    const double num = cube.value();
    d.defined = true;
    d.ratio = (num * num) / (denom * denom * denom);
    return d;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

TestResult ghd_test(const LabeledGraph& a, const LabeledGraph& b, WeightScheme scheme,
                    int n_workers) {
    if (!a.same_labels(b))
        throw std::invalid_argument("ghd_test: graphs must share the same labelled node set "
                                    "in the same order (use align_to)");
    if (a.size() < 4)
        throw std::domain_error("ghd_test: need at least 4 nodes, got " + std::to_string(a.size()));

    const CenteredWeights ca = center(make_weights(a, scheme, n_workers));
    const CenteredWeights cb = center(make_weights(b, scheme, n_workers));

    TestResult r;
    r.n = a.size();
    r.scheme = scheme;
    r.statistic = ghd(ca, cb);
    const PermutationMoments pm = permutation_moments(ca, cb);
    r.mu = pm.mu;
    r.sigma2 = pm.sigma2;
    r.diag_a = normality_diagnostic(ca);
    r.diag_b = normality_diagnostic(cb);

    if (r.sigma2 > 0.0) {
        r.z = (r.statistic - r.mu) / std::sqrt(r.sigma2);
        r.p_association = normal_cdf(r.z);
        r.p_divergence = normal_cdf(-r.z);
        r.degenerate = false;
    } else {
        r.degenerate = true;
        const double scale = std::max({1.0, std::abs(r.statistic), std::abs(r.mu)});
        if (std::abs(r.statistic - r.mu) <= 1e-12 * scale) {
            // Degenerate but consistent: every permutation gives the same value.
            r.z = 0.0;
            r.p_association = 1.0;
            r.p_divergence = 1.0;
        } else {
            r.z = std::numeric_limits<double>::quiet_NaN();
            r.p_association = std::numeric_limits<double>::quiet_NaN();
            r.p_divergence = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return r;
}

MonteCarloPValue monte_carlo_pvalue(const WeightMatrix& a, const WeightMatrix& b,
                                    long long n_perm, std::uint64_t seed, int n_workers) {
    require_same_n(a.n(), b.n(), "monte_carlo_pvalue");
    if (n_perm < 1) throw std::invalid_argument("monte_carlo_pvalue: n_perm must be >= 1");
    const int n = a.n();

    MonteCarloPValue out;
    out.n_perm = n_perm;
    out.observed = ghd_raw(a, b);

    std::vector<std::uint8_t> le(static_cast<std::size_t>(n_perm), 0);
    parallel_for(n_perm, n_workers, [&](std::int64_t k) {
        Rng rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
        std::vector<int> perm = random_permutation(n, rng);
        le[static_cast<std::size_t>(k)] = ghd_permuted(a, b, perm) <= out.observed ? 1 : 0;
    });
    long long count = 0;
    for (std::uint8_t f : le) count += f;

    out.p_value = static_cast<double>(1 + count) / static_cast<double>(n_perm + 1);
    out.std_error = std::sqrt(out.p_value * (1.0 - out.p_value) / static_cast<double>(n_perm));
    return out;
}

std::vector<double> exact_permutation_distribution(const WeightMatrix& a, const WeightMatrix& b) {
    require_same_n(a.n(), b.n(), "exact_permutation_distribution");
    const int n = a.n();
    if (n > 8)
        throw std::invalid_argument("exact_permutation_distribution: N = " + std::to_string(n) +
                                    " exceeds the N <= 8 exhaustive limit");
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> values;
    do {
        values.push_back(ghd_permuted(a, b, perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return values;
}

} // namespace ghd
