#pragma once

#include <cstdint>
#include <vector>

#include "ghd/graph.hpp"
#include "ghd/weights.hpp"

namespace ghd {

/// Generalised Hamming distance between centred weight matrices:
///   GHD = (1/(N(N-1))) * sum_{i != j} (a'_ij - b'_ij)^2.
double ghd(const CenteredWeights& a, const CenteredWeights& b);

/// Plug-in GHD on raw weights, (1/(N(N-1))) * sum_{i != j} (a_ij - b_ij)^2.
/// Differs from the centred value by exactly (mean_a - mean_b)^2, a constant
/// over label permutations, so standardised scores are identical either way.
double ghd_raw(const WeightMatrix& a, const WeightMatrix& b);

/// Plug-in GHD after relabelling the first matrix by `perm`
/// (entry (i,j) of the permuted matrix is a[perm[i]][perm[j]]).
double ghd_permuted(const WeightMatrix& a, const WeightMatrix& b, const std::vector<int>& perm);

/// Classical Hamming distance (1/2) tr[(A-B)^2] = number of discrepant edges.
long long hamming_distance(const LabeledGraph& a, const LabeledGraph& b);

/// Per-matrix sums entering the closed-form permutation moments, over
/// ordered distinct index pairs (diagonal excluded):
///   s1 = sum w_ij,  s2 = sum w_ij^2,  t = sum_i (row sum_i)^2,
///   a = s1^2,  b = t - s2,  c = a + 2*s2 - 4*t.
struct MomentTerms {
    double s1 = 0.0, s2 = 0.0, t = 0.0;
    double a = 0.0, b = 0.0, c = 0.0;
};

/// Exact mean/variance of the plug-in GHD under uniformly random joint
/// row/column permutation of the first matrix.  Exact for the permutation
/// distribution of the plug-in GHD of whatever matrices the sums were taken
/// from (raw in, raw-GHD moments out; centred in, centred-GHD moments out).
struct PermutationMoments {
    double mu = 0.0;
    double sigma2 = 0.0;
    MomentTerms terms_a, terms_b;
};

PermutationMoments permutation_moments(const WeightMatrix& a, const WeightMatrix& b);
PermutationMoments permutation_moments(const CenteredWeights& a, const CenteredWeights& b);

/// Moments assembled from precomputed per-matrix sums (requires n >= 4).
/// Negative variances within -1e-12 (exact-cancellation cases) clamp to 0.
PermutationMoments moments_from_terms(int n, MomentTerms ta, MomentTerms tb);

/// Finite-sample Berry-Esseen-style diagnostic for the normal approximation:
///   ratio = (sum_i s_i^3)^2 / (sum_i s_i^2)^3
/// over centred row sums s_i.  Small ratios indicate the standardised GHD is
/// close to normal; for power-law degree graphs the ratio decays like
/// N^(alpha-2).  Undefined when all row sums vanish.
struct NormalityDiagnostic {
    double ratio = 0.0;
    bool defined = false;
};

NormalityDiagnostic normality_diagnostic(const CenteredWeights& w);

/// Result of the standardised GHD independence test.  The association
/// direction (atypically small GHD, lower tail) is the headline p-value;
/// the divergence direction is reported alongside.
struct TestResult {
    int n = 0;
    WeightScheme scheme = WeightScheme::topological_overlap;
    double statistic = 0.0;   // centred GHD
    double mu = 0.0;          // permutation mean (centred convention)
    double sigma2 = 0.0;      // permutation variance
    double z = 0.0;
    double p_association = 0.0; // P(Z <= z)
    double p_divergence = 0.0;  // P(Z >= z)
    NormalityDiagnostic diag_a, diag_b;
    bool degenerate = false;  // sigma2 == 0; p-values undefined unless statistic == mu
};

/// Standardised GHD test between two graphs on the same labelled node set
/// (same label order; use align_to first if needed).  Requires N >= 4.
TestResult ghd_test(const LabeledGraph& a, const LabeledGraph& b, WeightScheme scheme,
                    int n_workers = 1);

/// Monte-Carlo permutation p-value (association tail), using the add-one
/// estimator p = (1 + #[GHD_pi <= GHD_obs]) / (n_perm + 1).  Permutations are
/// drawn from per-index derived streams, so the result depends only on
/// (matrices, n_perm, seed), not on the worker count.
struct MonteCarloPValue {
    double p_value = 0.0;
    double std_error = 0.0;   // binomial sqrt(p(1-p)/n_perm)
    long long n_perm = 0;
    double observed = 0.0;
};

MonteCarloPValue monte_carlo_pvalue(const WeightMatrix& a, const WeightMatrix& b,
                                    long long n_perm, std::uint64_t seed, int n_workers = 1);

/// All N! plug-in GHD values under joint row/column permutation of the first
/// matrix.  Refuses N > 8 (8! = 40,320 values).
std::vector<double> exact_permutation_distribution(const WeightMatrix& a, const WeightMatrix& b);

/// Standard normal CDF (high-accuracy tails via erfc).
double normal_cdf(double z);

} // namespace ghd
