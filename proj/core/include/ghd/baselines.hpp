#pragma once

#include <cstdint>
#include <string>

#include "ghd/graph.hpp"

namespace ghd {

/// Mean absolute difference of adjacency entries over ordered distinct pairs.
/// Equals 2*HD / (N(N-1)); small values mean similar graphs.
double mad(const LabeledGraph& a, const LabeledGraph& b);

/// Mean adjacency product over ordered distinct pairs (edge-overlap density).
/// Large values mean similar graphs.
double qap(const LabeledGraph& a, const LabeledGraph& b);

/// Unnormalised product-moment graph correlation
///   sum_{i != j} (A_ij - mean_A)(B_ij - mean_B).
/// Throws std::domain_error when either adjacency is constant (empty or
/// complete graph), where the quantity is undefined.
double gcor(const LabeledGraph& a, const LabeledGraph& b);

enum class BaselineMethod { mad, qap, cug };

std::string to_string(BaselineMethod m);

struct BaselineResult {
    BaselineMethod method = BaselineMethod::mad;
    double statistic = 0.0;
    double p_value = 0.0;      // association direction (MAD small, QAP large, CUG two-sided)
    long long n_draws = 0;     // permutations or null simulations
    std::uint64_t seed = 0;
    bool degenerate = false;   // CUG with undefined observed gcor
};

/// Label-permutation test for MAD or QAP with the add-one estimator.
/// Association direction: MAD counts permuted values <= observed, QAP counts
/// permuted values >= observed.
BaselineResult permutation_test(BaselineMethod method, const LabeledGraph& a,
                                const LabeledGraph& b, long long n_perm, std::uint64_t seed,
                                int n_workers = 1);

/// Conditional-uniform-graph test: simulates pairs of Erdos-Renyi graphs
/// matching each input's size and density, compares |gcor| two-sided with
/// add-one smoothing.  A degenerate observed gcor (constant adjacency) is
/// flagged rather than thrown.
BaselineResult cug_test(const LabeledGraph& a, const LabeledGraph& b, long long n_sim,
                        std::uint64_t seed, int n_workers = 1);

} // namespace ghd
