#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ghd/graph.hpp"

namespace ghd {

/// Dense symmetric matrix storing the upper triangle (diagonal included) and
/// mirroring on read.  Weight matrices are dense even for sparse graphs, so
/// packed storage halves the footprint (n up to ~30,000 is the design target:
/// ~3.6 GB packed).
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int n, double fill = 0.0)
        : n_(n), v_(static_cast<std::size_t>(n) * (static_cast<std::size_t>(n) + 1) / 2, fill) {}

    int n() const { return n_; }

    double operator()(int i, int j) const { return v_[pack(i, j)]; }
    double& at(int i, int j) { return v_[pack(i, j)]; }

    const std::vector<double>& packed() const { return v_; }
    std::vector<double>& packed() { return v_; }

private:
    std::size_t pack(int i, int j) const {
        if (i > j) std::swap(i, j);
        std::size_t si = static_cast<std::size_t>(i);
        std::size_t sj = static_cast<std::size_t>(j);
        std::size_t sn = static_cast<std::size_t>(n_);
        return si * sn - si * (si + 1) / 2 + sj;
    }

    int n_ = 0;
    std::vector<double> v_;
};

enum class WeightScheme { adjacency, topological_overlap };

std::string to_string(WeightScheme s);
WeightScheme weight_scheme_from_string(const std::string& s);

/// Symmetric edge-weight matrix in [0,1] with unit diagonal, tagged with the
/// scheme that produced it.
struct WeightMatrix {
    SymMatrix values;
    WeightScheme scheme = WeightScheme::adjacency;

    int n() const { return values.n(); }
};

/// Raw adjacency as weights (unit diagonal by convention).
WeightMatrix adjacency_weights(const LabeledGraph& g);

/// One-step topological overlap:
///   w_ij = (common_neighbors(i,j) + A_ij) / (min(d_i, d_j) + 1 - A_ij),  i != j
///   w_ii = 1
/// The denominator uses the degree of whichever endpoint has fewer
/// neighbours; subtracting A_ij from both degrees before the min gives the
/// identical integer, and tests hold the two formulations equal.
WeightMatrix topological_overlap(const LabeledGraph& g, int n_workers = 1);

WeightMatrix make_weights(const LabeledGraph& g, WeightScheme scheme, int n_workers = 1);

/// Weights centred by the off-diagonal mean: w'_ij = w_ij - mean.  The
/// diagonal is zeroed (it never enters any statistic), and per-node row sums
/// of the centred off-diagonal entries are kept for the normality diagnostic.
struct CenteredWeights {
    SymMatrix values;      // centred off-diagonal entries, zero diagonal
    std::vector<double> row_sums;
    double mean = 0.0;     // the subtracted off-diagonal mean
    WeightScheme scheme = WeightScheme::adjacency;

    int n() const { return values.n(); }
};

CenteredWeights center(const WeightMatrix& w);

} // namespace ghd
