#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ghd/graph.hpp"

namespace ghd {

/// Samples-by-features numeric matrix (rows = samples, columns = features).
/// Feature labels become network nodes on inference.
struct DataMatrix {
    std::vector<std::string> samples;
    std::vector<std::string> features;
    std::vector<double> values; // row-major, samples.size() x features.size()

    int n_samples() const { return static_cast<int>(samples.size()); }
    int n_features() const { return static_cast<int>(features.size()); }
    double value(int sample, int feature) const {
        return values[static_cast<std::size_t>(sample) * features.size() +
                      static_cast<std::size_t>(feature)];
    }
};

enum class MatrixFormat { autodetect, csv, tsv };
enum class MissingPolicy { error, drop_feature };

struct LoadedMatrix {
    DataMatrix data;
    std::vector<std::string> dropped_missing; // features removed by drop_feature policy
};

/// Parse a delimited numeric matrix: header row = corner cell + feature
/// labels, each body row = sample label + one numeric cell per feature.
/// Empty cells and NA/NaN tokens count as missing; the policy decides whether
/// they are an error or drop the whole feature column.  Errors are
/// std::invalid_argument prefixed with "origin:line:".
LoadedMatrix read_matrix(std::istream& in, const std::string& origin,
                         MatrixFormat format = MatrixFormat::autodetect,
                         MissingPolicy policy = MissingPolicy::error);

LoadedMatrix read_matrix_file(const std::string& path,
                              MatrixFormat format = MatrixFormat::autodetect,
                              MissingPolicy policy = MissingPolicy::error);

struct CorrelationNetworkOptions {
    double b = 12.0;   // soft-threshold exponent
    double tau = 0.2;  // hard edge threshold, strict
    int max_features = 5000;
    bool allow_large = false; // override the max_features guard
    int n_workers = 1;
    bool keep_omega = false;  // retain the pairwise adjacency measures for audit
};

struct CorrelationNetwork {
    LabeledGraph graph;                     // nodes = retained features
    std::vector<std::string> dropped_const; // zero-variance features, removed
    // Upper-triangle (i<j) omega values over retained features when
    // keep_omega was set; empty otherwise.
    std::vector<double> omega;
};

/// Correlation network: omega_ij = |(1 + cor(g_i, g_j)) / 2|^b, edge iff
/// omega > tau (strict).  Pearson correlation per feature pair; zero-variance
/// features are dropped (reported, not fatal).  Needs >= 3 samples.
CorrelationNetwork correlation_adjacency(const DataMatrix& data,
                                         const CorrelationNetworkOptions& opt = {});

} // namespace ghd
