#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ghd {

/// Simple undirected graph with opaque string node labels.
///
/// Nodes are addressed by dense index 0..size()-1 internally; labels are the
/// external identity (file formats, subnetwork output).  Instances are
/// immutable after construction and safe to share across threads.
/// Adjacency is stored as packed bit rows, so neighbourhood intersections
/// (common-neighbour counts) are popcount loops.
class LabeledGraph {
public:
    LabeledGraph() = default;

    /// Build from labels and an index edge list.  Throws std::invalid_argument
    /// on duplicate labels, out-of-range endpoints, or self-loops.  Duplicate
    /// edges collapse silently (adjacency is a set).
    LabeledGraph(std::vector<std::string> labels,
                 const std::vector<std::pair<int, int>>& edges);

    int size() const { return n_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int i) const { return labels_[static_cast<std::size_t>(i)]; }

    /// Index of `label`, or -1 when absent.
    int index_of(const std::string& label) const;

    bool has_edge(int i, int j) const {
        check_index(i);
        check_index(j);
        return (rows_[static_cast<std::size_t>(i) * words_ + static_cast<std::size_t>(j >> 6)] >>
                (j & 63)) & 1ULL;
    }

    int degree(int i) const {
        check_index(i);
        return degrees_[static_cast<std::size_t>(i)];
    }
    const std::vector<int>& degrees() const { return degrees_; }

    long long edge_count() const { return edge_count_; }

    /// Edges as index pairs with i < j, sorted lexicographically.
    std::vector<std::pair<int, int>> edges() const;

    /// Number of common neighbours of i and j (i and j themselves never count
    /// because the graph has no self-loops).
    int common_neighbors(int i, int j) const;

    /// Words per adjacency bit row.
    std::size_t row_words() const { return words_; }
    const std::uint64_t* row_bits(int i) const {
        check_index(i);
        return rows_.data() + static_cast<std::size_t>(i) * words_;
    }

    /// Induced subgraph on `keep` (indices into this graph, preserving the
    /// order given).  Throws on out-of-range or duplicate indices.
    LabeledGraph induced(const std::vector<int>& keep) const;

    /// Copy with node i removed; labels of the remaining nodes are preserved.
    LabeledGraph remove_node(int i) const;

    bool same_labels(const LabeledGraph& other) const { return labels_ == other.labels_; }

private:
    void check_index(int i) const;

    int n_ = 0;
    std::size_t words_ = 0;
    long long edge_count_ = 0;
    std::vector<std::string> labels_;
    std::vector<std::uint64_t> rows_;
    std::vector<int> degrees_;
};

/// Reorder `g` so its labels appear in exactly `ref_labels` order.  Throws
/// std::invalid_argument listing the symmetric difference when the label sets
/// do not match.
LabeledGraph align_to(const std::vector<std::string>& ref_labels, const LabeledGraph& g);

} // namespace ghd
