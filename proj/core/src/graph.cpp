#include "ghd/graph.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace ghd {

LabeledGraph::LabeledGraph(std::vector<std::string> labels,
                           const std::vector<std::pair<int, int>>& edges)
    : n_(static_cast<int>(labels.size())),
      words_((labels.size() + 63) / 64),
      labels_(std::move(labels)) {
    std::unordered_set<std::string> seen;
    seen.reserve(labels_.size());
    for (const auto& l : labels_) {
        if (!seen.insert(l).second)
            throw std::invalid_argument("LabeledGraph: duplicate label '" + l + "'");
    }
    rows_.assign(static_cast<std::size_t>(n_) * words_, 0);
    degrees_.assign(static_cast<std::size_t>(n_), 0);
    auto set_bit = [&](int i, int j) {
        std::uint64_t& w = rows_[static_cast<std::size_t>(i) * words_ + static_cast<std::size_t>(j >> 6)];
        std::uint64_t mask = 1ULL << (j & 63);
        if (w & mask) return false;
        w |= mask;
        return true;
    };
    for (const auto& [i, j] : edges) {
        if (i < 0 || i >= n_ || j < 0 || j >= n_) {
            std::ostringstream os;
            os << "LabeledGraph: edge (" << i << "," << j << ") out of range for n=" << n_;
            throw std::invalid_argument(os.str());
        }
        if (i == j) {
            std::ostringstream os;
            os << "LabeledGraph: self-loop on node " << i;
            throw std::invalid_argument(os.str());
        }
        bool fresh = set_bit(i, j);
        set_bit(j, i);
        if (fresh) {
            ++degrees_[static_cast<std::size_t>(i)];
            ++degrees_[static_cast<std::size_t>(j)];
            ++edge_count_;
        }
    }
}

void LabeledGraph::check_index(int i) const {
    if (i < 0 || i >= n_) {
        std::ostringstream os;
        os << "LabeledGraph: node index " << i << " out of range for n=" << n_;
        throw std::out_of_range(os.str());
    }
}

int LabeledGraph::index_of(const std::string& label) const {
    for (int i = 0; i < n_; ++i)
        if (labels_[static_cast<std::size_t>(i)] == label) return i;
    return -1;
}

std::vector<std::pair<int, int>> LabeledGraph::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(edge_count_));
    for (int i = 0; i < n_; ++i) {
        const std::uint64_t* row = row_bits(i);
        for (std::size_t w = static_cast<std::size_t>(i) / 64; w < words_; ++w) {
            std::uint64_t bits = row[w];
            if (w == static_cast<std::size_t>(i) / 64) {
                // keep only j > i within this word
                int shift = (i & 63) + 1;
                bits = shift >= 64 ? 0 : (bits >> shift) << shift;
            }
            while (bits) {
                int j = static_cast<int>(w * 64) + std::countr_zero(bits);
                out.emplace_back(i, j);
                bits &= bits - 1;
            }
        }
    }
    return out;
}

int LabeledGraph::common_neighbors(int i, int j) const {
    const std::uint64_t* a = row_bits(i);
    const std::uint64_t* b = row_bits(j);
    int count = 0;
    for (std::size_t w = 0; w < words_; ++w) count += std::popcount(a[w] & b[w]);
    // i/j themselves cannot contribute: no self-loops means bit i of row i is 0.
    return count;
}

LabeledGraph LabeledGraph::induced(const std::vector<int>& keep) const {
    std::unordered_map<int, int> pos;
    pos.reserve(keep.size());
    std::vector<std::string> labels;
    labels.reserve(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) {
        int i = keep[k];
        check_index(i);
        if (!pos.emplace(i, static_cast<int>(k)).second)
            throw std::invalid_argument("LabeledGraph::induced: duplicate node index");
        labels.push_back(labels_[static_cast<std::size_t>(i)]);
    }
    std::vector<std::pair<int, int>> edges;
    for (std::size_t k = 0; k < keep.size(); ++k) {
        for (std::size_t l = k + 1; l < keep.size(); ++l) {
            if (has_edge(keep[k], keep[l]))
                edges.emplace_back(static_cast<int>(k), static_cast<int>(l));
        }
    }
    return LabeledGraph(std::move(labels), edges);
}

LabeledGraph LabeledGraph::remove_node(int i) const {
    check_index(i);
    std::vector<int> keep;
    keep.reserve(static_cast<std::size_t>(n_ > 0 ? n_ - 1 : 0));
    for (int k = 0; k < n_; ++k)
        if (k != i) keep.push_back(k);
    return induced(keep);
}

LabeledGraph align_to(const std::vector<std::string>& ref_labels, const LabeledGraph& g) {
    std::unordered_map<std::string, int> where;
    where.reserve(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i) where.emplace(g.label(i), i);

    std::vector<int> order;
    order.reserve(ref_labels.size());
    std::vector<std::string> only_ref, only_g;
    for (const auto& l : ref_labels) {
        auto it = where.find(l);
        if (it == where.end())
            only_ref.push_back(l);
        else
            order.push_back(it->second);
    }
    if (only_ref.empty() && ref_labels.size() == static_cast<std::size_t>(g.size()))
        return g.induced(order);

    std::unordered_set<std::string> ref_set(ref_labels.begin(), ref_labels.end());
    for (const auto& l : g.labels())
        if (!ref_set.count(l)) only_g.push_back(l);
    std::sort(only_ref.begin(), only_ref.end());
    std::sort(only_g.begin(), only_g.end());
    std::ostringstream os;
    os << "node sets differ;";
    if (!only_ref.empty()) {
        os << " missing from second graph:";
        for (const auto& l : only_ref) os << ' ' << l;
        os << ';';
    }
    if (!only_g.empty()) {
        os << " extra in second graph:";
        for (const auto& l : only_g) os << ' ' << l;
    }
    throw std::invalid_argument(os.str());
}

} // namespace ghd
