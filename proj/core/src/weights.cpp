#include "ghd/weights.hpp"

#include <bit>
#include <stdexcept>

#include "ghd/detail/kahan.hpp"
#include "ghd/parallel.hpp"

namespace ghd {

std::string to_string(WeightScheme s) {
    return s == WeightScheme::adjacency ? "adjacency" : "to";
}

WeightScheme weight_scheme_from_string(const std::string& s) {
    if (s == "adjacency" || s == "adj") return WeightScheme::adjacency;
    if (s == "to" || s == "topological_overlap") return WeightScheme::topological_overlap;
    throw std::invalid_argument("unknown weight scheme '" + s + "' (expected 'to' or 'adjacency')");
}

WeightMatrix adjacency_weights(const LabeledGraph& g) {
    const int n = g.size();
    WeightMatrix w{SymMatrix(n), WeightScheme::adjacency};
    for (int i = 0; i < n; ++i) {
        w.values.at(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j)
            if (g.has_edge(i, j)) w.values.at(i, j) = 1.0;
    }
    return w;
}

WeightMatrix topological_overlap(const LabeledGraph& g, int n_workers) {
    const int n = g.size();
    WeightMatrix w{SymMatrix(n), WeightScheme::topological_overlap};
    const std::size_t words = g.row_words();
    std::vector<double>& packed = w.values.packed();

    parallel_for(n, n_workers, [&](std::int64_t row) {
        const int i = static_cast<int>(row);
        const std::uint64_t* ri = g.row_bits(i);
        const int di = g.degree(i);
        // packed offset of (i, i)
        std::size_t base = static_cast<std::size_t>(i) * static_cast<std::size_t>(n) -
                           static_cast<std::size_t>(i) * (static_cast<std::size_t>(i) + 1) / 2;
        packed[base + static_cast<std::size_t>(i)] = 1.0;
        for (int j = i + 1; j < n; ++j) {
            const std::uint64_t* rj = g.row_bits(j);
            int common = 0;
            for (std::size_t k = 0; k < words; ++k) common += std::popcount(ri[k] & rj[k]);
            const int aij = static_cast<int>((ri[static_cast<std::size_t>(j >> 6)] >> (j & 63)) & 1ULL);
            const int dj = g.degree(j);
            const int denom = (di < dj ? di : dj) + 1 - aij;
            packed[base + static_cast<std::size_t>(j)] =
                static_cast<double>(common + aij) / static_cast<double>(denom);
        }
    });
    return w;
}

WeightMatrix make_weights(const LabeledGraph& g, WeightScheme scheme, int n_workers) {
    return scheme == WeightScheme::adjacency ? adjacency_weights(g)
                                             : topological_overlap(g, n_workers);
}

CenteredWeights center(const WeightMatrix& w) {
    const int n = w.n();
    CenteredWeights c;
    c.scheme = w.scheme;
    c.values = SymMatrix(n);
    c.row_sums.assign(static_cast<std::size_t>(n), 0.0);
    if (n < 2) {
        c.mean = 0.0;
        return c;
    }

    detail::Kahan total;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) total.add(w.values(i, j));
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
    c.mean = 2.0 * total.value() / pairs; // ordered-pair mean == unordered mean

    std::vector<detail::Kahan> rows(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double v = w.values(i, j) - c.mean;
            c.values.at(i, j) = v;
            rows[static_cast<std::size_t>(i)].add(v);
            rows[static_cast<std::size_t>(j)].add(v);
        }
    }
    for (int i = 0; i < n; ++i) c.row_sums[static_cast<std::size_t>(i)] = rows[static_cast<std::size_t>(i)].value();
    return c;
}

} // namespace ghd
