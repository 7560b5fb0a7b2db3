#pragma once

#include <cstdint>
#include <vector>

#include "ghd/graph.hpp"
#include "ghd/stat.hpp"
#include "ghd/weights.hpp"

namespace ghd::detail {

struct StepStats {
    int k = 0;
    double statistic = 0.0; // centred convention, matches ghd_test
    double mu = 0.0;
    double sigma2 = 0.0;
    double z = 0.0;
    double p_association = 0.0;
    bool degenerate = false;
};

/// Incremental state for the node-removal sweep.
///
/// Both graphs' adjacency, topological-overlap numerators (common neighbours
/// + adjacency), degrees and weight matrices live in dense square arrays
/// indexed by engine slots.  Removing a node zeroes its row/column, patches
/// the numerators and degrees of its neighbourhood, and rebuilds exactly the
/// weight rows that change; the slot space is compacted once most slots are
/// dead.  Per step, one fused pass accumulates the sums the standardised test
/// needs plus per-row "one endpoint loses a degree" delta aggregates, from
/// which each candidate's influence score follows with only neighbourhood-
/// sized corrections.  Scores are exact (not approximations): pairs whose
/// weights a removal cannot touch contribute exactly zero.
class DetectEngine {
public:
    DetectEngine(const LabeledGraph& a, const LabeledGraph& b, WeightScheme scheme);

    int size() const { return k_; }

    /// Original node indices still alive, ascending.
    std::vector<int> live_ids() const;

    /// Recompute the per-step aggregates.  Call after construction or
    /// remove() and before stats() / deltas().
    void refresh();

    StepStats stats() const;

    /// Influence score for removing each live node (aligned with live_ids()):
    /// centred statistic after the removal minus the current centred
    /// statistic.  Deterministic for any worker count.
    std::vector<double> deltas(int n_workers);

    /// Remove nodes by original index and update all caches.
    void remove(const std::vector<int>& original_ids);

private:
    struct Side {
        std::vector<std::uint8_t> adj;  // ext x ext, diagonal 0
        std::vector<std::uint16_t> ncn; // TO numerator; unused for adjacency weights
        std::vector<int> deg;
        std::vector<double> w;   // weights, diagonal 0, dead rows/columns 0
        std::vector<double> row; // per-slot row sums of w
        std::vector<double> rsq; // per-slot row sums of w^2
        std::vector<double> g1;  // per-slot row sums of d1
        std::vector<double> gx;  // per-slot row sums of d1 * (other side's w)
        double s1 = 0.0, s2 = 0.0, t = 0.0;
    };

    struct Scratch {
        std::vector<int> na, nb, un;
        std::vector<std::uint8_t> in_a, in_b;
    };

    std::size_t at(int p, int q) const {
        return static_cast<std::size_t>(p) * static_cast<std::size_t>(ext_) +
               static_cast<std::size_t>(q);
    }

    // Weight change of pair (p,q) when p loses one degree and the numerator
    // stays put (q not adjacent to the removed node).
    double d1(const Side& s, int p, int q) const {
        std::size_t o = at(p, q);
        int idx = std::min(s.deg[static_cast<std::size_t>(p)] - 1,
                           s.deg[static_cast<std::size_t>(q)]) +
                  1 - s.adj[o];
        return s.ncn[o] * recip_[static_cast<std::size_t>(idx)] - s.w[o];
    }

    // Weight change of pair (p,q) when both endpoints lose a degree and one
    // shared neighbour (p and q both adjacent to the removed node).
    double d2(const Side& s, int p, int q) const {
        std::size_t o = at(p, q);
        int idx = std::min(s.deg[static_cast<std::size_t>(p)],
                           s.deg[static_cast<std::size_t>(q)]) -
                  1 + 1 - s.adj[o];
        return (static_cast<int>(s.ncn[o]) - 1) * recip_[static_cast<std::size_t>(idx)] -
               s.w[o];
    }

    void build_side(const LabeledGraph& g, Side& s) const;
    void remove_one(int slot);
    void remove_side(Side& s, int slot);
    void compact();
    double delta_for(int slot, Scratch& sc) const;

    WeightScheme scheme_;
    int n0_ = 0;  // original size
    int ext_ = 0; // current slot-space extent
    int k_ = 0;   // live count
    Side a_, b_;
    std::vector<std::uint8_t> alive_;
    std::vector<int> orig_;         // slot -> original index
    std::vector<int> slot_of_;      // original index -> slot, -1 when dead
    std::vector<double> recip_;     // recip_[t] = 1/t, recip_[0] = 0
    std::vector<double> rx_;        // per-slot row sums of wa*wb
    std::vector<double> gxx_;       // per-slot row sums of d1a*d1b
    double x_ = 0.0;                // ordered sum of wa*wb
    std::vector<Scratch> scratch_;
    bool fresh_ = false;
};

} // namespace ghd::detail
