#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ghd/graph.hpp"
#include "ghd/weights.hpp"

namespace ghd {

// Configuration for the iterative differential-subnetwork sweep.
struct DetectionConfig {
    double alpha = 0.05;
    int n_min = 4;   // smallest subnetwork size the sweep descends to
    int batch = 1;   // nodes removed per iteration
    WeightScheme scheme = WeightScheme::topological_overlap;
    std::string adjust = "BH"; // recorded in outputs; BH is the only method
    int n_workers = 1;         // candidate scoring parallelism (deterministic)

    // Test hook: called once per removal step, before the removal, with the
    // live node indices (into the original graphs) and their delta scores.
    std::function<void(const std::vector<int>&, const std::vector<double>&)> delta_observer;
};

// One row of the sweep trace. `k` is the size the test ran on; `removed`
// lists the nodes taken out after testing (empty on the final row).
struct DetectionStep {
    int k = 0;
    std::vector<std::string> removed;
    std::vector<double> removed_delta;
    double statistic = std::nan("");
    double mu = std::nan("");
    double sigma2 = std::nan("");
    double z = std::nan("");
    double p_raw = std::nan("");
    double p_adjusted = std::nan("");
    bool forced = false;     // no candidate had a positive delta
    bool degenerate = false; // zero null variance; p left missing
};

struct DetectionResult {
    std::vector<std::string> v_star; // detected subnetwork, original label order
    std::vector<DetectionStep> steps;
    int stop_k = 0; // size at which the sweep first lost significance (0 = never)
};

// Centered statistic on an induced subgraph pair: observed distance minus the
// closed-form permutation mean, with weights rebuilt on the induced pair.
double centered_ghd(const LabeledGraph& a, const LabeledGraph& b,
                    const std::vector<int>& nodes, WeightScheme scheme);

// From-scratch influence score for one node: the centered statistic after
// dropping `node`, minus the centered statistic on `nodes` as given.
// Positive values mark nodes whose removal moves the pair toward
// independence (shared-structure carriers); divergent nodes score lowest and
// are peeled last.  Reference implementation; the sweep uses an incremental
// engine that must agree with this to high precision.
double node_influence(const LabeledGraph& a, const LabeledGraph& b,
                      const std::vector<int>& nodes, int node, WeightScheme scheme);

// Benjamini-Hochberg step-up. NaN entries are passed through untouched and do
// not count toward the number of tests.
std::vector<double> adjust_pvalues(const std::vector<double>& p);

DetectionResult detect(const LabeledGraph& a, const LabeledGraph& b,
                       const DetectionConfig& cfg);

// Same sweep with plain adjacency weights (Hamming-distance flavor).
DetectionResult detect_dhd(const LabeledGraph& a, const LabeledGraph& b,
                           DetectionConfig cfg);

} // namespace ghd
