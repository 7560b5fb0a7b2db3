#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ghd/graph.hpp"

namespace ghd {

enum class GraphModel { rg2d, sf, er };
enum class SfWiring { configuration, chung_lu };
enum class RewireMode { delete_reinsert, degree_swaps };

std::string to_string(GraphModel m);
std::string to_string(SfWiring w);
std::string to_string(RewireMode m);
GraphModel graph_model_from_string(const std::string& s);
SfWiring sf_wiring_from_string(const std::string& s);
RewireMode rewire_mode_from_string(const std::string& s);

/// Declarative generator parameters; which of d/alpha/p applies depends on
/// the model.  Generated nodes are labelled "0".."n-1".
struct GeneratorSpec {
    GraphModel model = GraphModel::rg2d;
    int n = 0;
    double d = 0.0;      // rg2d: connection radius
    double alpha = 0.0;  // sf: power-law exponent (> 1)
    double p = 0.0;      // er: edge probability
    SfWiring wiring = SfWiring::configuration;
};

/// Random geometric graph: n points uniform on the unit square, edge iff
/// Euclidean distance strictly below d.
LabeledGraph random_geometric(int n, double d, std::uint64_t seed);

/// Erdos-Renyi G(n, p).
LabeledGraph erdos_renyi(int n, double p, std::uint64_t seed);

/// Scale-free graph: i.i.d. degrees from P(k) proportional to k^(-alpha) on
/// k = 1..K with K = floor(n^(1/(alpha-1))) for alpha > 2 and K = n-1
/// otherwise, realised as a simple graph.  Configuration wiring pairs stubs
/// and repairs self-loops/duplicates by random re-pairing swaps; conflicts
/// that cannot be re-paired within the budget are rejected (dropped), so a
/// hub drawn beyond the structural cutoff of simple graphs truncates while
/// the bulk of the degree distribution is preserved.  An odd degree sum is
/// fixed by resampling one degree.  Chung-Lu wiring (expected degrees) is
/// available as an alternative.
LabeledGraph scale_free(int n, double alpha, std::uint64_t seed,
                        SfWiring wiring = SfWiring::configuration);

LabeledGraph generate(const GeneratorSpec& spec, std::uint64_t seed);

/// Noise operator: deletes ceil(gamma * |E|) edges chosen uniformly without
/// replacement, then inserts the same number uniformly among the resulting
/// non-edges, preserving |E|.  gamma in [0,1].  The degree_swaps mode instead
/// performs double-edge swaps touching about gamma * |E| edges, preserving
/// the degree sequence.
LabeledGraph shuffle_edges(const LabeledGraph& g, double gamma, std::uint64_t seed,
                           RewireMode mode = RewireMode::delete_reinsert);

/// Planted differential pair: gA drawn per `spec`, gB = shuffle_edges(gA, gamma),
/// then a uniformly chosen subset V* of `subnet_size` nodes has its internal
/// edges cleared in both graphs and replaced by two independently simulated
/// random-geometric graphs with the parent's d (fresh points each).  Edges
/// between V* and the rest are left untouched.  Requires an rg2d parent.
struct PlantedPair {
    LabeledGraph a, b;
    std::vector<int> v_star; // sorted node indices of the planted subnetwork
};

PlantedPair plant_differential(const GeneratorSpec& spec, double gamma, int subnet_size,
                               std::uint64_t seed, RewireMode mode = RewireMode::delete_reinsert);

} // namespace ghd
