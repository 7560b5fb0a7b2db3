#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ghd/baselines.hpp"
#include "ghd/graph.hpp"
#include "ghd/rng.hpp"
#include "ghd/stat.hpp"

using ghd::LabeledGraph;

namespace {

LabeledGraph random_graph(int n, double p, std::uint64_t seed) {
    ghd::Rng rng = ghd::make_rng(seed);
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (ghd::next_double(rng) < p) edges.emplace_back(i, j);
    return LabeledGraph(std::move(labels), edges);
}

LabeledGraph complement(const LabeledGraph& g) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < g.size(); ++i)
        for (int j = i + 1; j < g.size(); ++j)
            if (!g.has_edge(i, j)) edges.emplace_back(i, j);
    return LabeledGraph(g.labels(), edges);
}

LabeledGraph permuted(const LabeledGraph& g, const std::vector<int>& perm) {
    // adjacency entry (i,j) of the result is g(perm[i], perm[j]); labels stay
    // in their original order so the pair remains comparable
    std::vector<int> pos(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i) pos[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i;
    std::vector<std::pair<int, int>> edges;
    for (const auto& [u, v] : g.edges())
        edges.emplace_back(pos[static_cast<std::size_t>(u)], pos[static_cast<std::size_t>(v)]);
    return LabeledGraph(g.labels(), edges);
}

} // namespace

TEST_CASE("mad fixtures and the hamming identity") {
    LabeledGraph k3({"a", "b", "c"}, {{0, 1}, {1, 2}, {0, 2}});
    LabeledGraph e3({"a", "b", "c"}, {});
    CHECK(ghd::mad(k3, k3) == 0.0);
    CHECK(ghd::mad(k3, e3) == doctest::Approx(1.0).epsilon(1e-15));

    LabeledGraph g1({"a", "b", "c", "d"}, {{0, 1}, {2, 3}});
    LabeledGraph g2({"a", "b", "c", "d"}, {{0, 1}});
    CHECK(ghd::mad(g1, g2) == doctest::Approx(1.0 / 6).epsilon(1e-15));

    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        LabeledGraph a = random_graph(15, 0.4, seed);
        LabeledGraph b = random_graph(15, 0.4, seed + 10);
        double m = 15.0 * 14.0;
        CHECK(ghd::mad(a, b) ==
              doctest::Approx(2.0 * ghd::hamming_distance(a, b) / m).epsilon(1e-12));
    }
}

TEST_CASE("qap fixtures") {
    LabeledGraph k3({"a", "b", "c"}, {{0, 1}, {1, 2}, {0, 2}});
    LabeledGraph e3({"a", "b", "c"}, {});
    LabeledGraph one({"a", "b", "c"}, {{0, 1}});
    CHECK(ghd::qap(k3, e3) == 0.0);
    CHECK(ghd::qap(k3, k3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ghd::qap(k3, one) == doctest::Approx(1.0 / 3).epsilon(1e-15));
}

TEST_CASE("sum identity |a-b| = a + b - 2ab on binary matrices") {
    for (std::uint64_t seed : {4ULL, 5ULL}) {
        LabeledGraph a = random_graph(20, 0.3, seed);
        LabeledGraph b = random_graph(20, 0.3, seed + 7);
        double m = 20.0 * 19.0;
        double sum_abs = ghd::mad(a, b) * m;
        double sum_a = 2.0 * static_cast<double>(a.edge_count());
        double sum_b = 2.0 * static_cast<double>(b.edge_count());
        double sum_ab = ghd::qap(a, b) * m;
        CHECK(sum_abs == doctest::Approx(sum_a + sum_b - 2 * sum_ab).epsilon(1e-12));
    }
}

TEST_CASE("gcor fixtures") {
    LabeledGraph g = random_graph(12, 0.4, 9);
    double self = ghd::gcor(g, g);
    CHECK(self > 0.0);

    LabeledGraph comp = complement(g);
    CHECK(ghd::gcor(g, comp) == doctest::Approx(-self).epsilon(1e-10));

    LabeledGraph empty({"a", "b", "c", "d"}, {});
    LabeledGraph some({"a", "b", "c", "d"}, {{0, 1}});
    CHECK_THROWS_AS(ghd::gcor(empty, some), std::domain_error);
    LabeledGraph k4({"a", "b", "c", "d"}, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    CHECK_THROWS_AS(ghd::gcor(some, k4), std::domain_error);
}

TEST_CASE("gcor of independent graphs sits inside the permutation null") {
    LabeledGraph a = random_graph(100, 0.1, 31);
    LabeledGraph b = random_graph(100, 0.1, 32);
    double obs = ghd::gcor(a, b);

    ghd::Rng rng = ghd::make_rng(99);
    std::vector<double> null_draws;
    for (int r = 0; r < 300; ++r) {
        std::vector<int> perm = ghd::random_permutation(100, rng);
        null_draws.push_back(ghd::gcor(permuted(a, perm), b));
    }
    double mean = std::accumulate(null_draws.begin(), null_draws.end(), 0.0) / 300.0;
    double var = 0.0;
    for (double v : null_draws) var += (v - mean) * (v - mean);
    var /= 299.0;
    CHECK(std::abs(obs - mean) < 3.5 * std::sqrt(var));
}

TEST_CASE("permutation test floors on identical graphs") {
    LabeledGraph g = random_graph(25, 0.3, 41);
    ghd::BaselineResult mad_r = ghd::permutation_test(ghd::BaselineMethod::mad, g, g, 199, 5);
    CHECK(mad_r.p_value == doctest::Approx(1.0 / 200).epsilon(1e-12));
    CHECK(mad_r.statistic == 0.0);
    CHECK(mad_r.n_draws == 199);

    ghd::BaselineResult qap_r = ghd::permutation_test(ghd::BaselineMethod::qap, g, g, 199, 5);
    CHECK(qap_r.p_value == doctest::Approx(1.0 / 200).epsilon(1e-12));
}

TEST_CASE("permutation test is deterministic and worker-invariant") {
    LabeledGraph a = random_graph(20, 0.3, 51);
    LabeledGraph b = random_graph(20, 0.3, 52);
    ghd::BaselineResult r1 = ghd::permutation_test(ghd::BaselineMethod::mad, a, b, 300, 9, 1);
    ghd::BaselineResult r4 = ghd::permutation_test(ghd::BaselineMethod::mad, a, b, 300, 9, 4);
    CHECK(r1.p_value == r4.p_value);
    CHECK(r1.statistic == r4.statistic);

    ghd::BaselineResult c1 = ghd::cug_test(a, b, 300, 9, 1);
    ghd::BaselineResult c4 = ghd::cug_test(a, b, 300, 9, 4);
    CHECK(c1.p_value == c4.p_value);
}

TEST_CASE("MAD permutation p within 3 SE of the N=7 exhaustive value") {
    LabeledGraph a = random_graph(7, 0.45, 61);
    LabeledGraph b = random_graph(7, 0.45, 62);
    double obs = ghd::mad(a, b);

    std::vector<int> perm(7);
    std::iota(perm.begin(), perm.end(), 0);
    long long hits = 0, total = 0;
    do {
        if (ghd::mad(permuted(a, perm), b) <= obs + 1e-15) ++hits;
        ++total;
    } while (std::next_permutation(perm.begin(), perm.end()));
    double exact = static_cast<double>(hits) / static_cast<double>(total);

    ghd::BaselineResult mc = ghd::permutation_test(ghd::BaselineMethod::mad, a, b, 5000, 3, 1);
    double se = std::sqrt(exact * (1 - exact) / 5000.0);
    CHECK(std::abs(mc.p_value - exact) <= 3 * se + 2.0 / 5001.0);
}

TEST_CASE("cug test basics") {
    LabeledGraph a = random_graph(30, 0.25, 71);
    ghd::BaselineResult self = ghd::cug_test(a, a, 199, 13);
    CHECK_FALSE(self.degenerate);
    CHECK(self.p_value == doctest::Approx(1.0 / 200).epsilon(1e-12)); // maximal |gcor|

    LabeledGraph b = random_graph(30, 0.25, 72);
    ghd::BaselineResult indep = ghd::cug_test(a, b, 199, 13);
    CHECK(indep.p_value > 0.0);
    CHECK(indep.p_value <= 1.0);

    LabeledGraph empty(a.labels(), {});
    ghd::BaselineResult degen = ghd::cug_test(empty, a, 99, 1);
    CHECK(degen.degenerate);
}
