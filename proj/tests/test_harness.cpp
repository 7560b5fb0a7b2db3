#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ghd/harness.hpp"

using ghd::ExperimentConfig;
using ghd::ExperimentKind;
using ghd::ExperimentReport;
using ghd::TestMethod;

namespace {

int count_rows(const ExperimentReport& r, const std::string& metric) {
    int n = 0;
    for (const auto& row : r.rows)
        if (row.metric == metric) ++n;
    return n;
}

} // namespace

TEST_CASE("kind and method tags") {
    CHECK(ghd::experiment_kind_from_string("null_uniformity") ==
          ExperimentKind::null_uniformity);
    CHECK(ghd::experiment_kind_from_string("power_curve") == ExperimentKind::power_curve);
    CHECK(ghd::experiment_kind_from_string("recovery") == ExperimentKind::recovery);
    CHECK(ghd::to_string(ExperimentKind::recovery) == "recovery");
    CHECK_THROWS_WITH_AS(ghd::experiment_kind_from_string("nope"),
                         doctest::Contains("null_uniformity"), std::invalid_argument);

    CHECK(ghd::test_method_from_string("GHD") == TestMethod::ghd);
    CHECK(ghd::test_method_from_string("dGHD") == TestMethod::dghd);
    CHECK(ghd::test_method_from_string("cug") == TestMethod::cug);
    CHECK(ghd::to_string(TestMethod::qap) == "QAP");
    CHECK(ghd::to_string(TestMethod::dhd) == "dHD");
    CHECK_THROWS_WITH_AS(ghd::test_method_from_string("anova"),
                         doctest::Contains("GHD"), std::invalid_argument);
}

TEST_CASE("kind defaults are complete") {
    ExperimentConfig null_cfg = ghd::default_config(ExperimentKind::null_uniformity);
    CHECK(null_cfg.replicates > 0);
    CHECK(null_cfg.methods == std::vector<TestMethod>{TestMethod::ghd});
    CHECK(null_cfg.gammas.empty());
    CHECK(!null_cfg.seed_set);

    ExperimentConfig power_cfg = ghd::default_config(ExperimentKind::power_curve);
    CHECK(power_cfg.methods.size() == 4);
    CHECK(!power_cfg.gammas.empty());

    ExperimentConfig rec_cfg = ghd::default_config(ExperimentKind::recovery);
    CHECK(rec_cfg.methods ==
          std::vector<TestMethod>{TestMethod::dghd, TestMethod::dhd});
    CHECK(rec_cfg.subnet_size > 0);
    CHECK(rec_cfg.subnet_size <= rec_cfg.generator.n);
    CHECK(rec_cfg.detection.n_min >= 4);
}

TEST_CASE("json config parsing") {
    ExperimentConfig cfg = ghd::parse_experiment_config(
        R"({"kind": "power_curve"})", "inline");
    ExperimentConfig dflt = ghd::default_config(ExperimentKind::power_curve);
    CHECK(cfg.replicates == dflt.replicates);
    CHECK(cfg.gammas == dflt.gammas);
    CHECK(!cfg.seed_set);

    ExperimentConfig full = ghd::parse_experiment_config(R"({
        "kind": "recovery",
        "generator": {"model": "rg2d", "n": 60, "d": 0.25},
        "replicates": 3,
        "gammas": [0.1, 0.4],
        "methods": ["dGHD"],
        "subnet_size": 12,
        "detection": {"alpha": 0.1, "n_min": 8, "batch": 2},
        "seed": 99
    })",
                                                         "inline");
    CHECK(full.generator.n == 60);
    CHECK(full.generator.d == 0.25);
    CHECK(full.replicates == 3);
    CHECK(full.subnet_size == 12);
    CHECK(full.detection.n_min == 8);
    CHECK(full.detection.batch == 2);
    CHECK(full.seed == 99);
    CHECK(full.seed_set);
    CHECK(full.methods == std::vector<TestMethod>{TestMethod::dghd});
}

TEST_CASE("config parsing rejects junk") {
    CHECK_THROWS_WITH_AS(ghd::parse_experiment_config(R"({})", "x"),
                         doctest::Contains("kind"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        ghd::parse_experiment_config(R"({"kind": "power_curve", "bogus": 1})", "x"),
        doctest::Contains("bogus"), std::invalid_argument);
    CHECK_THROWS_AS(ghd::parse_experiment_config(
                        R"({"kind": "power_curve", "generator": {"model": "er", "n": 10, "zap": 1}})",
                        "x"),
                    std::invalid_argument);
    CHECK_THROWS_AS(ghd::parse_experiment_config(
                        R"({"kind": "recovery", "detection": {"weird": 1}})", "x"),
                    std::invalid_argument);
    CHECK_THROWS_AS(ghd::parse_experiment_config("{not json", "x"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(ghd::parse_experiment_config(R"({"kind": "bad"})", "x"),
                         doctest::Contains("power_curve"), std::invalid_argument);
    CHECK_THROWS_AS(ghd::load_experiment_config("/nonexistent/cfg.json"),
                    std::invalid_argument);
}

TEST_CASE("resolved config round trips through its own json") {
    for (ExperimentKind kind : {ExperimentKind::null_uniformity,
                                ExperimentKind::power_curve, ExperimentKind::recovery}) {
        ExperimentConfig cfg = ghd::default_config(kind);
        cfg.seed = 42;
        cfg.seed_set = true;
        std::string text = ghd::resolved_config_json(cfg);
        ExperimentConfig back = ghd::parse_experiment_config(text, "roundtrip");
        CHECK(back.kind == cfg.kind);
        CHECK(back.replicates == cfg.replicates);
        CHECK(back.gammas == cfg.gammas);
        CHECK(back.methods == cfg.methods);
        CHECK(back.generator.n == cfg.generator.n);
        CHECK(back.seed == 42);
        CHECK(back.seed_set);
        CHECK(ghd::resolved_config_json(back) == text);
    }
}

TEST_CASE("validation rejects inconsistent studies") {
    ExperimentConfig cfg = ghd::default_config(ExperimentKind::power_curve);
    cfg.replicates = 0;
    CHECK_THROWS_AS(ghd::run_experiment(cfg), std::invalid_argument);

    cfg = ghd::default_config(ExperimentKind::power_curve);
    cfg.gammas = {0.5, 1.5};
    CHECK_THROWS_AS(ghd::run_experiment(cfg), std::invalid_argument);

    cfg = ghd::default_config(ExperimentKind::recovery);
    cfg.methods = {TestMethod::ghd};
    CHECK_THROWS_AS(ghd::run_experiment(cfg), std::invalid_argument);

    cfg = ghd::default_config(ExperimentKind::null_uniformity);
    cfg.methods = {TestMethod::mad};
    CHECK_THROWS_AS(ghd::run_experiment(cfg), std::invalid_argument);

    cfg = ghd::default_config(ExperimentKind::recovery);
    cfg.subnet_size = cfg.generator.n + 1;
    CHECK_THROWS_AS(ghd::run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("null study emits per-replicate and summary rows") {
    ExperimentConfig cfg = ghd::default_config(ExperimentKind::null_uniformity);
    cfg.generator.n = 30;
    cfg.generator.d = 0.35;
    cfg.replicates = 20;
    cfg.seed = 7;
    cfg.seed_set = true;
    ExperimentReport rep = ghd::run_experiment(cfg);

    CHECK(count_rows(rep, "p_value") == 20);
    CHECK(count_rows(rep, "ks_distance") == 1);
    int qq = 0;
    for (const auto& row : rep.rows)
        if (row.metric.rfind("qq_", 0) == 0) ++qq;
    CHECK(qq == 9);
    for (const auto& row : rep.rows) {
        CHECK(row.method == "GHD");
        if (!std::isnan(row.value)) {
            CHECK(row.value >= 0.0);
            CHECK(row.value <= 1.0);
        }
    }
}

TEST_CASE("power study scores acceptance per gamma and method") {
    ExperimentConfig cfg = ghd::default_config(ExperimentKind::power_curve);
    cfg.generator.n = 25;
    cfg.generator.d = 0.35;
    cfg.replicates = 6;
    cfg.gammas = {0.5, 1.0};
    cfg.methods = {TestMethod::ghd, TestMethod::mad};
    cfg.n_perm = 99;
    cfg.seed = 11;
    cfg.seed_set = true;
    ExperimentReport rep = ghd::run_experiment(cfg);

    REQUIRE(rep.rows.size() == 4); // 2 gammas x 2 methods
    std::set<std::pair<std::string, double>> seen;
    for (const auto& row : rep.rows) {
        CHECK(row.metric == "power");
        CHECK(row.value >= 0.0);
        CHECK(row.value <= 1.0);
        CHECK(row.mc_stderr >= 0.0);
        seen.insert({row.method, row.gamma});
    }
    CHECK(seen.size() == 4);

    // byte-identical reports for any worker split
    std::string csv1 = ghd::report_csv(rep);
    for (int workers : {2, 5}) {
        ExperimentReport again = ghd::run_experiment(cfg, workers);
        CHECK(ghd::report_csv(again) == csv1);
    }
}

TEST_CASE("recovery study reports classification rates") {
    ExperimentConfig cfg = ghd::default_config(ExperimentKind::recovery);
    cfg.generator.n = 40;
    cfg.generator.d = 0.3;
    cfg.subnet_size = 10;
    cfg.replicates = 2;
    cfg.gammas = {0.1};
    cfg.detection.n_min = 8;
    cfg.seed = 13;
    cfg.seed_set = true;
    ExperimentReport rep = ghd::run_experiment(cfg);

    REQUIRE(rep.rows.size() == 4); // 1 gamma x 2 methods x {TPR, SPC}
    for (const auto& row : rep.rows) {
        CHECK((row.metric == "TPR" || row.metric == "SPC"));
        if (!std::isnan(row.value)) {
            CHECK(row.value >= 0.0);
            CHECK(row.value <= 1.0);
        }
    }
    CHECK(rep.rows[0].method == rep.rows[1].method); // TPR then SPC per method

    std::string csv1 = ghd::report_csv(rep);
    ExperimentReport again = ghd::run_experiment(cfg, 3);
    CHECK(ghd::report_csv(again) == csv1);
}

TEST_CASE("csv serialization is tidy and nan-aware") {
    ExperimentReport rep;
    rep.config = ghd::default_config(ExperimentKind::power_curve);
    rep.rows.push_back({"GHD", 0.5, "power", 0.25, 0.0216506});
    rep.rows.push_back({"MAD", std::nan(""), "power", std::nan(""), std::nan("")});
    std::string csv = ghd::report_csv(rep);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "method,gamma,metric,value,mc_stderr");
    std::getline(in, line);
    CHECK(line == "GHD,0.5,power,0.25,0.0216506");
    std::getline(in, line);
    CHECK(line == "MAD,,power,,");
    CHECK(!std::getline(in, line));

    std::ostringstream out;
    ghd::write_report_csv(rep, out);
    CHECK(out.str() == csv);
}

TEST_CASE("metadata json names the config and provenance") {
    ExperimentConfig cfg = ghd::default_config(ExperimentKind::null_uniformity);
    cfg.generator.n = 20;
    cfg.replicates = 2;
    cfg.seed = 5;
    cfg.seed_set = true;
    ExperimentReport rep = ghd::run_experiment(cfg);
    std::string meta = ghd::report_metadata_json(rep, 3);
    CHECK(meta.find("\"workers\"") != std::string::npos);
    CHECK(meta.find("\"rows\"") != std::string::npos);
    CHECK(meta.find("null_uniformity") != std::string::npos);
}
