#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ghd/netgen.hpp"
#include "ghd/subnetwork.hpp"
#include "ghd/weights.hpp"

namespace ghd {

enum class ExperimentKind { null_uniformity, power_curve, recovery };

enum class TestMethod { ghd, mad, qap, cug, dghd, dhd };

std::string to_string(ExperimentKind k);
std::string to_string(TestMethod m);
ExperimentKind experiment_kind_from_string(const std::string& s);
TestMethod test_method_from_string(const std::string& s);

/// Declarative description of one simulation study.  Field defaults depend on
/// the kind; use default_config() or the JSON loader to get resolved values.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::null_uniformity;
    GeneratorSpec generator;         // first network of each replicate
    int replicates = 0;
    std::vector<double> gammas;      // rewiring grid (power_curve, recovery)
    std::vector<TestMethod> methods;
    WeightScheme scheme = WeightScheme::topological_overlap; // GHD weights
    double level = 0.05;             // acceptance threshold for power scoring
    long long n_perm = 1000;         // MAD/QAP permutation draws
    long long n_sim = 1000;          // CUG null simulations
    RewireMode rewire = RewireMode::delete_reinsert;
    int subnet_size = 200;           // recovery: planted differential size
    DetectionConfig detection;       // recovery: sweep settings (scheme per method)
    std::uint64_t seed = 1;
    bool seed_set = false;           // whether the config source pinned the seed
};

/// Fully resolved defaults for a study kind (desk-scale replicate counts).
ExperimentConfig default_config(ExperimentKind kind);

/// Parse the JSON config format, applying kind defaults to absent fields and
/// rejecting unknown keys.  Throws std::invalid_argument prefixed with
/// `origin` on malformed input.
ExperimentConfig parse_experiment_config(const std::string& json_text, const std::string& origin);
ExperimentConfig load_experiment_config(const std::string& path);

/// The resolved configuration as pretty JSON (stable key order).
std::string resolved_config_json(const ExperimentConfig& cfg);

/// One tidy result record.  NaN fields render as empty CSV cells.
struct ReportRow {
    std::string method;
    double gamma;
    std::string metric;
    double value;
    double mc_stderr;
};

struct ExperimentReport {
    ExperimentConfig config; // resolved
    std::vector<ReportRow> rows;
};

/// Run the study described by `cfg`.  Replicates fan out over `n_workers`
/// threads; all randomness is derived per replicate from cfg.seed, and rows
/// are assembled in a fixed order, so the report is identical for any worker
/// count.
ExperimentReport run_experiment(const ExperimentConfig& cfg, int n_workers = 1);

/// CSV serialization: header `method,gamma,metric,value,mc_stderr`, doubles
/// in shortest round-trip form, byte-stable across runs and worker counts.
void write_report_csv(const ExperimentReport& report, std::ostream& out);
std::string report_csv(const ExperimentReport& report);

/// JSON sidecar: resolved config plus run provenance (worker count).
std::string report_metadata_json(const ExperimentReport& report, int n_workers);

} // namespace ghd
