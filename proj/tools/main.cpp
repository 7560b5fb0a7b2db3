// ghd: network comparison toolkit command-line interface.
//
// Subcommands: compare, subnetwork, generate, infer, experiment.  Every run
// writes its resolved configuration (defaults included) to a JSON sidecar in
// the output directory, so results can be reproduced from the sidecar alone.
// Exit codes: 0 success, 1 internal/numerical failure, 2 usage/input error.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ghd/baselines.hpp"
#include "ghd/graph_io.hpp"
#include "ghd/harness.hpp"
#include "ghd/infer.hpp"
#include "ghd/netgen.hpp"
#include "ghd/parallel.hpp"
#include "ghd/rng.hpp"
#include "ghd/stat.hpp"
#include "ghd/subnetwork.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kDiagWarnThreshold = 0.05;

struct GlobalOpts {
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0; // 0 = all available cores
    std::string output_dir = ".";
    std::string output_format = "csv";
};

std::string fmt_double(double v) {
    if (std::isnan(v)) return "";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::filesystem::path out_path(const GlobalOpts& g, const std::string& name) {
    return std::filesystem::path(g.output_dir) / name;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Resolved-config sidecar shared by all subcommands.  `extra` carries the
// subcommand-specific resolved flags.
void write_sidecar(const GlobalOpts& g, const std::string& command, ordered_json extra,
                   const std::vector<std::string>& outputs) {
    ordered_json side;
    side["command"] = command;
    side["seed"] = g.seed;
    side["seed_source"] = g.seed_set ? "flag" : "drawn";
    side["threads_requested"] = g.threads;
    side["threads_resolved"] = ghd::resolve_workers(g.threads);
    side["output_dir"] = g.output_dir;
    side["output_format"] = g.output_format;
    side["outputs"] = outputs;
    side["options"] = std::move(extra);
    side["timestamp_utc"] = utc_timestamp();
    write_text_file(out_path(g, command + "_config.json"), side.dump(2) + "\n");
}

// Load two aligned graphs.  Equal label sets in different order are aligned
// to the first graph; different sets are a usage error reporting the
// symmetric difference.
std::pair<ghd::LabeledGraph, ghd::LabeledGraph> load_pair(const std::string& path_a,
                                                          const std::string& path_b) {
    ghd::LabeledGraph a = ghd::read_edge_list_file(path_a);
    ghd::LabeledGraph b = ghd::read_edge_list_file(path_b);
    if (a.same_labels(b)) return {std::move(a), std::move(b)};

    std::set<std::string> sa(a.labels().begin(), a.labels().end());
    std::set<std::string> sb(b.labels().begin(), b.labels().end());
    if (sa == sb) {
        ghd::LabeledGraph aligned = ghd::align_to(a.labels(), b);
        return {std::move(a), std::move(aligned)};
    }
    std::vector<std::string> only_a, only_b;
    std::set_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(only_a));
    std::set_difference(sb.begin(), sb.end(), sa.begin(), sa.end(), std::back_inserter(only_b));
    std::ostringstream msg;
    msg << "node sets differ between " << path_a << " and " << path_b << ":";
    msg << "\n  only in " << path_a << " (" << only_a.size() << "):";
    for (const auto& l : only_a) msg << ' ' << l;
    msg << "\n  only in " << path_b << " (" << only_b.size() << "):";
    for (const auto& l : only_b) msg << ' ' << l;
    throw std::invalid_argument(msg.str());
}

std::string join(const std::vector<std::string>& xs, char sep) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += xs[i];
    }
    return out;
}

// ---------------------------------------------------------------- compare --

struct CompareRow {
    std::string method;
    double statistic = std::nan("");
    double mu = std::nan("");
    double sigma2 = std::nan("");
    double z = std::nan("");
    double p_value = std::nan("");
    double p_divergence = std::nan("");
    double n_draws = std::nan("");
    bool degenerate = false;
};

int cmd_compare(GlobalOpts& g, const std::string& path_a, const std::string& path_b,
                std::vector<std::string> methods, const std::string& scheme_name, bool permute,
                long long n_perm, long long n_sim) {
    if (methods.size() == 1 && (methods[0] == "all" || methods[0] == "ALL"))
        methods = {"GHD", "MAD", "QAP", "CUG"};

    std::vector<ghd::TestMethod> parsed;
    for (const std::string& m : methods) {
        ghd::TestMethod tm = ghd::test_method_from_string(m);
        if (tm != ghd::TestMethod::ghd && tm != ghd::TestMethod::mad &&
            tm != ghd::TestMethod::qap && tm != ghd::TestMethod::cug)
            throw std::invalid_argument("compare method '" + m +
                                        "' not supported (expected GHD, MAD, QAP, CUG, or all)");
        parsed.push_back(tm);
    }

    ghd::WeightScheme scheme = ghd::weight_scheme_from_string(scheme_name);
    auto [a, b] = load_pair(path_a, path_b);
    const int workers = ghd::resolve_workers(g.threads);

    std::vector<CompareRow> rows;
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        CompareRow row;
        row.method = ghd::to_string(parsed[i]);
        switch (parsed[i]) {
            case ghd::TestMethod::ghd: {
                ghd::TestResult t = ghd::ghd_test(a, b, scheme, workers);
                row.statistic = t.statistic;
                row.mu = t.mu;
                row.sigma2 = t.sigma2;
                row.degenerate = t.degenerate;
                if (!t.degenerate) {
                    row.z = t.z;
                    row.p_value = t.p_association;
                    row.p_divergence = t.p_divergence;
                }
                if (permute) {
                    ghd::WeightMatrix wa = ghd::make_weights(a, scheme, workers);
                    ghd::WeightMatrix wb = ghd::make_weights(b, scheme, workers);
                    ghd::MonteCarloPValue mc = ghd::monte_carlo_pvalue(
                        wa, wb, n_perm, ghd::derive_seed(g.seed, 0, 1), workers);
                    row.p_value = mc.p_value;
                    row.p_divergence = std::nan("");
                    row.n_draws = static_cast<double>(mc.n_perm);
                }
                double worst = 0.0;
                bool defined = false;
                for (const auto& diag : {t.diag_a, t.diag_b})
                    if (diag.defined) {
                        worst = std::max(worst, diag.ratio);
                        defined = true;
                    }
                std::fprintf(stderr, "normality diagnostic: a=%s b=%s\n",
                             t.diag_a.defined ? fmt_double(t.diag_a.ratio).c_str() : "undefined",
                             t.diag_b.defined ? fmt_double(t.diag_b.ratio).c_str() : "undefined");
                if (defined && worst > kDiagWarnThreshold)
                    std::fprintf(stderr,
                                 "warning: normality diagnostic %s exceeds %g; the normal "
                                 "approximation may be inaccurate (consider --permute)\n",
                                 fmt_double(worst).c_str(), kDiagWarnThreshold);
                break;
            }
            case ghd::TestMethod::mad:
            case ghd::TestMethod::qap: {
                ghd::BaselineMethod bm = parsed[i] == ghd::TestMethod::mad
                                             ? ghd::BaselineMethod::mad
                                             : ghd::BaselineMethod::qap;
                ghd::BaselineResult r = ghd::permutation_test(
                    bm, a, b, n_perm, ghd::derive_seed(g.seed, 0, 2 + static_cast<int>(i)),
                    workers);
                row.statistic = r.statistic;
                row.p_value = r.p_value;
                row.n_draws = static_cast<double>(r.n_draws);
                break;
            }
            case ghd::TestMethod::cug: {
                ghd::BaselineResult r = ghd::cug_test(
                    a, b, n_sim, ghd::derive_seed(g.seed, 0, 2 + static_cast<int>(i)), workers);
                row.statistic = r.statistic;
                row.degenerate = r.degenerate;
                if (!r.degenerate) row.p_value = r.p_value;
                row.n_draws = static_cast<double>(r.n_draws);
                break;
            }
            default:
                break;
        }
        rows.push_back(std::move(row));
    }

    std::string result_name;
    if (g.output_format == "json") {
        ordered_json arr = ordered_json::array();
        for (const CompareRow& r : rows) {
            ordered_json obj;
            obj["method"] = r.method;
            auto put = [&](const char* key, double v) {
                if (std::isnan(v))
                    obj[key] = nullptr;
                else
                    obj[key] = v;
            };
            put("statistic", r.statistic);
            put("mu", r.mu);
            put("sigma2", r.sigma2);
            put("z", r.z);
            put("p_value", r.p_value);
            put("p_divergence", r.p_divergence);
            put("n_draws", r.n_draws);
            obj["degenerate"] = r.degenerate;
            arr.push_back(std::move(obj));
        }
        result_name = "compare_results.json";
        write_text_file(out_path(g, result_name), arr.dump(2) + "\n");
    } else {
        std::ostringstream csv;
        csv << "method,statistic,mu,sigma2,z,p_value,p_divergence,n_draws,degenerate\n";
        for (const CompareRow& r : rows)
            csv << r.method << ',' << fmt_double(r.statistic) << ',' << fmt_double(r.mu) << ','
                << fmt_double(r.sigma2) << ',' << fmt_double(r.z) << ',' << fmt_double(r.p_value)
                << ',' << fmt_double(r.p_divergence) << ',' << fmt_double(r.n_draws) << ','
                << (r.degenerate ? "true" : "false") << '\n';
        result_name = "compare_results.csv";
        write_text_file(out_path(g, result_name), csv.str());
    }

    for (const CompareRow& r : rows) {
        std::printf("%-4s statistic=%s", r.method.c_str(), fmt_double(r.statistic).c_str());
        if (!std::isnan(r.z)) std::printf(" z=%s", fmt_double(r.z).c_str());
        if (!std::isnan(r.p_value)) std::printf(" p=%s", fmt_double(r.p_value).c_str());
        if (r.degenerate) std::printf(" (degenerate)");
        std::printf("\n");
    }

    ordered_json extra;
    extra["graph_a"] = path_a;
    extra["graph_b"] = path_b;
    extra["methods"] = methods;
    extra["scheme"] = scheme_name;
    extra["permute"] = permute;
    extra["n_perm"] = n_perm;
    extra["n_sim"] = n_sim;
    write_sidecar(g, "compare", std::move(extra), {result_name});
    return 0;
}

// ------------------------------------------------------------- subnetwork --

int cmd_subnetwork(GlobalOpts& g, const std::string& path_a, const std::string& path_b,
                   double alpha, int n_min, int batch, const std::string& method) {
    ghd::DetectionConfig cfg;
    cfg.alpha = alpha;
    cfg.n_min = n_min;
    cfg.batch = batch;
    cfg.n_workers = ghd::resolve_workers(g.threads);
    if (method == "dghd" || method == "dGHD")
        cfg.scheme = ghd::WeightScheme::topological_overlap;
    else if (method == "dhd" || method == "dHD")
        cfg.scheme = ghd::WeightScheme::adjacency;
    else
        throw std::invalid_argument("unknown detection method '" + method +
                                    "' (expected dghd or dhd)");

    auto [a, b] = load_pair(path_a, path_b);
    ghd::DetectionResult res = ghd::detect(a, b, cfg);

    std::string nodes_name = "subnetwork_nodes.txt";
    {
        std::ostringstream out;
        for (const std::string& label : res.v_star) out << label << '\n';
        write_text_file(out_path(g, nodes_name), out.str());
    }

    std::string trace_name;
    if (g.output_format == "json") {
        ordered_json arr = ordered_json::array();
        for (const ghd::DetectionStep& s : res.steps) {
            ordered_json obj;
            obj["k"] = s.k;
            obj["removed"] = s.removed;
            obj["removed_delta"] = s.removed_delta;
            auto put = [&](const char* key, double v) {
                if (std::isnan(v))
                    obj[key] = nullptr;
                else
                    obj[key] = v;
            };
            put("statistic", s.statistic);
            put("mu", s.mu);
            put("sigma2", s.sigma2);
            put("z", s.z);
            put("p_raw", s.p_raw);
            put("p_adjusted", s.p_adjusted);
            obj["forced"] = s.forced;
            obj["degenerate"] = s.degenerate;
            arr.push_back(std::move(obj));
        }
        trace_name = "subnetwork_trace.json";
        write_text_file(out_path(g, trace_name), arr.dump(2) + "\n");
    } else {
        std::ostringstream csv;
        csv << "k,removed,removed_delta,statistic,mu,sigma2,z,p_raw,p_adjusted,forced,"
               "degenerate\n";
        for (const ghd::DetectionStep& s : res.steps) {
            std::vector<std::string> deltas;
            for (double d : s.removed_delta) deltas.push_back(fmt_double(d));
            csv << s.k << ',' << join(s.removed, ';') << ',' << join(deltas, ';') << ','
                << fmt_double(s.statistic) << ',' << fmt_double(s.mu) << ','
                << fmt_double(s.sigma2) << ',' << fmt_double(s.z) << ',' << fmt_double(s.p_raw)
                << ',' << fmt_double(s.p_adjusted) << ',' << (s.forced ? "true" : "false") << ','
                << (s.degenerate ? "true" : "false") << '\n';
        }
        trace_name = "subnetwork_trace.csv";
        write_text_file(out_path(g, trace_name), csv.str());
    }

    if (res.v_star.empty())
        std::printf("no subnetwork passed the stopping rule (alpha=%s)\n",
                    fmt_double(alpha).c_str());
    else
        std::printf("detected subnetwork: %zu nodes (sweep stopped at k=%d)\n",
                    res.v_star.size(), res.stop_k);

    ordered_json extra;
    extra["graph_a"] = path_a;
    extra["graph_b"] = path_b;
    extra["alpha"] = alpha;
    extra["n_min"] = n_min;
    extra["batch"] = batch;
    extra["method"] = method;
    extra["adjust"] = cfg.adjust;
    write_sidecar(g, "subnetwork", std::move(extra), {nodes_name, trace_name});
    return 0;
}

// --------------------------------------------------------------- generate --

int cmd_generate(GlobalOpts& g, const std::string& model, int n, double d, double alpha, double p,
                 const std::string& wiring, const std::string& out_name) {
    ghd::GeneratorSpec spec;
    spec.model = ghd::graph_model_from_string(model);
    spec.n = n;
    spec.d = d;
    spec.alpha = alpha;
    spec.p = p;
    spec.wiring = ghd::sf_wiring_from_string(wiring);

    ghd::LabeledGraph graph = ghd::generate(spec, g.seed);
    ghd::write_edge_list_file(out_path(g, out_name).string(), graph);
    std::printf("wrote %s: %d nodes, %lld edges\n", out_path(g, out_name).string().c_str(),
                graph.size(), static_cast<long long>(graph.edge_count()));

    ordered_json extra;
    extra["model"] = model;
    extra["n"] = n;
    if (spec.model == ghd::GraphModel::rg2d) extra["d"] = d;
    if (spec.model == ghd::GraphModel::sf) {
        extra["alpha"] = alpha;
        extra["wiring"] = wiring;
    }
    if (spec.model == ghd::GraphModel::er) extra["p"] = p;
    extra["out"] = out_name;
    write_sidecar(g, "generate", std::move(extra), {out_name});
    return 0;
}

// ------------------------------------------------------------------ infer --

int cmd_infer(GlobalOpts& g, const std::string& matrix_path, double b, double tau,
              const std::string& missing, int max_features, bool allow_large,
              const std::string& out_name) {
    ghd::MissingPolicy policy;
    if (missing == "error")
        policy = ghd::MissingPolicy::error;
    else if (missing == "drop")
        policy = ghd::MissingPolicy::drop_feature;
    else
        throw std::invalid_argument("unknown missing policy '" + missing +
                                    "' (expected error or drop)");

    ghd::LoadedMatrix loaded = ghd::read_matrix_file(matrix_path, ghd::MatrixFormat::autodetect,
                                                     policy);
    ghd::CorrelationNetworkOptions opt;
    opt.b = b;
    opt.tau = tau;
    opt.max_features = max_features;
    opt.allow_large = allow_large;
    opt.n_workers = ghd::resolve_workers(g.threads);
    ghd::CorrelationNetwork net = ghd::correlation_adjacency(loaded.data, opt);

    ghd::write_edge_list_file(out_path(g, out_name).string(), net.graph);
    if (!loaded.dropped_missing.empty())
        std::printf("dropped %zu feature(s) with missing values: %s\n",
                    loaded.dropped_missing.size(), join(loaded.dropped_missing, ' ').c_str());
    if (!net.dropped_const.empty())
        std::printf("dropped %zu constant feature(s): %s\n", net.dropped_const.size(),
                    join(net.dropped_const, ' ').c_str());
    std::printf("wrote %s: %d nodes, %lld edges\n", out_path(g, out_name).string().c_str(),
                net.graph.size(), static_cast<long long>(net.graph.edge_count()));

    ordered_json extra;
    extra["matrix"] = matrix_path;
    extra["b"] = b;
    extra["tau"] = tau;
    extra["missing"] = missing;
    extra["max_features"] = max_features;
    extra["allow_large"] = allow_large;
    extra["dropped_missing"] = loaded.dropped_missing;
    extra["dropped_constant"] = net.dropped_const;
    extra["out"] = out_name;
    write_sidecar(g, "infer", std::move(extra), {out_name});
    return 0;
}

// ------------------------------------------------------------- experiment --

int cmd_experiment(GlobalOpts& g, const std::string& config_path) {
    ghd::ExperimentConfig cfg = ghd::load_experiment_config(config_path);
    if (g.seed_set)
        cfg.seed = g.seed; // explicit flag wins over the config file
    else if (cfg.seed_set) {
        g.seed = cfg.seed; // sidecar records the seed actually used
        g.seed_set = true;
    } else {
        cfg.seed = g.seed; // drawn seed
    }

    const int workers = ghd::resolve_workers(g.threads);
    ghd::ExperimentReport report = ghd::run_experiment(cfg, workers);

    std::string report_name;
    if (g.output_format == "json") {
        ordered_json arr = ordered_json::array();
        for (const ghd::ReportRow& r : report.rows) {
            ordered_json obj;
            obj["method"] = r.method;
            obj["gamma"] = std::isnan(r.gamma) ? ordered_json(nullptr) : ordered_json(r.gamma);
            obj["metric"] = r.metric;
            obj["value"] = std::isnan(r.value) ? ordered_json(nullptr) : ordered_json(r.value);
            obj["mc_stderr"] =
                std::isnan(r.mc_stderr) ? ordered_json(nullptr) : ordered_json(r.mc_stderr);
            arr.push_back(std::move(obj));
        }
        report_name = "experiment_report.json";
        write_text_file(out_path(g, report_name), arr.dump(2) + "\n");
    } else {
        report_name = "experiment_report.csv";
        write_text_file(out_path(g, report_name), ghd::report_csv(report));
    }

    ordered_json meta = ordered_json::parse(ghd::report_metadata_json(report, workers));
    meta["command"] = "experiment";
    meta["config_path"] = config_path;
    meta["seed_source"] = g.seed_set ? "flag_or_config" : "drawn";
    meta["output"] = report_name;
    meta["timestamp_utc"] = utc_timestamp();
    write_text_file(out_path(g, "experiment_metadata.json"), meta.dump(2) + "\n");

    std::printf("experiment %s: %zu result rows -> %s\n", ghd::to_string(cfg.kind).c_str(),
                report.rows.size(), out_path(g, report_name).string().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    GlobalOpts g;

    CLI::App app{"network comparison toolkit (standardized graph distances, "
                 "differential subnetworks, generators, correlation networks)"};
    app.require_subcommand(1);
    app.fallthrough();

    auto* seed_opt =
        app.add_option("--seed", g.seed, "RNG seed (drawn and recorded in the sidecar if absent)");
    app.add_option("--threads", g.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--output-dir", g.output_dir, "directory for result files")
        ->capture_default_str();
    app.add_option("--output-format", g.output_format, "result file format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    // compare
    std::string cmp_a, cmp_b, cmp_scheme = "topological_overlap";
    std::vector<std::string> cmp_methods = {"GHD"};
    bool cmp_permute = false;
    long long cmp_n_perm = 1000, cmp_n_sim = 1000;
    auto* cmp = app.add_subcommand("compare", "test two node-aligned networks for independence");
    cmp->add_option("graph_a", cmp_a, "first edge-list file")->required();
    cmp->add_option("graph_b", cmp_b, "second edge-list file")->required();
    cmp->add_option("--methods", cmp_methods,
                    "comma-separated methods: GHD, MAD, QAP, CUG, or all")
        ->delimiter(',')
        ->capture_default_str();
    cmp->add_option("--scheme", cmp_scheme, "edge weights: topological_overlap or adjacency")
        ->capture_default_str();
    cmp->add_flag("--permute", cmp_permute,
                  "Monte Carlo permutation p-value instead of the closed form (GHD row)");
    cmp->add_option("--n-perm", cmp_n_perm, "permutation draws (MAD/QAP/--permute)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmp->add_option("--n-sim", cmp_n_sim, "null simulations (CUG)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // subnetwork
    std::string sub_a, sub_b, sub_method = "dghd";
    double sub_alpha = 0.05;
    int sub_n_min = 4, sub_batch = 1;
    auto* sub = app.add_subcommand("subnetwork", "detect the differential subnetwork of a pair");
    sub->add_option("graph_a", sub_a, "first edge-list file")->required();
    sub->add_option("graph_b", sub_b, "second edge-list file")->required();
    sub->add_option("--alpha", sub_alpha, "significance level for the stopping rule")
        ->capture_default_str();
    sub->add_option("--n-min", sub_n_min, "smallest subnetwork size the sweep descends to")
        ->capture_default_str();
    sub->add_option("--batch", sub_batch, "nodes removed per iteration")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--method", sub_method, "dghd (topological overlap) or dhd (adjacency)")
        ->capture_default_str();

    // generate
    std::string gen_model = "rg2d", gen_wiring = "configuration", gen_out = "generated_edges.txt";
    int gen_n = 100;
    double gen_d = 0.15, gen_alpha = 2.5, gen_p = 0.05;
    auto* gen = app.add_subcommand("generate", "simulate a random network and write its edge list");
    gen->add_option("--model", gen_model, "rg2d, sf, or er")->capture_default_str();
    gen->add_option("--n", gen_n, "number of nodes")->check(CLI::PositiveNumber)
        ->capture_default_str();
    gen->add_option("--d", gen_d, "rg2d connection radius")->capture_default_str();
    gen->add_option("--alpha", gen_alpha, "sf power-law exponent (> 1)")->capture_default_str();
    gen->add_option("--p", gen_p, "er edge probability")->capture_default_str();
    gen->add_option("--wiring", gen_wiring, "sf wiring: configuration or chung_lu")
        ->capture_default_str();
    gen->add_option("--out", gen_out, "output file name (inside --output-dir)")
        ->capture_default_str();

    // infer
    std::string inf_matrix, inf_missing = "error", inf_out = "inferred_edges.txt";
    double inf_b = 12.0, inf_tau = 0.2;
    int inf_max_features = 5000;
    bool inf_allow_large = false;
    auto* inf = app.add_subcommand("infer",
                                   "build a correlation network from a samples-by-features matrix");
    inf->add_option("matrix", inf_matrix, "CSV/TSV matrix file")->required();
    inf->add_option("--b", inf_b, "soft-threshold exponent (>= 1)")->capture_default_str();
    inf->add_option("--tau", inf_tau, "hard edge threshold in (0,1), strict")
        ->capture_default_str();
    inf->add_option("--missing", inf_missing, "missing-value policy: error or drop")
        ->capture_default_str();
    inf->add_option("--max-features", inf_max_features, "guard against huge matrices")
        ->capture_default_str();
    inf->add_flag("--allow-large", inf_allow_large, "override the feature-count guard");
    inf->add_option("--out", inf_out, "output file name (inside --output-dir)")
        ->capture_default_str();

    // experiment
    std::string exp_config;
    auto* exp = app.add_subcommand("experiment", "run a declarative simulation study");
    exp->add_option("config", exp_config, "JSON experiment configuration")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2; // all parse failures are usage errors
    }

    g.seed_set = seed_opt->count() > 0;
    if (!g.seed_set) {
        std::random_device rd;
        g.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }

    try {
        std::filesystem::create_directories(g.output_dir);
        if (cmp->parsed())
            return cmd_compare(g, cmp_a, cmp_b, cmp_methods, cmp_scheme, cmp_permute, cmp_n_perm,
                               cmp_n_sim);
        if (sub->parsed())
            return cmd_subnetwork(g, sub_a, sub_b, sub_alpha, sub_n_min, sub_batch, sub_method);
        if (gen->parsed())
            return cmd_generate(g, gen_model, gen_n, gen_d, gen_alpha, gen_p, gen_wiring, gen_out);
        if (inf->parsed())
            return cmd_infer(g, inf_matrix, inf_b, inf_tau, inf_missing, inf_max_features,
                             inf_allow_large, inf_out);
        if (exp->parsed()) return cmd_experiment(g, exp_config);
        std::fprintf(stderr, "no subcommand selected\n");
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
}
