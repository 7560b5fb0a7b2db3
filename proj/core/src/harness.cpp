#include "ghd/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ghd/baselines.hpp"
#include "ghd/detail/kahan.hpp"
#include "ghd/parallel.hpp"
#include "ghd/rng.hpp"
#include "ghd/stat.hpp"

namespace ghd {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string fmt_double(double v) {
    if (std::isnan(v)) return "";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void check_keys(const ordered_json& obj, std::initializer_list<const char*> allowed,
                const std::string& origin, const std::string& where) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                ok = true;
                break;
            }
        if (!ok)
            throw std::invalid_argument(origin + ": unknown key '" + item.key() + "' in " + where);
    }
}

// Mean and (Bessel-corrected) standard error over the non-missing slots.
struct MeanSe {
    double mean = kMissing;
    double se = kMissing;
    long long n = 0;
};

MeanSe mean_se(const std::vector<double>& xs) {
    detail::Kahan sum;
    long long n = 0;
    for (double x : xs) {
        if (std::isnan(x)) continue;
        sum.add(x);
        ++n;
    }
    MeanSe out;
    out.n = n;
    if (n == 0) return out;
    out.mean = sum.value() / static_cast<double>(n);
    if (n == 1) return out;
    detail::Kahan sq;
    for (double x : xs) {
        if (std::isnan(x)) continue;
        double d = x - out.mean;
        sq.add(d * d);
    }
    double var = sq.value() / static_cast<double>(n - 1);
    out.se = std::sqrt(var / static_cast<double>(n));
    return out;
}

double quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return kMissing;
    if (sorted.size() == 1) return sorted[0];
    double pos = q * static_cast<double>(sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    if (lo >= sorted.size() - 1) return sorted.back();
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

double ks_distance_uniform(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double hi = static_cast<double>(i + 1) / n - xs[i];
        double lo = xs[i] - static_cast<double>(i) / n;
        d = std::max(d, std::max(hi, lo));
    }
    return d;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.replicates < 1) throw std::invalid_argument("experiment: replicates must be >= 1");
    for (double g : cfg.gammas)
        if (!(g >= 0.0 && g <= 1.0))
            throw std::invalid_argument("experiment: gammas must lie in [0,1]");
    if (!(cfg.level > 0.0 && cfg.level < 1.0))
        throw std::invalid_argument("experiment: level must be in (0,1)");
    if (cfg.n_perm < 1 || cfg.n_sim < 1)
        throw std::invalid_argument("experiment: n_perm and n_sim must be >= 1");
    if (cfg.methods.empty()) throw std::invalid_argument("experiment: no methods selected");

    switch (cfg.kind) {
        case ExperimentKind::null_uniformity:
            for (TestMethod m : cfg.methods)
                if (m != TestMethod::ghd)
                    throw std::invalid_argument("null_uniformity supports only the GHD method");
            break;
        case ExperimentKind::power_curve:
            if (cfg.gammas.empty())
                throw std::invalid_argument("power_curve: gammas must be non-empty");
            for (TestMethod m : cfg.methods)
                if (m != TestMethod::ghd && m != TestMethod::mad && m != TestMethod::qap &&
                    m != TestMethod::cug)
                    throw std::invalid_argument(
                        "power_curve methods must be among GHD, MAD, QAP, CUG");
            break;
        case ExperimentKind::recovery:
            if (cfg.gammas.empty())
                throw std::invalid_argument("recovery: gammas must be non-empty");
            for (TestMethod m : cfg.methods)
                if (m != TestMethod::dghd && m != TestMethod::dhd)
                    throw std::invalid_argument("recovery methods must be among dGHD, dHD");
            if (cfg.subnet_size < 1 || cfg.subnet_size > cfg.generator.n)
                throw std::invalid_argument("recovery: subnet_size must be in [1, n]");
            break;
    }
}

ExperimentReport run_null_uniformity(const ExperimentConfig& cfg, int n_workers) {
    const int r = cfg.replicates;
    std::vector<double> p(static_cast<std::size_t>(r), kMissing);
    parallel_for(r, n_workers, [&](std::int64_t i) {
        std::uint64_t idx = static_cast<std::uint64_t>(i);
        LabeledGraph ga = generate(cfg.generator, derive_seed(cfg.seed, idx, 1));
        LabeledGraph gb = generate(cfg.generator, derive_seed(cfg.seed, idx, 2));
        TestResult t = ghd_test(ga, gb, cfg.scheme, 1);
        p[static_cast<std::size_t>(i)] = t.degenerate ? kMissing : t.p_association;
    });

    ExperimentReport report;
    report.config = cfg;
    for (double v : p) report.rows.push_back({"GHD", kMissing, "p_value", v, kMissing});

    std::vector<double> clean;
    clean.reserve(p.size());
    for (double v : p)
        if (!std::isnan(v)) clean.push_back(v);
    if (!clean.empty()) {
        report.rows.push_back(
            {"GHD", kMissing, "ks_distance", ks_distance_uniform(clean), kMissing});
        std::sort(clean.begin(), clean.end());
        for (double q : {0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99})
            report.rows.push_back(
                {"GHD", kMissing, "qq_" + fmt_double(q), quantile(clean, q), kMissing});
    }
    return report;
}

ExperimentReport run_power_curve(const ExperimentConfig& cfg, int n_workers) {
    const int r = cfg.replicates;
    const std::size_t n_gamma = cfg.gammas.size();
    const std::size_t n_method = cfg.methods.size();
    // accept[m][g*r + i]: 1 accept, 0 reject, NaN unusable
    std::vector<std::vector<double>> accept(
        n_method, std::vector<double>(n_gamma * static_cast<std::size_t>(r), kMissing));

    parallel_for(static_cast<std::int64_t>(n_gamma) * r, n_workers, [&](std::int64_t flat) {
        const std::size_t gi = static_cast<std::size_t>(flat) / static_cast<std::size_t>(r);
        const std::uint64_t idx = static_cast<std::uint64_t>(flat);
        const double gamma = cfg.gammas[gi];
        LabeledGraph ga = generate(cfg.generator, derive_seed(cfg.seed, idx, 1));
        LabeledGraph gb = shuffle_edges(ga, gamma, derive_seed(cfg.seed, idx, 2), cfg.rewire);
        for (std::size_t m = 0; m < n_method; ++m) {
            double pval = kMissing;
            switch (cfg.methods[m]) {
                case TestMethod::ghd: {
                    TestResult t = ghd_test(ga, gb, cfg.scheme, 1);
                    if (!t.degenerate) pval = t.p_association;
                    break;
                }
                case TestMethod::mad:
                    pval = permutation_test(BaselineMethod::mad, ga, gb, cfg.n_perm,
                                            derive_seed(cfg.seed, idx, 3), 1)
                               .p_value;
                    break;
                case TestMethod::qap:
                    pval = permutation_test(BaselineMethod::qap, ga, gb, cfg.n_perm,
                                            derive_seed(cfg.seed, idx, 4), 1)
                               .p_value;
                    break;
                case TestMethod::cug: {
                    BaselineResult b =
                        cug_test(ga, gb, cfg.n_sim, derive_seed(cfg.seed, idx, 5), 1);
                    if (!b.degenerate) pval = b.p_value;
                    break;
                }
                default:
                    break;
            }
            if (!std::isnan(pval))
                accept[m][static_cast<std::size_t>(flat)] = pval > cfg.level ? 1.0 : 0.0;
        }
    });

    ExperimentReport report;
    report.config = cfg;
    for (std::size_t gi = 0; gi < n_gamma; ++gi)
        for (std::size_t m = 0; m < n_method; ++m) {
            std::vector<double> slice(accept[m].begin() + static_cast<std::ptrdiff_t>(gi * static_cast<std::size_t>(r)),
                                      accept[m].begin() + static_cast<std::ptrdiff_t>((gi + 1) * static_cast<std::size_t>(r)));
            MeanSe ms = mean_se(slice);
            report.rows.push_back(
                {to_string(cfg.methods[m]), cfg.gammas[gi], "power", ms.mean, ms.se});
        }
    return report;
}

ExperimentReport run_recovery(const ExperimentConfig& cfg, int n_workers) {
    const int r = cfg.replicates;
    const std::size_t n_gamma = cfg.gammas.size();
    const std::size_t n_method = cfg.methods.size();
    const std::size_t cells = n_gamma * static_cast<std::size_t>(r);
    std::vector<std::vector<double>> tpr(n_method, std::vector<double>(cells, kMissing));
    std::vector<std::vector<double>> spc(n_method, std::vector<double>(cells, kMissing));

    parallel_for(static_cast<std::int64_t>(cells), n_workers, [&](std::int64_t flat) {
        const std::size_t gi = static_cast<std::size_t>(flat) / static_cast<std::size_t>(r);
        const std::uint64_t idx = static_cast<std::uint64_t>(flat);
        const double gamma = cfg.gammas[gi];
        PlantedPair planted = plant_differential(cfg.generator, gamma, cfg.subnet_size,
                                                 derive_seed(cfg.seed, idx, 7), cfg.rewire);
        std::vector<char> truth(static_cast<std::size_t>(cfg.generator.n), 0);
        for (int v : planted.v_star) truth[static_cast<std::size_t>(v)] = 1;

        for (std::size_t m = 0; m < n_method; ++m) {
            DetectionConfig det = cfg.detection;
            det.scheme = cfg.methods[m] == TestMethod::dhd ? WeightScheme::adjacency
                                                           : WeightScheme::topological_overlap;
            det.n_workers = 1;
            det.delta_observer = nullptr;
            DetectionResult res = detect(planted.a, planted.b, det);

            long long tp = 0, fp = 0;
            for (const std::string& label : res.v_star) {
                int id = planted.a.index_of(label);
                if (id >= 0 && truth[static_cast<std::size_t>(id)])
                    ++tp;
                else
                    ++fp;
            }
            const long long pos = static_cast<long long>(planted.v_star.size());
            const long long neg = static_cast<long long>(cfg.generator.n) - pos;
            const long long fn = pos - tp;
            const long long tn = neg - fp;
            tpr[m][static_cast<std::size_t>(flat)] =
                pos > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : kMissing;
            spc[m][static_cast<std::size_t>(flat)] =
                neg > 0 ? static_cast<double>(tn) / static_cast<double>(fp + tn) : kMissing;
        }
    });

    ExperimentReport report;
    report.config = cfg;
    for (std::size_t gi = 0; gi < n_gamma; ++gi)
        for (std::size_t m = 0; m < n_method; ++m) {
            auto slice = [&](const std::vector<double>& all) {
                return std::vector<double>(
                    all.begin() + static_cast<std::ptrdiff_t>(gi * static_cast<std::size_t>(r)),
                    all.begin() + static_cast<std::ptrdiff_t>((gi + 1) * static_cast<std::size_t>(r)));
            };
            MeanSe t = mean_se(slice(tpr[m]));
            MeanSe s = mean_se(slice(spc[m]));
            report.rows.push_back(
                {to_string(cfg.methods[m]), cfg.gammas[gi], "TPR", t.mean, t.se});
            report.rows.push_back(
                {to_string(cfg.methods[m]), cfg.gammas[gi], "SPC", s.mean, s.se});
        }
    return report;
}

} // namespace

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::null_uniformity: return "null_uniformity";
        case ExperimentKind::power_curve: return "power_curve";
        case ExperimentKind::recovery: return "recovery";
    }
    return "?";
}

std::string to_string(TestMethod m) {
    switch (m) {
        case TestMethod::ghd: return "GHD";
        case TestMethod::mad: return "MAD";
        case TestMethod::qap: return "QAP";
        case TestMethod::cug: return "CUG";
        case TestMethod::dghd: return "dGHD";
        case TestMethod::dhd: return "dHD";
    }
    return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
    if (s == "null_uniformity") return ExperimentKind::null_uniformity;
    if (s == "power_curve") return ExperimentKind::power_curve;
    if (s == "recovery") return ExperimentKind::recovery;
    throw std::invalid_argument("unknown experiment kind '" + s +
                                "' (expected null_uniformity, power_curve, or recovery)");
}

TestMethod test_method_from_string(const std::string& s) {
    if (s == "GHD" || s == "ghd") return TestMethod::ghd;
    if (s == "MAD" || s == "mad") return TestMethod::mad;
    if (s == "QAP" || s == "qap") return TestMethod::qap;
    if (s == "CUG" || s == "cug") return TestMethod::cug;
    if (s == "dGHD" || s == "dghd") return TestMethod::dghd;
    if (s == "dHD" || s == "dhd") return TestMethod::dhd;
    throw std::invalid_argument("unknown test method '" + s +
                                "' (expected GHD, MAD, QAP, CUG, dGHD, or dHD)");
}

ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.generator.model = GraphModel::rg2d;
    switch (kind) {
        case ExperimentKind::null_uniformity:
            cfg.generator.n = 250;
            cfg.generator.d = 0.3;
            cfg.replicates = 2000;
            cfg.methods = {TestMethod::ghd};
            break;
        case ExperimentKind::power_curve:
            cfg.generator.n = 250;
            cfg.generator.d = 0.3;
            cfg.replicates = 200;
            cfg.gammas = {0.5, 0.7, 0.8, 0.84, 0.88, 0.93, 0.97, 1.0};
            cfg.methods = {TestMethod::ghd, TestMethod::mad, TestMethod::qap, TestMethod::cug};
            break;
        case ExperimentKind::recovery:
            cfg.generator.n = 1000;
            cfg.generator.d = 0.15;
            cfg.replicates = 25;
            cfg.gammas = {0.055, 0.11, 0.23, 0.54, 0.79, 0.95};
            cfg.methods = {TestMethod::dghd, TestMethod::dhd};
            cfg.subnet_size = 200;
            cfg.detection.alpha = 0.05;
            cfg.detection.n_min = 100;
            cfg.detection.batch = 1;
            break;
    }
    return cfg;
}

ExperimentConfig parse_experiment_config(const std::string& json_text, const std::string& origin) {
    ordered_json root;
    try {
        root = ordered_json::parse(json_text);
    } catch (const ordered_json::exception& e) {
        throw std::invalid_argument(origin + ": " + e.what());
    }
    if (!root.is_object()) throw std::invalid_argument(origin + ": config must be a JSON object");
    check_keys(root,
               {"kind", "generator", "replicates", "gammas", "methods", "scheme", "level",
                "n_perm", "n_sim", "rewire", "subnet_size", "detection", "seed"},
               origin, "config");
    if (!root.contains("kind"))
        throw std::invalid_argument(origin + ": config requires a 'kind' field");

    ExperimentConfig cfg;
    try {
        cfg = default_config(experiment_kind_from_string(root["kind"].get<std::string>()));

        if (root.contains("generator")) {
            const auto& gen = root["generator"];
            check_keys(gen, {"model", "n", "d", "alpha", "p", "wiring"}, origin, "generator");
            if (gen.contains("model"))
                cfg.generator.model = graph_model_from_string(gen["model"].get<std::string>());
            if (gen.contains("n")) cfg.generator.n = gen["n"].get<int>();
            if (gen.contains("d")) cfg.generator.d = gen["d"].get<double>();
            if (gen.contains("alpha")) cfg.generator.alpha = gen["alpha"].get<double>();
            if (gen.contains("p")) cfg.generator.p = gen["p"].get<double>();
            if (gen.contains("wiring"))
                cfg.generator.wiring = sf_wiring_from_string(gen["wiring"].get<std::string>());
        }
        if (root.contains("replicates")) cfg.replicates = root["replicates"].get<int>();
        if (root.contains("gammas")) cfg.gammas = root["gammas"].get<std::vector<double>>();
        if (root.contains("methods")) {
            cfg.methods.clear();
            for (const auto& m : root["methods"])
                cfg.methods.push_back(test_method_from_string(m.get<std::string>()));
        }
        if (root.contains("scheme"))
            cfg.scheme = weight_scheme_from_string(root["scheme"].get<std::string>());
        if (root.contains("level")) cfg.level = root["level"].get<double>();
        if (root.contains("n_perm")) cfg.n_perm = root["n_perm"].get<long long>();
        if (root.contains("n_sim")) cfg.n_sim = root["n_sim"].get<long long>();
        if (root.contains("rewire"))
            cfg.rewire = rewire_mode_from_string(root["rewire"].get<std::string>());
        if (root.contains("subnet_size")) cfg.subnet_size = root["subnet_size"].get<int>();
        if (root.contains("detection")) {
            const auto& det = root["detection"];
            check_keys(det, {"alpha", "n_min", "batch", "adjust"}, origin, "detection");
            if (det.contains("alpha")) cfg.detection.alpha = det["alpha"].get<double>();
            if (det.contains("n_min")) cfg.detection.n_min = det["n_min"].get<int>();
            if (det.contains("batch")) cfg.detection.batch = det["batch"].get<int>();
            if (det.contains("adjust")) cfg.detection.adjust = det["adjust"].get<std::string>();
        }
        if (root.contains("seed")) {
            cfg.seed = root["seed"].get<std::uint64_t>();
            cfg.seed_set = true;
        }
    } catch (const ordered_json::exception& e) {
        throw std::invalid_argument(origin + ": " + e.what());
    }
    validate(cfg);
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open experiment config: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config(buf.str(), path);
}

std::string resolved_config_json(const ExperimentConfig& cfg) {
    ordered_json gen;
    gen["model"] = to_string(cfg.generator.model);
    gen["n"] = cfg.generator.n;
    switch (cfg.generator.model) {
        case GraphModel::rg2d: gen["d"] = cfg.generator.d; break;
        case GraphModel::sf:
            gen["alpha"] = cfg.generator.alpha;
            gen["wiring"] = to_string(cfg.generator.wiring);
            break;
        case GraphModel::er: gen["p"] = cfg.generator.p; break;
    }

    ordered_json root;
    root["kind"] = to_string(cfg.kind);
    root["generator"] = gen;
    root["replicates"] = cfg.replicates;
    if (cfg.kind != ExperimentKind::null_uniformity) root["gammas"] = cfg.gammas;
    {
        std::vector<std::string> methods;
        for (TestMethod m : cfg.methods) methods.push_back(to_string(m));
        root["methods"] = methods;
    }
    root["scheme"] = to_string(cfg.scheme);
    root["level"] = cfg.level;
    if (cfg.kind == ExperimentKind::power_curve) {
        root["n_perm"] = cfg.n_perm;
        root["n_sim"] = cfg.n_sim;
    }
    if (cfg.kind != ExperimentKind::null_uniformity) root["rewire"] = to_string(cfg.rewire);
    if (cfg.kind == ExperimentKind::recovery) {
        root["subnet_size"] = cfg.subnet_size;
        ordered_json det;
        det["alpha"] = cfg.detection.alpha;
        det["n_min"] = cfg.detection.n_min;
        det["batch"] = cfg.detection.batch;
        det["adjust"] = cfg.detection.adjust;
        root["detection"] = det;
    }
    root["seed"] = cfg.seed;
    return root.dump(2) + "\n";
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, int n_workers) {
    validate(cfg);
    switch (cfg.kind) {
        case ExperimentKind::null_uniformity: return run_null_uniformity(cfg, n_workers);
        case ExperimentKind::power_curve: return run_power_curve(cfg, n_workers);
        case ExperimentKind::recovery: return run_recovery(cfg, n_workers);
    }
    throw std::invalid_argument("run_experiment: unknown kind");
}

void write_report_csv(const ExperimentReport& report, std::ostream& out) {
    out << "method,gamma,metric,value,mc_stderr\n";
    for (const ReportRow& row : report.rows)
        out << row.method << ',' << fmt_double(row.gamma) << ',' << row.metric << ','
            << fmt_double(row.value) << ',' << fmt_double(row.mc_stderr) << '\n';
}

std::string report_csv(const ExperimentReport& report) {
    std::ostringstream out;
    write_report_csv(report, out);
    return out.str();
}

std::string report_metadata_json(const ExperimentReport& report, int n_workers) {
    ordered_json meta;
    meta["config"] = ordered_json::parse(resolved_config_json(report.config));
    meta["rows"] = report.rows.size();
    meta["workers"] = n_workers;
    return meta.dump(2) + "\n";
}

} // namespace ghd
