#include "ghd/infer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <unordered_set>

#include "ghd/detail/kahan.hpp"
#include "ghd/parallel.hpp"

namespace ghd {

namespace {

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& msg) {
    throw std::invalid_argument(origin + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = line.find(delim, start);
        if (pos == std::string::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
}

bool is_missing(const std::string& tok) {
    if (tok.empty()) return true;
    std::string low;
    low.reserve(tok.size());
    for (char c : tok) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return low == "na" || low == "nan" || low == "n/a";
}

} // namespace

LoadedMatrix read_matrix(std::istream& in, const std::string& origin, MatrixFormat format,
                         MissingPolicy policy) {
    std::string line;
    std::size_t lineno = 0;

    // Header: skip blank leading lines.
    std::vector<std::string> header;
    char delim = ',';
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        if (format == MatrixFormat::tsv)
            delim = '\t';
        else if (format == MatrixFormat::autodetect && line.find('\t') != std::string::npos)
            delim = '\t';
        header = split(line, delim);
        break;
    }
    if (header.size() < 2) fail(origin, lineno == 0 ? 1 : lineno, "expected a header row with at least one feature label");

    std::vector<std::string> features(header.begin() + 1, header.end());
    const std::size_t f = features.size();
    {
        std::unordered_set<std::string> seen;
        for (const auto& name : features) {
            if (name.empty()) fail(origin, lineno, "empty feature label in header");
            if (!seen.insert(name).second) fail(origin, lineno, "duplicate feature label '" + name + "'");
        }
    }

    std::vector<std::string> samples;
    std::vector<double> cells;             // row-major over all f columns
    std::vector<char> missing_col(f, 0);   // columns with any missing cell
    std::unordered_set<std::string> seen_samples;

    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<std::string> tok = split(line, delim);
        if (tok.size() != f + 1)
            fail(origin, lineno,
                 "expected " + std::to_string(f + 1) + " cells, found " + std::to_string(tok.size()));
        if (tok[0].empty()) fail(origin, lineno, "empty sample label");
        if (!seen_samples.insert(tok[0]).second)
            fail(origin, lineno, "duplicate sample label '" + tok[0] + "'");
        samples.push_back(tok[0]);
        for (std::size_t c = 0; c < f; ++c) {
            const std::string& t = tok[c + 1];
            if (is_missing(t)) {
                if (policy == MissingPolicy::error)
                    fail(origin, lineno, "missing value in feature '" + features[c] + "'");
                missing_col[c] = 1;
                cells.push_back(std::nan(""));
                continue;
            }
            const char* begin = t.c_str();
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin || *end != '\0')
                fail(origin, lineno, "non-numeric cell '" + t + "' in feature '" + features[c] + "'");
            cells.push_back(v);
        }
    }
    if (samples.empty()) fail(origin, lineno == 0 ? 1 : lineno, "no data rows");

    LoadedMatrix out;
    out.data.samples = std::move(samples);

    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < f; ++c) {
        if (missing_col[c])
            out.dropped_missing.push_back(features[c]);
        else
            keep.push_back(c);
    }
    out.data.features.reserve(keep.size());
    for (std::size_t c : keep) out.data.features.push_back(features[c]);
    out.data.values.reserve(out.data.samples.size() * keep.size());
    for (std::size_t r = 0; r < out.data.samples.size(); ++r)
        for (std::size_t c : keep) out.data.values.push_back(cells[r * f + c]);

    if (out.data.features.empty())
        throw std::invalid_argument(origin + ": every feature column contained missing values");
    if (out.data.samples.size() < 3)
        throw std::invalid_argument(origin + ": need at least 3 samples for correlations, found " +
                                    std::to_string(out.data.samples.size()));
    return out;
}

LoadedMatrix read_matrix_file(const std::string& path, MatrixFormat format, MissingPolicy policy) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
    if (format == MatrixFormat::autodetect) {
        auto ends_with = [&](const char* suffix) {
            std::string_view sv(path);
            std::string_view sf(suffix);
            return sv.size() >= sf.size() && sv.substr(sv.size() - sf.size()) == sf;
        };
        if (ends_with(".tsv") || ends_with(".tab")) format = MatrixFormat::tsv;
        else if (ends_with(".csv")) format = MatrixFormat::csv;
    }
    return read_matrix(in, path, format, policy);
}

CorrelationNetwork correlation_adjacency(const DataMatrix& data, const CorrelationNetworkOptions& opt) {
    const int s = data.n_samples();
    const int f_all = data.n_features();
    if (s < 3) throw std::invalid_argument("correlation_adjacency: need at least 3 samples");
    if (!(opt.b >= 1.0)) throw std::invalid_argument("correlation_adjacency: exponent b must be >= 1");
    if (!(opt.tau > 0.0 && opt.tau < 1.0))
        throw std::invalid_argument("correlation_adjacency: tau must be in (0,1)");

    // Centre each feature; zero-variance features have no defined correlation
    // and are dropped.
    CorrelationNetwork out;
    std::vector<int> keep;
    std::vector<double> centered; // feature-major, keep.size() x s
    std::vector<double> norms;
    centered.reserve(static_cast<std::size_t>(f_all) * static_cast<std::size_t>(s));
    for (int c = 0; c < f_all; ++c) {
        detail::Kahan mean_acc;
        for (int r = 0; r < s; ++r) mean_acc.add(data.value(r, c));
        const double mean = mean_acc.value() / static_cast<double>(s);
        detail::Kahan sq;
        std::size_t base = centered.size();
        for (int r = 0; r < s; ++r) {
            double v = data.value(r, c) - mean;
            centered.push_back(v);
            sq.add(v * v);
        }
        const double nsq = sq.value();
        if (nsq <= 0.0) {
            centered.resize(base); // discard the column
            out.dropped_const.push_back(data.features[static_cast<std::size_t>(c)]);
            continue;
        }
        keep.push_back(c);
        norms.push_back(std::sqrt(nsq));
    }

    const int f = static_cast<int>(keep.size());
    if (f > opt.max_features && !opt.allow_large)
        throw std::invalid_argument(
            "correlation_adjacency: " + std::to_string(f) + " features exceed the cap of " +
            std::to_string(opt.max_features) + " (an O(F^2 S) dense job); raise the cap to proceed");

    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(f));
    for (int c : keep) labels.push_back(data.features[static_cast<std::size_t>(c)]);

    const std::size_t n_pairs = static_cast<std::size_t>(f) * (f > 0 ? static_cast<std::size_t>(f - 1) : 0) / 2;
    if (opt.keep_omega) out.omega.assign(n_pairs, 0.0);
    std::vector<std::vector<std::pair<int, int>>> edges_by_row(static_cast<std::size_t>(f));

    parallel_for(f, opt.n_workers, [&](std::int64_t ii) {
        const int i = static_cast<int>(ii);
        const double* xi = centered.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(s);
        auto& row_edges = edges_by_row[static_cast<std::size_t>(i)];
        // Upper-triangle pack offset for row i.
        const std::size_t row_base = static_cast<std::size_t>(i) * static_cast<std::size_t>(f) -
                                     static_cast<std::size_t>(i) * (static_cast<std::size_t>(i) + 1) / 2;
        for (int j = i + 1; j < f; ++j) {
            const double* xj = centered.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(s);
            double dot = 0.0;
            for (int r = 0; r < s; ++r) dot += xi[r] * xj[r];
            double cor = dot / (norms[static_cast<std::size_t>(i)] * norms[static_cast<std::size_t>(j)]);
            cor = std::clamp(cor, -1.0, 1.0);
            const double omega = std::pow(std::abs((1.0 + cor) / 2.0), opt.b);
            if (opt.keep_omega)
                out.omega[row_base + static_cast<std::size_t>(j - i - 1)] = omega;
            if (omega > opt.tau) row_edges.emplace_back(i, j);
        }
    });

    std::vector<std::pair<int, int>> edges;
    for (const auto& row : edges_by_row) edges.insert(edges.end(), row.begin(), row.end());
    out.graph = LabeledGraph(std::move(labels), edges);
    return out;
}

} // namespace ghd
