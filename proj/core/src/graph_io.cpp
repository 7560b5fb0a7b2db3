#include "ghd/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace ghd {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& origin, long line, const std::string& what) {
    std::ostringstream os;
    os << origin << ":" << line << ": " << what;
    throw std::invalid_argument(os.str());
}

} // namespace

LabeledGraph read_edge_list(std::istream& in, const std::string& origin) {
    std::vector<std::string> labels;
    std::unordered_map<std::string, int> index;
    bool pinned = false;

    auto intern = [&](const std::string& label, long line) {
        auto it = index.find(label);
        if (it != index.end()) return it->second;
        if (pinned) fail(origin, line, "node '" + label + "' not in #nodes: header");
        int id = static_cast<int>(labels.size());
        labels.push_back(label);
        index.emplace(label, id);
        return id;
    };

    std::vector<std::pair<int, int>> edges;
    std::string raw;
    long line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string tag = "#nodes:";
            if (line.rfind(tag, 0) == 0) {
                if (pinned) fail(origin, line_no, "duplicate #nodes: header");
                if (!labels.empty()) fail(origin, line_no, "#nodes: header must precede edges");
                std::string body = line.substr(tag.size());
                std::size_t start = 0;
                while (start <= body.size()) {
                    std::size_t comma = body.find(',', start);
                    std::string label = trim(comma == std::string::npos ? body.substr(start)
                                                                        : body.substr(start, comma - start));
                    if (!label.empty()) {
                        if (index.count(label))
                            fail(origin, line_no, "duplicate node '" + label + "' in #nodes: header");
                        index.emplace(label, static_cast<int>(labels.size()));
                        labels.push_back(label);
                    }
                    if (comma == std::string::npos) break;
                    start = comma + 1;
                }
                pinned = true;
            }
            continue;
        }
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a >> b)) fail(origin, line_no, "expected two node labels");
        if (ls >> extra) fail(origin, line_no, "expected exactly two node labels, got extra token '" + extra + "'");
        if (a == b) fail(origin, line_no, "self-loop on node '" + a + "'");
        int ia = intern(a, line_no); // sequence the interning: first-seen order
        int ib = intern(b, line_no);
        edges.emplace_back(ia, ib);
    }
    return LabeledGraph(std::move(labels), edges);
}

LabeledGraph read_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open edge list '" + path + "'");
    return read_edge_list(in, path);
}

void write_edge_list(std::ostream& out, const LabeledGraph& g) {
    out << "#nodes:";
    for (int i = 0; i < g.size(); ++i) out << (i == 0 ? " " : ",") << g.label(i);
    out << "\n";
    for (const auto& [i, j] : g.edges()) out << g.label(i) << "\t" << g.label(j) << "\n";
}

void write_edge_list_file(const std::string& path, const LabeledGraph& g) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
    write_edge_list(out, g);
    if (!out) throw std::runtime_error("failed writing edge list to '" + path + "'");
}

} // namespace ghd
