#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "cscale/errors.hpp"
#include "cscale/graph.hpp"

namespace cscale {
namespace {

std::string line_error(int line_no, const std::string& msg) {
    return "edge list line " + std::to_string(line_no) + ": " + msg;
}

long parse_int(const std::string& token, int line_no) {
    long value = 0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw ValidationError(line_error(line_no, "expected integer, got '" + token + "'"));
    return value;
}

double parse_double(const std::string& token, int line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(line_error(line_no, "expected number, got '" + token + "'"));
    }
}

}  // namespace

Graph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    long declared_nodes = -1;
    long base = 0;
    long max_id = -1;
    bool seen_edge = false;
    struct Raw {
        long u, v;
        double w;
        int line;
    };
    std::vector<Raw> raw;

    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::vector<std::string> tokens;
        for (std::string t; fields >> t;) tokens.push_back(t);
        if (tokens.empty()) continue;

        if (tokens[0] == "nodes" || tokens[0] == "base") {
            if (tokens.size() != 2) throw ValidationError(line_error(line_no, "header takes one value"));
            if (seen_edge) throw ValidationError(line_error(line_no, "headers must precede edges"));
            const long value = parse_int(tokens[1], line_no);
            if (tokens[0] == "nodes") {
                if (value < 1) throw ValidationError(line_error(line_no, "node count must be positive"));
                declared_nodes = value;
            } else {
                if (value != 0 && value != 1) throw ValidationError(line_error(line_no, "base must be 0 or 1"));
                base = value;
            }
            continue;
        }
        if (tokens.size() != 2 && tokens.size() != 3) {
            throw ValidationError(line_error(line_no, "expected 'i j [w]'"));
        }
        seen_edge = true;
        Raw r{parse_int(tokens[0], line_no) - base, parse_int(tokens[1], line_no) - base,
              tokens.size() == 3 ? parse_double(tokens[2], line_no) : 1.0, line_no};
        if (r.u < 0 || r.v < 0) throw ValidationError(line_error(line_no, "node id below base"));
        max_id = std::max({max_id, r.u, r.v});
        raw.push_back(r);
    }

    const long n = declared_nodes > 0 ? declared_nodes : max_id + 1;
    if (n < 1) throw ValidationError("edge list declares no nodes");
    if (max_id >= n) throw ValidationError("edge list references node " + std::to_string(max_id + base) +
                                           " beyond declared node count " + std::to_string(n));
    std::vector<Graph::Edge> edges;
    edges.reserve(raw.size());
    for (const auto& r : raw) edges.push_back({static_cast<int>(r.u), static_cast<int>(r.v), r.w});
    return Graph(static_cast<int>(n), std::move(edges));
}

Graph read_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open edge list '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_edge_list(buffer.str());
}

std::string format_edge_list(const Graph& g) {
    // The header is only needed when the highest node id has no edges.
    int max_id = -1;
    for (const auto& e : g.edges()) max_id = std::max(max_id, e.v);
    std::string out = max_id + 1 == g.node_count() ? "" : "nodes " + std::to_string(g.node_count()) + "\n";
    char buf[64];
    for (const auto& e : g.edges()) {
        std::snprintf(buf, sizeof buf, "%d %d %.17g\n", e.u, e.v, e.weight);
        out += buf;
    }
    return out;
}

void write_edge_list(const Graph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write edge list '" + path + "'");
    out << format_edge_list(g);
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

}  // namespace cscale
