#include "cscale/partition.hpp"

#include <algorithm>
#include <string>

#include "cscale/errors.hpp"

namespace cscale {
namespace {

enum Part : char { kNone = 0, kX1 = 1, kX2 = 2, kX3 = 3 };

std::vector<char> label_parts(const Graph& g, const Partition& p) {
    std::vector<char> part(static_cast<std::size_t>(g.node_count()), kNone);
    auto mark = [&](const std::vector<int>& nodes, Part tag) {
        for (int v : nodes) {
            require_node(g, v, "partition node");
            if (part[v] != kNone) throw InvalidPartition("node " + std::to_string(v) + " appears in two parts");
            part[v] = tag;
        }
    };
    mark(p.x1, kX1);
    mark(p.x2, kX2);
    mark(p.x3, kX3);
    return part;
}

}  // namespace

void validate_partition(const Graph& g, const Partition& p) {
    if (p.x1.empty() || p.x3.empty()) throw InvalidPartition("X1 and X3 must be nonempty");
    const auto part = label_parts(g, p);
    if (std::find(part.begin(), part.end(), kNone) != part.end()) {
        throw InvalidPartition("parts do not cover every node");
    }
    for (const auto& e : g.edges()) {
        const char a = part[e.u], b = part[e.v];
        if ((a == kX1 && b == kX3) || (a == kX3 && b == kX1)) {
            throw InvalidPartition("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ") joins X1 and X3");
        }
    }
    for (int v : p.x2) {
        bool to1 = false, to3 = false;
        for (const auto& n : g.neighbors(v)) {
            to1 = to1 || part[n.node] == kX1;
            to3 = to3 || part[n.node] == kX3;
        }
        if (!to1 || !to3) {
            throw InvalidPartition("X2 node " + std::to_string(v) + " does not touch both X1 and X3");
        }
    }
}

bool is_valid_partition(const Graph& g, const Partition& p) {
    try {
        validate_partition(g, p);
        return true;
    } catch (const InvalidPartition&) {
        return false;
    }
}

std::vector<int> vertex_boundary(const Graph& g, const std::vector<int>& set) {
    std::vector<char> inside(static_cast<std::size_t>(g.node_count()), 0);
    for (int v : set) {
        require_node(g, v);
        inside[v] = 1;
    }
    std::vector<char> marked(inside.size(), 0);
    for (int v : set) {
        for (const auto& n : g.neighbors(v)) {
            if (!inside[n.node]) marked[n.node] = 1;
        }
    }
    std::vector<int> out;
    for (int v = 0; v < g.node_count(); ++v) {
        if (marked[v]) out.push_back(v);
    }
    return out;
}

Partition find_partition_boundary(const Graph& g, const std::vector<int>& x1_seed) {
    if (x1_seed.empty()) throw ValidationError("partition seed must be nonempty");
    require_connected(g);

    std::vector<char> part(static_cast<std::size_t>(g.node_count()), kX3);
    for (int v : x1_seed) {
        require_node(g, v, "seed node");
        part[v] = kX1;
    }
    for (int v : vertex_boundary(g, x1_seed)) part[v] = kX2;
    if (std::find(part.begin(), part.end(), kX3) == part.end()) throw EmptyX3();

    // Boundary nodes with no X3 neighbor join X1. X3 is unchanged by this, so
    // one pass suffices.
    std::vector<int> absorbed;
    for (int v = 0; v < g.node_count(); ++v) {
        if (part[v] != kX2) continue;
        const auto nbrs = g.neighbors(v);
        if (std::none_of(nbrs.begin(), nbrs.end(), [&](const auto& n) { return part[n.node] == kX3; })) {
            absorbed.push_back(v);
        }
    }
    for (int v : absorbed) part[v] = kX1;

    Partition p;
    for (int v = 0; v < g.node_count(); ++v) {
        (part[v] == kX1 ? p.x1 : part[v] == kX2 ? p.x2 : p.x3).push_back(v);
    }
    return p;
}

BottleneckBound bottleneck_bound(const Graph& g, const Partition& p, const DegreeBounds& bounds) {
    validate_partition(g, p);
    const auto part = label_parts(g, p);

    BottleneckBound b{0.0, 0.0, 0.0, 0.0};
    for (const auto& e : g.edges()) {
        const char a = part[e.u], c = part[e.v];
        if ((a == kX1 && c == kX2) || (a == kX2 && c == kX1)) b.d12 += e.weight;
        if ((a == kX3 && c == kX2) || (a == kX2 && c == kX3)) b.d32 += e.weight;
    }
    const double n1 = p.n1(), n2 = p.n2(), n3 = p.n3();
    b.exact = (n3 * n3 * b.d12 + n1 * n1 * b.d32) / (n3 * n3 * n1 + n1 * n1 * n3);
    b.loose = bounds.q * bounds.w_max * n2 / std::min(n1, n3);
    return b;
}

}  // namespace cscale
