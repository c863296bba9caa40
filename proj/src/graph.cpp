#include "cscale/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "cscale/errors.hpp"

namespace cscale {

Graph::Graph(int node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)), adjacency_() {
    if (node_count_ < 1) throw ValidationError("graph needs at least one node");
    for (auto& e : edges_) {
        if (e.u < 0 || e.u >= node_count_ || e.v < 0 || e.v >= node_count_) {
            throw ValidationError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                  ") references a node outside 0.." + std::to_string(node_count_ - 1));
        }
        if (e.u == e.v) throw ValidationError("self-loop at node " + std::to_string(e.u));
        if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
            throw ValidationError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                  ") has non-positive or non-finite weight");
        }
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
    for (std::size_t k = 1; k < edges_.size(); ++k) {
        if (edges_[k].u == edges_[k - 1].u && edges_[k].v == edges_[k - 1].v) {
            throw ValidationError("duplicate edge (" + std::to_string(edges_[k].u) + ", " +
                                  std::to_string(edges_[k].v) + ")");
        }
    }

    adjacency_.resize(static_cast<std::size_t>(node_count_));
    for (const auto& e : edges_) {
        adjacency_[e.u].push_back({e.v, e.weight});
        adjacency_[e.v].push_back({e.u, e.weight});
    }
    for (auto& row : adjacency_) {
        std::sort(row.begin(), row.end(), [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    }
}

std::span<const Graph::Neighbor> Graph::neighbors(int node) const {
    require_node(*this, node);
    return adjacency_[node];
}

bool Graph::has_edge(int i, int j) const { return weight(i, j) > 0.0; }

double Graph::weight(int i, int j) const {
    require_node(*this, i);
    require_node(*this, j);
    const auto& row = adjacency_[i];
    auto it = std::lower_bound(row.begin(), row.end(), j, [](const Neighbor& n, int v) { return n.node < v; });
    return (it != row.end() && it->node == j) ? it->weight : 0.0;
}

int Graph::degree(int node) const { return static_cast<int>(neighbors(node).size()); }

double Graph::weighted_degree(int node) const {
    double d = 0.0;
    for (const auto& n : neighbors(node)) d += n.weight;
    return d;
}

int Graph::max_degree() const {
    std::size_t q = 0;
    for (const auto& row : adjacency_) q = std::max(q, row.size());
    return static_cast<int>(q);
}

double Graph::min_weight() const {
    if (edges_.empty()) return 0.0;
    return std::min_element(edges_.begin(), edges_.end(),
                            [](const Edge& a, const Edge& b) { return a.weight < b.weight; })
        ->weight;
}

double Graph::max_weight() const {
    if (edges_.empty()) return 0.0;
    return std::max_element(edges_.begin(), edges_.end(),
                            [](const Edge& a, const Edge& b) { return a.weight < b.weight; })
        ->weight;
}

bool Graph::is_connected() const {
    std::vector<char> seen(static_cast<std::size_t>(node_count_), 0);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!frontier.empty()) {
        const int i = frontier.front();
        frontier.pop();
        for (const auto& n : adjacency_[i]) {
            if (!seen[n.node]) {
                seen[n.node] = 1;
                ++reached;
                frontier.push(n.node);
            }
        }
    }
    return reached == node_count_;
}

bool Graph::is_complete() const {
    const auto n = static_cast<std::size_t>(node_count_);
    return edges_.size() == n * (n - 1) / 2;
}

DegreeBounds::DegreeBounds(int q_, double w_min_, double w_max_) : q(q_), w_min(w_min_), w_max(w_max_) {
    if (q < 1) throw ValidationError("degree bound q must be at least 1");
    if (!(w_min > 0.0) || !(w_min <= w_max) || !std::isfinite(w_max)) {
        throw ValidationError("weight bounds must satisfy 0 < w_min <= w_max < inf");
    }
}

DegreeBounds DegreeBounds::of(const Graph& g) {
    if (g.edge_count() == 0) throw ValidationError("graph has no edges");
    return DegreeBounds(g.max_degree(), g.min_weight(), g.max_weight());
}

AssumptionReport validate_assumptions(const Graph& g, const DegreeBounds& bounds) {
    AssumptionReport report;
    for (int i = 0; i < g.node_count(); ++i) {
        const int d = g.degree(i);
        if (d > bounds.q) report.degree_violations.push_back({i, d});
    }
    for (const auto& e : g.edges()) {
        if (e.weight < bounds.w_min || e.weight > bounds.w_max) {
            report.weight_violations.push_back({e.u, e.v, e.weight});
        }
    }
    return report;
}

void require_node(const Graph& g, int node, const char* what) {
    if (node < 0 || node >= g.node_count()) {
        throw ValidationError(std::string(what) + " id " + std::to_string(node) + " outside 0.." +
                              std::to_string(g.node_count() - 1));
    }
}

void require_connected(const Graph& g) {
    if (!g.is_connected()) throw DisconnectedGraph();
}

}  // namespace cscale
