#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cscale {

// Undirected weighted simple graph on nodes 0..N-1. Immutable after
// construction; edges are stored once with u < v, sorted lexicographically.
class Graph {
public:
    struct Edge {
        int u;
        int v;
        double weight;

        friend bool operator==(const Edge&, const Edge&) = default;
    };

    struct Neighbor {
        int node;
        double weight;
    };

    // Throws ValidationError on self-loops, duplicate edges, out-of-range
    // endpoints or non-positive weights.
    Graph(int node_count, std::vector<Edge> edges);

    int node_count() const { return node_count_; }
    std::size_t edge_count() const { return edges_.size(); }
    std::span<const Edge> edges() const { return edges_; }
    std::span<const Neighbor> neighbors(int node) const;

    bool has_edge(int i, int j) const;
    // Zero when (i, j) is not an edge.
    double weight(int i, int j) const;

    // Neighbor count |N_i|.
    int degree(int node) const;
    // d_i = sum of incident edge weights.
    double weighted_degree(int node) const;

    int max_degree() const;
    double min_weight() const;
    double max_weight() const;

    bool is_connected() const;
    bool is_complete() const;

private:
    int node_count_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Neighbor>> adjacency_;
};

// Bounded degree and weights: at most q neighbors per node, weights in [w_min, w_max].
struct DegreeBounds {
    int q;
    double w_min;
    double w_max;

    DegreeBounds(int q, double w_min, double w_max);

    // Tightest bounds the graph satisfies (q = max degree, weight range).
    static DegreeBounds of(const Graph& g);
};

struct AssumptionReport {
    struct DegreeViolation {
        int node;
        int degree;
    };
    struct WeightViolation {
        int u;
        int v;
        double weight;
    };

    std::vector<DegreeViolation> degree_violations;
    std::vector<WeightViolation> weight_violations;

    bool compliant() const { return degree_violations.empty() && weight_violations.empty(); }
};

AssumptionReport validate_assumptions(const Graph& g, const DegreeBounds& bounds);

void require_node(const Graph& g, int node, const char* what = "node");
void require_connected(const Graph& g);

// Edge-list text format: one `i j [w]` per line, `#` comments, optional
// `nodes N` header and optional `base 0|1` header (default 0). Without a
// `nodes` header the node count is max id + 1.
Graph read_edge_list(const std::string& path);
Graph parse_edge_list(const std::string& text);
std::string format_edge_list(const Graph& g);
void write_edge_list(const Graph& g, const std::string& path);

}  // namespace cscale
