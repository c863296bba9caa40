#pragma once

#include <vector>

#include "cscale/graph.hpp"

namespace cscale {

// Three-way vertex split with no X1-X3 edges; every X2 node touches both X1
// and X3. The parts need not induce connected subgraphs.
struct Partition {
    std::vector<int> x1;
    std::vector<int> x2;
    std::vector<int> x3;

    int n1() const { return static_cast<int>(x1.size()); }
    int n2() const { return static_cast<int>(x2.size()); }
    int n3() const { return static_cast<int>(x3.size()); }
};

// Throws InvalidPartition when `p` is not a valid bottleneck split of `g`.
void validate_partition(const Graph& g, const Partition& p);
bool is_valid_partition(const Graph& g, const Partition& p);

// Vertex boundary: nodes outside `set` adjacent to at least one node in it.
std::vector<int> vertex_boundary(const Graph& g, const std::vector<int>& set);

// X1 = seed, X2 = boundary of the seed, X3 = the rest. Boundary nodes with no
// neighbor in X3 are absorbed into X1 so the result satisfies the partition
// invariants. Throws EmptyX3 when nothing is left for X3.
Partition find_partition_boundary(const Graph& g, const std::vector<int>& x1_seed);

struct BottleneckBound {
    double d12;    // total weight of X1-X2 edges
    double d32;    // total weight of X3-X2 edges
    double exact;  // Rayleigh quotient of the two-level test vector
    double loose;  // q * w_max * N2 / min(N1, N3)
};

// Upper bounds on lambda_2 from the partition. `bounds` must cover `g`
// (max degree <= q, weights <= w_max) for exact <= loose to hold.
BottleneckBound bottleneck_bound(const Graph& g, const Partition& p, const DegreeBounds& bounds);

}  // namespace cscale
