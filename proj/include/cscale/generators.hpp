#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "cscale/graph.hpp"

namespace cscale {

enum class FamilyKind { path, ring, star, complete, lattice2d_torus, binary_tree, barbell, random_regular };

std::string_view to_string(FamilyKind kind);
// Throws ValidationError on unknown names.
FamilyKind parse_family_kind(std::string_view name);

struct FamilySpec {
    FamilyKind kind = FamilyKind::ring;
    int k = 4;              // random_regular degree
    int rows = 0;           // lattice2d_torus; 0 means sqrt(N)
    int cols = 0;
    int clique_size = 0;    // barbell; 0 means (N - bridge_nodes) / 2
    int bridge_nodes = 1;   // barbell
    std::uint64_t seed = 0; // random kinds
    double weight = 1.0;    // applied to every edge
    int max_attempts = 10000;  // random_regular rejection cap
};

// Deterministic for a fixed (spec, N). Every returned graph is connected.
Graph generate(const FamilySpec& spec, int n);

Graph generate_path(int n, double weight = 1.0);
Graph generate_ring(int n, double weight = 1.0);
Graph generate_star(int n, double weight = 1.0);
Graph generate_complete(int n, double weight = 1.0);
Graph generate_torus(int rows, int cols, double weight = 1.0);
// Heap-ordered: node i has children 2i+1 and 2i+2.
Graph generate_binary_tree(int n, double weight = 1.0);
// Two K_m cliques (nodes 0..m-1 and m..2m-1) and bridge nodes 2m..2m+b-1.
// Bridge j is adjacent to node j mod m of each clique.
Graph generate_barbell(int clique_size, int bridge_nodes, double weight = 1.0);

// Configuration model: k stubs per node, a seeded uniform perfect matching of
// the stubs, rejected and redrawn on self-loops, multi-edges or
// disconnection. Throws RetryExhausted after `max_attempts` draws.
Graph generate_random_regular(int n, int k, std::uint64_t seed, double weight = 1.0, int max_attempts = 10000);

}  // namespace cscale
