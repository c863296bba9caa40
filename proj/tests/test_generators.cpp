#include <doctest.h>

#include <set>

#include "cscale/errors.hpp"
#include "cscale/generators.hpp"
#include "cscale/spectral.hpp"
#include "oracles.hpp"

using namespace cscale;

TEST_CASE("deterministic families have the expected shape") {
    Graph ring = generate_ring(4);
    CHECK(ring.edge_count() == 4);
    CHECK(format_edge_list(ring) == "0 1 1\n0 3 1\n1 2 1\n2 3 1\n");

    Graph torus = generate_torus(5, 5);
    CHECK(torus.node_count() == 25);
    CHECK(torus.edge_count() == 50);
    for (int i = 0; i < 25; ++i) CHECK(torus.degree(i) == 4);

    Graph path = generate_path(6);
    CHECK(path.edge_count() == 5);
    CHECK(path.degree(0) == 1);

    Graph star = generate_star(7);
    CHECK(star.degree(0) == 6);

    Graph tree = generate_binary_tree(7);
    CHECK(tree.edge_count() == 6);
    CHECK(tree.has_edge(2, 6));

    CHECK(generate_complete(6).edge_count() == 15);

    CHECK_THROWS_AS(generate_torus(2, 5), ValidationError);
    CHECK_THROWS_AS(generate_ring(2), ValidationError);
    CHECK_THROWS_AS(generate_path(0), ValidationError);
}

TEST_CASE("generate dispatches on the family kind") {
    FamilySpec spec;
    spec.kind = FamilyKind::lattice2d_torus;
    CHECK(generate(spec, 36).edge_count() == 72);
    CHECK_THROWS_AS(generate(spec, 35), ValidationError);
    spec.kind = FamilyKind::barbell;
    Graph bb = generate(spec, 11);
    CHECK(bb.node_count() == 11);
    CHECK(bb.edge_count() == 2 * 10 + 2);
    spec.weight = 0.5;
    spec.kind = FamilyKind::ring;
    CHECK(generate(spec, 5).max_weight() == 0.5);

    for (auto kind : {FamilyKind::path, FamilyKind::ring, FamilyKind::star, FamilyKind::complete,
                      FamilyKind::lattice2d_torus, FamilyKind::binary_tree, FamilyKind::barbell,
                      FamilyKind::random_regular})
        CHECK(parse_family_kind(to_string(kind)) == kind);
    CHECK_THROWS_AS(parse_family_kind("hypercube"), ValidationError);
}

TEST_CASE("barbell layout") {
    Graph g = generate_barbell(5, 1);
    CHECK(g.node_count() == 11);
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) {
            CHECK(g.has_edge(i, j));
            CHECK(g.has_edge(i + 5, j + 5));
        }
    CHECK(g.degree(10) == 2);
    CHECK(g.has_edge(10, 0));
    CHECK(g.has_edge(10, 5));
    CHECK(g.is_connected());
}

TEST_CASE("barbell lambda2 decreases with clique size") {
    double previous = INFINITY;
    for (int m : {5, 10, 20, 40}) {
        const double lam = algebraic_connectivity(generate_barbell(m, 1));
        CHECK(lam < previous);
        previous = lam;
    }
}

TEST_CASE("random regular graphs") {
    Graph g = generate_random_regular(60, 4, 7);
    CHECK(g.edge_count() == 120);
    CHECK(g.is_connected());
    for (int i = 0; i < 60; ++i) CHECK(g.degree(i) == 4);
    std::set<std::pair<int, int>> seen;
    for (const auto& e : g.edges()) {
        CHECK(e.u != e.v);
        CHECK(seen.insert({e.u, e.v}).second);
    }

    CHECK(format_edge_list(generate_random_regular(60, 4, 7)) == format_edge_list(g));
    CHECK(format_edge_list(generate_random_regular(60, 4, 8)) != format_edge_list(g));

    CHECK(generate_random_regular(4, 3, 1).is_complete());

    CHECK_THROWS_AS(generate_random_regular(5, 3, 1), ValidationError);
    CHECK_THROWS_AS(generate_random_regular(4, 4, 1), ValidationError);
    // a perfect matching on 4 nodes is never connected
    CHECK_THROWS_AS(generate_random_regular(4, 1, 1, 1.0, 50), RetryExhausted);
}

TEST_CASE("random regular lambda2 stays away from zero") {
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) sum += algebraic_connectivity(generate_random_regular(200, 4, seed));
    CHECK(sum / 100.0 > 0.2);
}

TEST_CASE("random regular grounded eigenvalue respects the degree bound") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Graph g = generate_random_regular(60, 4, seed);
        CHECK(oracle::grounded_lambda1(g, 0) <= 4.0 / 59.0 + 1e-12);
    }
}
