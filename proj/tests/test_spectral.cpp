#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cscale/errors.hpp"
#include "cscale/generators.hpp"
#include "cscale/laplacian.hpp"
#include "cscale/spectral.hpp"
#include "oracles.hpp"

using namespace cscale;

namespace {

void check_spectrum(const Graph& g, const std::vector<double>& want, double tol = 1e-9) {
    auto eig = eig_symmetric(laplacian(g));
    REQUIRE(eig.values.size() == static_cast<Eigen::Index>(want.size()));
    for (std::size_t i = 0; i < want.size(); ++i)
        CHECK(std::abs(eig.values(static_cast<Eigen::Index>(i)) - want[i]) <= tol * std::max(1.0, want.back()));
}

}  // namespace

TEST_CASE("small spectra") {
    check_spectrum(generate_path(3), {0, 1, 3});
    check_spectrum(generate_complete(4), {0, 4, 4, 4});
    check_spectrum(generate_ring(6), {0, 1, 1, 3, 3, 4});
}

TEST_CASE("closed-form spectra") {
    for (int n = 2; n <= 30; ++n) {
        check_spectrum(generate_path(n), oracle::path_spectrum(n));
        check_spectrum(generate_complete(n), oracle::complete_spectrum(n));
        if (n >= 3) {
            check_spectrum(generate_ring(n), oracle::ring_spectrum(n));
            check_spectrum(generate_star(n), oracle::star_spectrum(n));
        }
    }
}

TEST_CASE("eigensolver agrees with Jacobi rotations") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Graph g = oracle::random_connected_graph(15, 0.2, seed, 0.1, 5.0);
        auto eig = eig_symmetric(laplacian(g));
        auto ref = oracle::jacobi_eigenvalues(oracle::laplacian_by_definition(g));
        for (int i = 0; i < 15; ++i) CHECK(eig.values(i) == doctest::Approx(ref[i]).epsilon(1e-9).scale(1.0));
        CHECK(eig.residual < 1e-10);
        CHECK(grounded_eigenvalue(g, 3) == doctest::Approx(oracle::grounded_lambda1(g, 3)).epsilon(1e-9));
        CHECK(normalized_algebraic_connectivity(g) == doctest::Approx(oracle::normalized_lambda2(g)).epsilon(1e-9));
    }
}

TEST_CASE("algebraic connectivity") {
    CHECK(algebraic_connectivity(generate_ring(4)) == doctest::Approx(2.0));
    CHECK(algebraic_connectivity(generate_complete(4)) == doctest::Approx(4.0));
    CHECK(algebraic_connectivity(generate_torus(10, 10)) > algebraic_connectivity(generate_torus(31, 31)));
    CHECK_THROWS_AS(algebraic_connectivity(Graph(4, {{0, 1, 1.0}, {2, 3, 1.0}})), DisconnectedGraph);
    CHECK_THROWS_AS(grounded_eigenvalue(Graph(4, {{0, 1, 1.0}, {2, 3, 1.0}}), 0), DisconnectedGraph);
}

TEST_CASE("grounded eigenvalue examples") {
    CHECK(grounded_eigenvalue(generate_star(6), 0) == doctest::Approx(1.0));
    CHECK(grounded_eigenvalue(generate_path(2), 0) == doctest::Approx(1.0));
    // path leader at an end: smallest eigenvalue of the Dirichlet-Neumann path
    const int n = 8;
    const double want = 4.0 * std::pow(std::sin(std::numbers::pi / (2.0 * (2 * n - 1))), 2);
    CHECK(grounded_eigenvalue(generate_path(n), 0) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("grounded degree bound") {
    Graph g = generate_random_regular(60, 4, 3);
    auto b = lemma2_bound(g, DegreeBounds(4, 1.0, 1.0), 0);
    CHECK(b.loose == doctest::Approx(4.0 / 59.0));
    REQUIRE(b.tight.has_value());
    CHECK(*b.tight == doctest::Approx(4.0 / 59.0));
    CHECK(grounded_eigenvalue(g, 0) <= b.loose);

    // equality on a single edge
    Graph p2 = generate_path(2);
    CHECK(grounded_eigenvalue(p2, 0) == doctest::Approx(lemma2_bound(p2, DegreeBounds::of(p2)).loose));

    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Graph h = oracle::random_connected_graph(4 + static_cast<int>(seed % 20), 0.15, seed, 0.1, 3.0);
        const DegreeBounds bounds = DegreeBounds::of(h);
        for (int leader = 0; leader < h.node_count(); ++leader) {
            auto lb = lemma2_bound(h, bounds, leader);
            const double lam = oracle::grounded_lambda1(h, leader);
            CHECK(lam <= *lb.tight + 1e-12);
            CHECK(*lb.tight <= lb.loose + 1e-12);
        }
    }
}

TEST_CASE("grounded eigenvalue interlaces the laplacian") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Graph g = oracle::random_connected_graph(10, 0.3, seed, 0.5, 2.0);
        auto full = eig_symmetric(laplacian(g)).values;
        for (int leader = 0; leader < 10; ++leader) {
            auto sub = eig_symmetric(grounded_laplacian(g, leader)).values;
            for (int i = 0; i < 9; ++i) {
                CHECK(full(i) <= sub(i) + 1e-9);
                CHECK(sub(i) <= full(i + 1) + 1e-9);
            }
        }
    }
}

TEST_CASE("cheeger constant examples") {
    auto k2 = cheeger_exact(generate_path(2));
    CHECK(k2.value == doctest::Approx(1.0));

    Graph c4 = generate_ring(4);
    auto c = cheeger_exact(c4);
    CHECK(c.value == doctest::Approx(1.0));
    CHECK(cheeger_ratio(c4, {0, 2}) == doctest::Approx(c.value));

    Graph bb = generate_barbell(4, 1);
    auto b = cheeger_exact(bb);
    CHECK(b.value == doctest::Approx(2.0 / 13.0));
    const bool first = b.witness == std::vector<int>{0, 1, 2, 3};
    const bool second = b.witness == std::vector<int>{4, 5, 6, 7};
    CHECK((first || second));

    CHECK(cheeger_exact(generate_complete(4)).value > 0.0);
    CHECK_THROWS_AS(cheeger_exact(generate_ring(21)), ValidationError);
    CHECK_THROWS_AS(cheeger_ratio(c4, {}), ValidationError);
    CHECK_THROWS_AS(cheeger_ratio(c4, {0, 1, 2, 3}), ValidationError);
}

TEST_CASE("cheeger exhaustive search matches an independent enumeration") {
    std::vector<Graph> graphs = {generate_path(7), generate_ring(9), generate_star(6), generate_barbell(4, 2),
                                 generate_binary_tree(10), generate_torus(3, 4)};
    for (std::uint64_t seed = 1; seed <= 15; ++seed)
        graphs.push_back(oracle::random_connected_graph(5 + static_cast<int>(seed % 8), 0.3, seed, 0.2, 4.0));
    for (const Graph& g : graphs) {
        auto exact = cheeger_exact(g);
        CHECK(exact.value == doctest::Approx(oracle::cheeger_brute_force(g)).epsilon(1e-12));
        CHECK(cheeger_ratio(g, exact.witness) == doctest::Approx(exact.value));
        auto sweep = cheeger_sweep(g);
        CHECK(sweep.value >= exact.value - 1e-12);
        CHECK(cheeger_ratio(g, sweep.witness) == doctest::Approx(sweep.value));
    }
}

TEST_CASE("sweep separates the two cliques of a barbell") {
    Graph g = generate_barbell(20, 1);
    auto s = cheeger_sweep(g);
    std::vector<int> w = s.witness;
    const auto in_first = std::count_if(w.begin(), w.end(), [](int v) { return v < 20; });
    const auto in_second = std::count_if(w.begin(), w.end(), [](int v) { return v >= 20 && v < 40; });
    CHECK(((in_first == 20 && in_second == 0) || (in_first == 0 && in_second == 20)));
}

TEST_CASE("cheeger lower corridor holds for the boundary-degree constant") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        Graph g = oracle::random_connected_graph(5 + static_cast<int>(seed % 8), 0.25, seed, 0.2, 3.0);
        CHECK(normalized_algebraic_connectivity(g) / 2.0 <= cheeger_exact(g).value + 1e-12);
        // the edge-cut constant sits below it and inside the full corridor
        const double he = oracle::cheeger_edge_cut(g);
        CHECK(he <= cheeger_exact(g).value + 1e-12);
        CHECK(he <= std::sqrt(2.0 * normalized_algebraic_connectivity(g)) + 1e-12);
    }
}

TEST_CASE("boundary-degree cheeger constant can exceed sqrt(2 mu)") {
    // weighted counterexample to the upper corridor
    Graph g = oracle::random_connected_graph(8, 0.25, 2, 0.2, 3.0);
    const double h = cheeger_exact(g).value;
    const double mu = normalized_algebraic_connectivity(g);
    CHECK(h == doctest::Approx(oracle::cheeger_brute_force(g)));
    CHECK(h > std::sqrt(2.0 * mu));
    CHECK(cheeger_ratio(g, {1, 2, 6, 7}) == doctest::Approx(h));
}

TEST_CASE("cheeger corridor on small unit-weight graphs") {
    std::vector<Graph> graphs = {generate_path(8), generate_ring(10), generate_barbell(5, 1), generate_torus(3, 3),
                                 generate_random_regular(12, 3, 5)};
    for (const Graph& g : graphs) {
        const double h = cheeger_exact(g).value;
        const double mu = normalized_algebraic_connectivity(g);
        CHECK(h * h / 2.0 <= mu + 1e-9);
        CHECK(mu <= 2.0 * h + 1e-9);
    }
}

TEST_CASE("expander trend labels") {
    FamilySpec lattice;
    lattice.kind = FamilyKind::lattice2d_torus;
    auto lt = classify_expander_trend(lattice, {25, 100, 400, 900});
    CHECK(lt.label == "decaying-toward-zero");
    CHECK(lt.loglog_slope == doctest::Approx(-1.0).epsilon(0.2));
    CHECK_FALSE(lt.caveat.empty());

    FamilySpec rr;
    rr.kind = FamilyKind::random_regular;
    rr.seed = 11;
    auto rt = classify_expander_trend(rr, {60, 200, 500, 1000});
    CHECK(rt.label == "bounded-away");
    CHECK(rt.min_lambda2 > 0.2);

    FamilySpec bb;
    bb.kind = FamilyKind::barbell;
    CHECK(classify_expander_trend(bb, {11, 21, 41, 81}).label == "decaying-toward-zero");

    CHECK_THROWS_AS(classify_expander_trend(rr, {60, 200}), ValidationError);
    CHECK_THROWS_AS(classify_expander_trend(rr, {200, 60, 500}), ValidationError);
}

TEST_CASE("loglog slope of a power law") {
    CHECK(loglog_slope({1, 10, 100}, {5, 0.5, 0.05}) == doctest::Approx(-1.0));
    CHECK(loglog_slope({2, 4, 8}, {3, 12, 48}) == doctest::Approx(2.0));
}

TEST_CASE("spectral report and csv row") {
    SpectralOptions opts;
    opts.leader = 0;
    opts.family = "path";
    auto r = spectral_report(generate_path(3), opts);
    CHECK(r.n == 3);
    CHECK(r.lambda2 == doctest::Approx(1.0));
    REQUIRE(r.grounded_lambda1.has_value());
    REQUIRE(r.cheeger.has_value());
    CHECK(r.normalized_lambda2 == doctest::Approx(oracle::normalized_lambda2(generate_path(3))));
    CHECK(spectral_csv_header() == "N,family,seed,lambda2,grounded_lambda1,lemma2_bound,normalized_lambda2,cheeger,residual");
    const std::string row = to_csv_row(r);
    CHECK(row.rfind("3,path,,", 0) == 0);
    CHECK(std::count(row.begin(), row.end(), ',') == 8);

    SpectralOptions big;
    big.cheeger_cap = 4;
    CHECK_FALSE(spectral_report(generate_path(6), big).cheeger.has_value());
}
