#include <doctest.h>

#include <algorithm>
#include <complex>

#include <Eigen/SVD>

#include "cscale/dynamics.hpp"
#include "cscale/errors.hpp"
#include "cscale/generators.hpp"
#include "cscale/spectral.hpp"
#include "oracles.hpp"

using namespace cscale;

namespace {

// Pairs each oracle root with the nearest unused computed eigenvalue.
double max_mismatch(const Eigen::VectorXcd& got_in, const std::vector<std::complex<double>>& want) {
    std::vector<std::complex<double>> got(got_in.data(), got_in.data() + got_in.size());
    double worst = 0.0;
    for (auto w : want) {
        auto it = std::min_element(got.begin(), got.end(), [&](auto a, auto b) { return std::abs(a - w) < std::abs(b - w); });
        worst = std::max(worst, std::abs(*it - w));
        got.erase(it);
    }
    return worst;
}

// Smallest singular value of A - r I relative to ||A||: zero up to rounding
// when r is an eigenvalue, however badly conditioned.
double backward_error(const Eigen::MatrixXd& A, std::complex<double> r) {
    Eigen::MatrixXcd shifted = A.cast<std::complex<double>>();
    shifted.diagonal().array() -= r;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
    return svd.singularValues().minCoeff() / A.norm();
}

std::vector<double> eigenvalues(const Eigen::MatrixXd& m) {
    auto v = eig_symmetric(m).values;
    return {v.data(), v.data() + v.size()};
}

}  // namespace

TEST_CASE("gains validation") {
    CHECK_THROWS_AS(ConsensusGains({}), ValidationError);
    CHECK_THROWS_AS(ConsensusGains({1.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(ConsensusGains({-0.1, 1.0}), ValidationError);
    CHECK_THROWS_AS(ConsensusGains({1.0, 20.0}, 10.0), ValidationError);
    ConsensusGains g({0.0, 2.0});
    CHECK(g.order() == 2);
    CHECK(g[1] == 2.0);
}

TEST_CASE("closed-loop matrix examples") {
    ConsensusSystem first(generate_path(3), ConsensusGains({2.0}));
    Eigen::MatrixXd want = -2.0 * laplacian(generate_path(3));
    CHECK(build_closed_loop(first).isApprox(want));

    ConsensusSystem second(generate_path(2), ConsensusGains({1.0, 3.0}));
    Eigen::MatrixXd want2(4, 4);
    want2 << 0, 0, 1, 0,  //
        0, 0, 0, 1,       //
        -1, 1, -3, 3,     //
        1, -1, 3, -3;
    CHECK(build_closed_loop(second).isApprox(want2));

    ConsensusSystem grounded(generate_path(3), ConsensusGains({1.0}), 0);
    Eigen::MatrixXd want3(2, 2);
    want3 << -2, 1, 1, -1;
    CHECK(build_closed_loop(grounded).isApprox(want3));
    CHECK(grounded.agents() == 2);
    CHECK(grounded.node_at(0) == 1);
    CHECK(grounded.slot_of(2) == 1);
    CHECK_THROWS_AS(grounded.slot_of(0), ValidationError);

    auto ld = closed_loop<long double>(second);
    CHECK(static_cast<double>(ld(2, 2)) == -3.0);

    CHECK_THROWS_AS(ConsensusSystem(Graph(3, {{0, 1, 1.0}}), ConsensusGains({1.0})), DisconnectedGraph);
}

TEST_CASE("stability of first and second order") {
    auto r = stability_report(ConsensusSystem(generate_ring(6), ConsensusGains({1.0})));
    CHECK(r.is_stable);
    CHECK(r.n_zero_modes == 1);
    CHECK(r.max_real_part == doctest::Approx(-1.0));

    auto r2 = stability_report(ConsensusSystem(generate_ring(6), ConsensusGains({1.0, 1.0})));
    CHECK(r2.is_stable);
    CHECK(r2.n_zero_modes == 2);

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Graph g = oracle::random_connected_graph(8, 0.2, seed, 0.5, 2.0);
        CHECK(stability_report(ConsensusSystem(g, ConsensusGains({0.3, 0.7}), 0)).is_stable);
        CHECK(stability_report(ConsensusSystem(g, ConsensusGains({0.3}), 2)).is_stable);
    }
}

TEST_CASE("closed-loop eigenvalues match the per-mode polynomial roots") {
    const std::vector<std::vector<double>> gain_sets = {{1.0}, {0.5, 1.5}, {0.1, 1.0, 1.0}, {0.2, 0.9, 1.3, 0.7}};
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        Graph g = oracle::random_connected_graph(7, 0.3, seed, 0.2, 2.0);
        for (const auto& a : gain_sets) {
            for (std::optional<int> leader : {std::optional<int>{}, std::optional<int>{1}}) {
                ConsensusSystem sys(g, ConsensusGains(a), leader);
                auto report = stability_report(sys);
                auto roots = oracle::modal_eigenvalues(eigenvalues(sys.coupling()), a);
                // clustered roots only resolve to about eps^(1/n)
                CHECK(max_mismatch(report.eigenvalues, roots) < 1e-3);
                const Eigen::MatrixXd A = build_closed_loop(sys);
                double worst_backward = 0.0;
                for (auto r : roots) worst_backward = std::max(worst_backward, backward_error(A, r));
                CHECK(worst_backward < 1e-12);
                // stable iff every nonconsensus root is in the open left half plane
                std::sort(roots.begin(), roots.end(), [](auto x, auto y) { return std::abs(x) < std::abs(y); });
                double worst = -INFINITY;
                const std::size_t skip = leader ? 0 : a.size();
                for (std::size_t i = skip; i < roots.size(); ++i) worst = std::max(worst, roots[i].real());
                CHECK(report.is_stable == (worst < 0.0));
            }
        }
    }
}

TEST_CASE("high-order necessary condition") {
    ConsensusGains a({0.1, 1.0, 1.0});
    CHECK(high_order_threshold(a) == doctest::Approx(0.1));
    CHECK(necessary_condition_high_order(a, 0.64));
    CHECK_FALSE(necessary_condition_high_order(a, 0.05));
    CHECK_FALSE(necessary_condition_high_order(a, 0.1));
    CHECK_THROWS_AS(necessary_condition_high_order(ConsensusGains({1.0, 1.0}), 0.5), ValidationError);
}

TEST_CASE("violating the necessary condition implies instability") {
    cscale::Rng rng(99);
    int checked = 0;
    for (int trial = 0; trial < 400 && checked < 50; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(2));
        std::vector<double> a(static_cast<std::size_t>(n));
        for (double& x : a) x = 0.05 + 1.5 * rng.uniform();
        Graph g = oracle::random_connected_graph(6 + static_cast<int>(rng.below(10)), 0.1, rng.next(), 0.2, 1.5);
        ConsensusGains gains(a);
        ConsensusSystem sys(g, gains, 0);
        const double lam = oracle::grounded_lambda1(g, 0);
        if (necessary_condition_high_order(gains, lam)) continue;
        ++checked;
        CHECK_FALSE(stability_report(sys).is_stable);
    }
    CHECK(checked == 50);
}

TEST_CASE("third-order example: leaderless stable, grounded unstable") {
    ConsensusGains a({0.1, 1.0, 1.0});
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        Graph g = generate_random_regular(60, 4, seed);
        if (grounded_eigenvalue(g, 0) >= 0.1) continue;
        CHECK(stability_report(ConsensusSystem(g, a)).is_stable);
        CHECK_FALSE(stability_report(ConsensusSystem(g, a, 0)).is_stable);
        CHECK(stability_report(ConsensusSystem(g, ConsensusGains({0.01, 1.0, 1.0}), 0)).is_stable);
        return;
    }
    FAIL("no seed with a small grounded eigenvalue");
}

TEST_CASE("first-order H-infinity norm") {
    CHECK(hinf_first_order(generate_complete(4), 1.0) == doctest::Approx(0.25));
    CHECK(hinf_first_order(generate_ring(4), 0.5) == doctest::Approx(1.0));
    CHECK(hinf_first_order(generate_star(5), 1.0, 0) == doctest::Approx(1.0));
}

TEST_CASE("numeric H-infinity norm agrees with the first-order formula") {
    std::vector<Graph> graphs = {generate_ring(8), generate_path(6), generate_complete(5), generate_torus(4, 4)};
    for (std::uint64_t seed = 1; seed <= 4; ++seed) graphs.push_back(oracle::random_connected_graph(10, 0.2, seed, 0.3, 2.0));
    for (const Graph& g : graphs) {
        for (double a0 : {0.5, 2.0}) {
            auto h = hinf_numeric(ConsensusSystem(g, ConsensusGains({a0})));
            CHECK(h.norm == doctest::Approx(hinf_first_order(g, a0)).epsilon(1e-6));
            auto hg = hinf_numeric(ConsensusSystem(g, ConsensusGains({a0}), 1));
            CHECK(hg.norm == doctest::Approx(hinf_first_order(g, a0, 1)).epsilon(1e-6));
        }
    }
}

TEST_CASE("second-order H-infinity norm is at least the static gain") {
    Graph g = generate_ring(6);
    auto h = hinf_numeric(ConsensusSystem(g, ConsensusGains({1.0, 1.0})));
    CHECK(h.norm >= 1.0 / algebraic_connectivity(g) - 1e-9);
    CHECK(std::isfinite(h.norm));

    ConsensusSystem unstable(generate_random_regular(60, 4, 1), ConsensusGains({0.1, 1.0, 1.0}), 0);
    if (!stability_report(unstable).is_stable) CHECK_THROWS_AS(hinf_numeric(unstable), UnstableSystem);
}
