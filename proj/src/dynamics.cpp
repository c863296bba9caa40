#include "cscale/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "cscale/errors.hpp"
#include "cscale/spectral.hpp"

namespace cscale {

ConsensusGains::ConsensusGains(std::vector<double> a, double a_max) : a_(std::move(a)), a_max_(a_max) {
    if (a_.empty()) throw ValidationError("consensus order must be at least 1");
    if (!(a_max_ > 0.0) || !std::isfinite(a_max_)) throw ValidationError("a_max must be positive and finite");
    for (std::size_t k = 0; k < a_.size(); ++k) {
        if (!(a_[k] >= 0.0) || a_[k] > a_max_) {
            throw ValidationError("gain a_" + std::to_string(k) + " outside [0, a_max]");
        }
    }
    if (!(a_.back() > 0.0)) throw ValidationError("highest-order gain must be positive");
}

ConsensusSystem::ConsensusSystem(Graph graph, ConsensusGains gains, std::optional<int> leader)
    : graph_(std::move(graph)), gains_(std::move(gains)), leader_(leader), coupling_() {
    require_connected(graph_);
    if (leader_) {
        if (graph_.node_count() < 2) throw ValidationError("grounding needs N >= 2");
        coupling_ = grounded_laplacian(graph_, *leader_);
    } else {
        coupling_ = laplacian(graph_);
    }
}

int ConsensusSystem::node_at(int slot) const {
    if (slot < 0 || slot >= agents()) throw ValidationError("state slot out of range");
    return (leader_ && slot >= *leader_) ? slot + 1 : slot;
}

int ConsensusSystem::slot_of(int node) const {
    require_node(graph_, node);
    if (leader_) {
        if (node == *leader_) throw ValidationError("node " + std::to_string(node) + " is the grounded leader");
        return node > *leader_ ? node - 1 : node;
    }
    return node;
}

ConsensusSystem ConsensusSystem::grounded_at(int leader) const {
    if (leader_) throw ValidationError("system is already grounded");
    return ConsensusSystem(graph_, gains_, leader);
}

ConsensusSystem ConsensusSystem::with_gains(ConsensusGains gains) const {
    return ConsensusSystem(graph_, std::move(gains), leader_);
}

StabilityReport stability_report(const ConsensusSystem& sys) {
    const Eigen::MatrixXd A = build_closed_loop(sys);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(A, false);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed on the closed loop");

    StabilityReport r{false, -std::numeric_limits<double>::infinity(), 0, solver.eigenvalues()};
    const Eigen::Index dim = r.eigenvalues.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return std::abs(r.eigenvalues(a)) < std::abs(r.eigenvalues(b)); });

    // The consensus eigenvalue is an n-fold defective zero, so rounding
    // spreads it by about (eps * ||A||)^(1/n).
    const double scale = std::max(1.0, r.eigenvalues.cwiseAbs().maxCoeff());
    const double zero_tol = 10.0 * std::pow(1e-15 * scale, 1.0 / sys.order());
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (std::abs(r.eigenvalues(i)) < zero_tol) ++r.n_zero_modes;
    }

    const std::size_t skip = sys.grounded() ? 0 : static_cast<std::size_t>(sys.order());
    for (std::size_t i = skip; i < order.size(); ++i) {
        r.max_real_part = std::max(r.max_real_part, r.eigenvalues(order[i]).real());
    }
    r.is_stable = r.max_real_part < 0.0;
    return r;
}

double high_order_threshold(const ConsensusGains& gains) {
    const int n = gains.order();
    if (n < 3) throw ValidationError("high-order stability condition needs n >= 3");
    const double denom = gains[n - 1] * gains[n - 2];
    if (denom == 0.0) return std::numeric_limits<double>::infinity();
    return gains[n - 3] / denom;
}

bool necessary_condition_high_order(const ConsensusGains& gains, double lam) {
    return lam > high_order_threshold(gains);
}

double hinf_first_order(const Graph& g, double a0, std::optional<int> leader) {
    if (!(a0 > 0.0)) throw ValidationError("a0 must be positive");
    const double lam = leader ? grounded_eigenvalue(g, *leader) : algebraic_connectivity(g);
    return 1.0 / (a0 * lam);
}

namespace {

// Coupling restricted to the subspace the output sees: the orthogonal
// complement of the all-ones vector when leaderless, all followers otherwise.
Eigen::MatrixXd observed_coupling(const ConsensusSystem& sys) {
    if (sys.grounded()) return sys.coupling();
    const Eigen::Index n = sys.agents();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd::Ones(n, 1));
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd basis = Q.rightCols(n - 1);
    Eigen::MatrixXd reduced = basis.transpose() * sys.coupling() * basis;
    return 0.5 * (reduced + reduced.transpose());
}

}  // namespace

HinfResult hinf_numeric(const ConsensusSystem& sys, const HinfOptions& options) {
    if (options.grid_points < 3 || !(options.decades > 0.0)) throw ValidationError("bad H-infinity sweep options");
    if (sys.agents() < 2 && !sys.grounded()) throw ValidationError("H-infinity norm needs N >= 2");
    const auto stability = stability_report(sys);
    if (!stability.is_stable) throw UnstableSystem("H-infinity norm undefined: closed loop is not stable");

    const Eigen::MatrixXd K = observed_coupling(sys);
    const Eigen::Index m = K.rows();
    const int n = sys.order();
    const auto& a = sys.gains();
    using cplx = std::complex<double>;

    // Largest singular value of (s^n I + sum_k a_k s^k K)^{-1} at s = j*omega.
    auto gain = [&](double omega) {
        const cplx s(0.0, omega);
        cplx poly = 0.0, power = 1.0;
        for (int k = 0; k < n; ++k) {
            poly += a[k] * power;
            power *= s;
        }
        Eigen::MatrixXcd M = poly * K.cast<cplx>();
        M.diagonal().array() += power;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
        const double smin = svd.singularValues()(m - 1);
        return smin > 0.0 ? 1.0 / smin : std::numeric_limits<double>::infinity();
    };

    const double lam_min = eig_symmetric(K).values(0);
    const double center = a[0] * lam_min > 0.0 ? a[0] * lam_min : 1.0;
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(options.grid_points) + 1);
    grid.push_back(0.0);
    for (int i = 0; i < options.grid_points; ++i) {
        const double e = -options.decades / 2 + options.decades * i / (options.grid_points - 1);
        grid.push_back(center * std::pow(10.0, e));
    }
    std::vector<double> values;
    values.reserve(grid.size());
    for (double w : grid) values.push_back(gain(w));
    const auto peak = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());

    HinfResult best{values[peak], grid[peak]};
    const double lo = grid[peak == 0 ? 0 : peak - 1];
    const double hi = grid[std::min(peak + 1, grid.size() - 1)];
    if (hi > lo) {
        // Golden-section search for the maximum on [lo, hi].
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double x0 = lo, x3 = hi;
        double x1 = x3 - inv_phi * (x3 - x0), x2 = x0 + inv_phi * (x3 - x0);
        double f1 = gain(x1), f2 = gain(x2);
        for (int it = 0; it < options.refine_iterations && x3 - x0 > 1e-14 * std::max(1.0, x3); ++it) {
            if (f1 > f2) {
                x3 = x2;
                x2 = x1;
                f2 = f1;
                x1 = x3 - inv_phi * (x3 - x0);
                f1 = gain(x1);
            } else {
                x0 = x1;
                x1 = x2;
                f1 = f2;
                x2 = x0 + inv_phi * (x3 - x0);
                f2 = gain(x2);
            }
        }
        for (auto [w, f] : {std::pair{x1, f1}, std::pair{x2, f2}}) {
            if (f > best.norm) best = {f, w};
        }
    }
    return best;
}

}  // namespace cscale
