#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "cscale/graph.hpp"
#include "cscale/laplacian.hpp"

namespace cscale {

// Gains a_0..a_{n-1} of the nth-order protocol
//   x_i^(n) = -sum_k a_k sum_j w_ij (x_i^(k) - x_j^(k)).
class ConsensusGains {
public:
    // Throws ValidationError unless every a_k is in [0, a_max] and a_{n-1} > 0.
    explicit ConsensusGains(std::vector<double> a, double a_max = 1e6);

    int order() const { return static_cast<int>(a_.size()); }
    double operator[](int k) const { return a_[static_cast<std::size_t>(k)]; }
    const std::vector<double>& coefficients() const { return a_; }
    double a_max() const { return a_max_; }

private:
    std::vector<double> a_;
    double a_max_;
};

// Leaderless when `leader` is empty, otherwise the leader is grounded and the
// state holds only the followers.
class ConsensusSystem {
public:
    ConsensusSystem(Graph graph, ConsensusGains gains, std::optional<int> leader = std::nullopt);

    const Graph& graph() const { return graph_; }
    const ConsensusGains& gains() const { return gains_; }
    const std::optional<int>& leader() const { return leader_; }
    int order() const { return gains_.order(); }
    bool grounded() const { return leader_.has_value(); }

    // Agents carried in the state: N, or N - 1 when grounded.
    int agents() const { return graph_.node_count() - (leader_ ? 1 : 0); }
    int state_dim() const { return order() * agents(); }

    // L, or the grounded Laplacian when a leader is set.
    const SymmetricMatrix<double>& coupling() const { return coupling_; }

    // Node id carried at state position `slot` of a derivative block.
    int node_at(int slot) const;
    // Slot of `node` in a derivative block; throws if it is the leader.
    int slot_of(int node) const;

    ConsensusSystem grounded_at(int leader) const;
    ConsensusSystem with_gains(ConsensusGains gains) const;

private:
    Graph graph_;
    ConsensusGains gains_;
    std::optional<int> leader_;
    SymmetricMatrix<double> coupling_;
};

// Block companion matrix: identity blocks on the superdiagonal, bottom block
// row -a_k K with K the coupling matrix.
template <typename Scalar = double>
DenseMatrix<Scalar> closed_loop(const ConsensusSystem& sys) {
    const Eigen::Index m = sys.agents();
    const int n = sys.order();
    DenseMatrix<Scalar> A = DenseMatrix<Scalar>::Zero(n * m, n * m);
    for (int k = 0; k + 1 < n; ++k) {
        A.block(k * m, (k + 1) * m, m, m).setIdentity();
    }
    const DenseMatrix<Scalar> K = sys.coupling().template cast<Scalar>();
    for (int k = 0; k < n; ++k) {
        A.block((n - 1) * m, k * m, m, m) = -static_cast<Scalar>(sys.gains()[k]) * K;
    }
    return A;
}

inline Eigen::MatrixXd build_closed_loop(const ConsensusSystem& sys) { return closed_loop<double>(sys); }

struct StabilityReport {
    bool is_stable;
    // Largest real part outside the consensus modes (all modes when grounded).
    double max_real_part;
    // Eigenvalues of modulus below the zero tolerance.
    int n_zero_modes;
    Eigen::VectorXcd eigenvalues;
};

// Leaderless: the n eigenvalues nearest the origin are the consensus modes and
// the rest must lie in the open left half plane. Grounded: all of them must.
StabilityReport stability_report(const ConsensusSystem& sys);

// lam > a_{n-3} / (a_{n-1} a_{n-2}), strict. Necessary for stability when
// n >= 3, never sufficient. Throws ValidationError for n < 3.
bool necessary_condition_high_order(const ConsensusGains& gains, double lam);
double high_order_threshold(const ConsensusGains& gains);

// 1 / (a0 * lambda_2), or 1 / (a0 * grounded eigenvalue) when a leader is given.
double hinf_first_order(const Graph& g, double a0, std::optional<int> leader = std::nullopt);

struct HinfOptions {
    int grid_points = 400;
    double decades = 6.0;
    int refine_iterations = 80;
};

struct HinfResult {
    double norm;
    double peak_frequency;  // rad/s
};

// Peak over frequency of the largest singular value of the map from a
// disturbance on the last derivative block to the position deviation from
// consensus (or from the leader when grounded). Throws UnstableSystem.
HinfResult hinf_numeric(const ConsensusSystem& sys, const HinfOptions& options = {});

}  // namespace cscale
