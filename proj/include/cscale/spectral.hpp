#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cscale/generators.hpp"
#include "cscale/graph.hpp"

namespace cscale {

struct SymmetricEigen {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // column i pairs with values(i)
    double residual;          // max_i ||M v_i - lambda_i v_i|| / ||v_i||
};

// Full dense spectrum of a symmetric matrix. Throws NumericalError if the
// solver does not converge or the residual exceeds 1e-9 * ||M||.
SymmetricEigen eig_symmetric(const Eigen::MatrixXd& m);

// Below this lambda_2 the graph is re-checked by traversal.
inline constexpr double kDisconnectedThreshold = 1e-8;

// lambda_2 of L. Throws DisconnectedGraph.
double algebraic_connectivity(const Graph& g);

// Smallest eigenvalue of the grounded Laplacian. Throws DisconnectedGraph.
double grounded_eigenvalue(const Graph& g, int leader);

// lambda_2 of the degree-normalized Laplacian D^{-1/2} L D^{-1/2}.
double normalized_algebraic_connectivity(const Graph& g);

struct GroundedBound {
    double loose;                 // q * w_max / (N - 1)
    std::optional<double> tight;  // leader's incident weight / (N - 1)
};

GroundedBound lemma2_bound(const Graph& g, const DegreeBounds& bounds, std::optional<int> leader = std::nullopt);

struct CheegerResult {
    double value;
    std::vector<int> witness;  // a minimizing (exact) or achieving (sweep) set
};

inline constexpr int kCheegerBruteForceCap = 20;

// Ratio |dX|_d / min(|X|_d, |X^c|_d) for one proper nonempty subset, where
// dX is the vertex boundary and |W|_d sums weighted degrees over W.
double cheeger_ratio(const Graph& g, const std::vector<int>& set);

// Exact h(G) over all nonempty proper subsets. Refuses N above `cap`.
CheegerResult cheeger_exact(const Graph& g, int cap = kCheegerBruteForceCap);

// Upper bound on h(G): best prefix set of the normalized-Laplacian Fiedler
// vector ordering.
CheegerResult cheeger_sweep(const Graph& g);

struct SpectralReport {
    int n = 0;
    std::string family;
    std::optional<unsigned long long> seed;
    Eigen::VectorXd lambda_all;
    double lambda2 = 0.0;
    std::optional<double> grounded_lambda1;
    double normalized_lambda2 = 0.0;
    std::optional<double> cheeger;
    double lemma2_bound = 0.0;
    double residual = 0.0;
};

struct SpectralOptions {
    std::optional<int> leader;
    std::optional<DegreeBounds> bounds;  // defaults to DegreeBounds::of(g)
    int cheeger_cap = kCheegerBruteForceCap;
    std::string family = "custom";
    std::optional<unsigned long long> seed;
};

SpectralReport spectral_report(const Graph& g, const SpectralOptions& options = {});

// Flat CSV row; empty fields for absent optionals.
std::string spectral_csv_header();
std::string to_csv_row(const SpectralReport& r);

struct ExpanderTrend {
    std::vector<int> sizes;
    std::vector<double> lambda2;
    double min_lambda2 = 0.0;
    double loglog_slope = 0.0;
    std::string label;   // "decaying-toward-zero" or "bounded-away"
    std::string caveat;
};

// Heuristic: slope of log lambda_2 against log N at or below this value is
// labelled decaying.
inline constexpr double kDecayingSlope = -0.5;

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

ExpanderTrend classify_expander_trend(const FamilySpec& family, const std::vector<int>& sizes);

}  // namespace cscale
