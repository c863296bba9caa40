#include "cscale/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>

#include "cscale/errors.hpp"
#include "cscale/laplacian.hpp"

namespace cscale {

SymmetricEigen eig_symmetric(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw ValidationError("eig_symmetric needs a square matrix");
    if (m.rows() == 0) return {Eigen::VectorXd(), Eigen::MatrixXd(), 0.0};

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");

    SymmetricEigen out{solver.eigenvalues(), solver.eigenvectors(), 0.0};
    const Eigen::MatrixXd r = m * out.vectors - out.vectors * out.values.asDiagonal();
    for (Eigen::Index i = 0; i < r.cols(); ++i) {
        out.residual = std::max(out.residual, r.col(i).norm() / out.vectors.col(i).norm());
    }
    const double scale = out.values.cwiseAbs().maxCoeff();
    if (out.residual > 1e-9 * std::max(scale, 1e-300)) {
        throw NumericalError("eigenpair residual " + std::to_string(out.residual) + " above tolerance");
    }
    return out;
}

namespace {

double second_smallest(const Eigen::VectorXd& values, const Graph& g) {
    if (g.node_count() < 2) throw ValidationError("algebraic connectivity needs N >= 2");
    const double l2 = values(1);
    if (l2 < kDisconnectedThreshold && !g.is_connected()) {
        throw DisconnectedGraph("graph is disconnected (lambda_2 = " + std::to_string(l2) + ")");
    }
    return l2;
}

}  // namespace

double algebraic_connectivity(const Graph& g) {
    return second_smallest(eig_symmetric(laplacian(g)).values, g);
}

double grounded_eigenvalue(const Graph& g, int leader) {
    if (g.node_count() < 2) throw ValidationError("grounded eigenvalue needs N >= 2");
    require_connected(g);
    return eig_symmetric(grounded_laplacian(g, leader)).values(0);
}

double normalized_algebraic_connectivity(const Graph& g) {
    return second_smallest(eig_symmetric(normalized_laplacian(g)).values, g);
}

GroundedBound lemma2_bound(const Graph& g, const DegreeBounds& bounds, std::optional<int> leader) {
    const int n = g.node_count();
    if (n < 2) throw ValidationError("grounded bound needs N >= 2");
    GroundedBound b{bounds.q * bounds.w_max / (n - 1), std::nullopt};
    if (leader) b.tight = g.weighted_degree(*leader) / (n - 1);
    return b;
}

SpectralReport spectral_report(const Graph& g, const SpectralOptions& options) {
    if (g.node_count() < 2) throw ValidationError("spectral report needs N >= 2");
    require_connected(g);
    const DegreeBounds bounds = options.bounds.value_or(DegreeBounds::of(g));

    SpectralReport r;
    r.n = g.node_count();
    r.family = options.family;
    r.seed = options.seed;

    const auto full = eig_symmetric(laplacian(g));
    r.lambda_all = full.values;
    r.lambda2 = second_smallest(full.values, g);
    r.residual = full.residual;

    const auto normalized = eig_symmetric(normalized_laplacian(g));
    r.normalized_lambda2 = normalized.values(1);
    r.residual = std::max(r.residual, normalized.residual);

    if (options.leader) {
        const auto grounded = eig_symmetric(grounded_laplacian(g, *options.leader));
        r.grounded_lambda1 = grounded.values(0);
        r.residual = std::max(r.residual, grounded.residual);
    }
    r.lemma2_bound = lemma2_bound(g, bounds).loose;
    if (g.node_count() <= options.cheeger_cap) r.cheeger = cheeger_exact(g, options.cheeger_cap).value;
    return r;
}

std::string spectral_csv_header() {
    return "N,family,seed,lambda2,grounded_lambda1,lemma2_bound,normalized_lambda2,cheeger,residual";
}

std::string to_csv_row(const SpectralReport& r) {
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::string row = std::to_string(r.n) + "," + r.family + ",";
    if (r.seed) row += std::to_string(*r.seed);
    row += "," + num(r.lambda2) + ",";
    if (r.grounded_lambda1) row += num(*r.grounded_lambda1);
    row += "," + num(r.lemma2_bound) + "," + num(r.normalized_lambda2) + ",";
    if (r.cheeger) row += num(*r.cheeger);
    row += "," + num(r.residual);
    return row;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("slope fit needs two or more points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0)) throw ValidationError("log-log fit needs positive data");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= x.size();
    my /= y.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) throw ValidationError("slope fit needs distinct sizes");
    return sxy / sxx;
}

ExpanderTrend classify_expander_trend(const FamilySpec& family, const std::vector<int>& sizes) {
    if (sizes.size() < 3) throw ValidationError("trend classification needs at least 3 sizes");
    if (!std::is_sorted(sizes.begin(), sizes.end()) ||
        std::adjacent_find(sizes.begin(), sizes.end()) != sizes.end()) {
        throw ValidationError("sizes must be strictly ascending");
    }
    ExpanderTrend t;
    t.sizes = sizes;
    std::vector<double> xs;
    for (int n : sizes) {
        t.lambda2.push_back(algebraic_connectivity(generate(family, n)));
        xs.push_back(n);
    }
    t.min_lambda2 = *std::min_element(t.lambda2.begin(), t.lambda2.end());
    t.loglog_slope = loglog_slope(xs, t.lambda2);
    t.label = t.loglog_slope <= kDecayingSlope ? "decaying-toward-zero" : "bounded-away";
    t.caveat = "heuristic: a finite sample of sizes cannot establish the limit of lambda_2";
    return t;
}

}  // namespace cscale
