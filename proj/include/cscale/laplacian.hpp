#pragma once

#include <cmath>

#include <Eigen/Core>

#include "cscale/errors.hpp"
#include "cscale/graph.hpp"

namespace cscale {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Dense symmetric storage. Both triangles are written from the same value so
// m(i, j) == m(j, i) holds bit-exactly.
template <typename Scalar = double>
using SymmetricMatrix = DenseMatrix<Scalar>;

// Weighted graph Laplacian: L_ii = d_i, L_ij = -w_ij.
template <typename Scalar = double>
SymmetricMatrix<Scalar> laplacian(const Graph& g) {
    const int n = g.node_count();
    SymmetricMatrix<Scalar> L = SymmetricMatrix<Scalar>::Zero(n, n);
    for (const auto& e : g.edges()) {
        const Scalar w = static_cast<Scalar>(e.weight);
        L(e.u, e.v) = -w;
        L(e.v, e.u) = -w;
        L(e.u, e.u) += w;
        L(e.v, e.v) += w;
    }
    return L;
}

// Principal submatrix of `m` with row and column `removed` deleted.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> delete_row_column(const Eigen::MatrixBase<Derived>& m, int removed) {
    const Eigen::Index n = m.rows();
    const Eigen::Index k = removed;
    const Eigen::Index tail = n - k - 1;
    DenseMatrix<typename Derived::Scalar> out(n - 1, n - 1);
    out.topLeftCorner(k, k) = m.topLeftCorner(k, k);
    out.topRightCorner(k, tail) = m.topRightCorner(k, tail);
    out.bottomLeftCorner(tail, k) = m.bottomLeftCorner(tail, k);
    out.bottomRightCorner(tail, tail) = m.bottomRightCorner(tail, tail);
    return out;
}

// Grounded Laplacian: L with the leader's row and column removed.
template <typename Scalar = double>
SymmetricMatrix<Scalar> grounded_laplacian(const Graph& g, int leader) {
    require_node(g, leader, "leader");
    return delete_row_column(laplacian<Scalar>(g), leader);
}

// D^{-1/2} L D^{-1/2} with D = diag(d_i). Requires every node to have an edge.
template <typename Scalar = double>
SymmetricMatrix<Scalar> normalized_laplacian(const Graph& g) {
    const int n = g.node_count();
    DenseVector<Scalar> inv_sqrt(n);
    for (int i = 0; i < n; ++i) {
        const double d = g.weighted_degree(i);
        if (d <= 0.0) throw ValidationError("normalized Laplacian needs every node to have an edge");
        inv_sqrt(i) = Scalar(1) / std::sqrt(static_cast<Scalar>(d));
    }
    SymmetricMatrix<Scalar> L = laplacian<Scalar>(g);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i <= j; ++i) {
            L(i, j) = L(i, j) * inv_sqrt(i) * inv_sqrt(j);
            L(j, i) = L(i, j);
        }
    }
    return L;
}

}  // namespace cscale
