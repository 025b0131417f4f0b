#pragma once

#include <algorithm>
#include <cmath>
#include <vector>
#include <utility>

#include <Eigen/Eigenvalues>

#include "isoembed/types.hpp"

namespace isoembed {

inline constexpr double kSymmetryTolerance = 1e-10;

/// Top-k eigenpairs of a symmetric matrix, largest first.
template <typename Scalar>
struct SpectralState {
    Vector<Scalar> eigenvalues;  ///< μ_1 >= ... >= μ_k
    OrthonormalBasis<Scalar> basis;
    /// μ_k - μ_{k+1}, with μ_{d+1} taken as 0.
    Scalar spectral_gap;
};

/// M = Σ_i λ_i x_i x_iᵀ, symmetrized so that M == Mᵀ bitwise.
template <typename Scalar>
Matrix<Scalar> weighted_moment_matrix(const UnitVectorSet<Scalar>& x, const SimplexWeights<Scalar>& w) {
    if (w.size() != x.size()) {
        throw ShapeError("weights have length " + std::to_string(w.size()) + " but there are " +
                         std::to_string(x.size()) + " vectors");
    }
    // M = Xᵀ diag(λ) X. Rows with λ_i = 0 contribute nothing and are skipped;
    // the rest are gathered into block buffers that stay in cache. Only the
    // lower triangle is accumulated, then mirrored.
    constexpr Index block = 1024;
    const auto& X = x.matrix();
    const auto& lambda = w.values();
    const Index n = X.rows();
    const Index d = X.cols();
    Matrix<Scalar> m = Matrix<Scalar>::Zero(d, d);
    Matrix<Scalar> gathered(std::min(block, n), d);
    Matrix<Scalar> scaled(gathered.rows(), d);
    std::vector<Index> rows;
    rows.reserve(static_cast<std::size_t>(gathered.rows()));
    auto flush = [&] {
        const Index used = static_cast<Index>(rows.size());
        if (used == 0) return;
        for (Index j = 0; j < d; ++j) {
            for (Index r = 0; r < used; ++r) {
                const Index i = rows[static_cast<std::size_t>(r)];
                gathered(r, j) = X(i, j);
                scaled(r, j) = lambda[i] * X(i, j);
            }
        }
        m.template triangularView<Eigen::Lower>() += scaled.topRows(used).transpose() * gathered.topRows(used);
        rows.clear();
    };
    for (Index i = 0; i < n; ++i) {
        if (!(lambda[i] > Scalar(0))) continue;
        rows.push_back(i);
        if (static_cast<Index>(rows.size()) == gathered.rows()) flush();
    }
    flush();
    m.template triangularView<Eigen::StrictlyUpper>() = m.transpose();
    return m;
}

/// Flips each column so its largest-magnitude entry (first one on ties) is positive.
template <typename Scalar>
void canonicalize_signs(Matrix<Scalar>& v) {
    for (Index j = 0; j < v.cols(); ++j) {
        Index pivot = 0;
        Scalar best(-1);
        for (Index i = 0; i < v.rows(); ++i) {
            const Scalar mag = std::abs(v(i, j));
            if (mag > best) {
                best = mag;
                pivot = i;
            }
        }
        if (v(pivot, j) < Scalar(0)) v.col(j) = -v.col(j);
    }
}

namespace detail {

template <typename Derived>
void require_symmetric(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw ShapeError("expected a non-empty square matrix");
    }
    const auto asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (!(asym <= kSymmetryTolerance)) {
        throw ContractError("matrix is not symmetric (max |M - Mᵀ| = " +
                            std::to_string(static_cast<double>(asym)) + ")");
    }
}

}  // namespace detail

/// All eigenvalues of a symmetric matrix in descending order.
template <typename Derived>
Vector<typename Derived::Scalar> symmetric_spectrum(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    detail::require_symmetric(m);
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(m.eval(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ContractError("eigendecomposition did not converge");
    return solver.eigenvalues().reverse();
}

template <typename Derived>
SpectralState<typename Derived::Scalar> top_k_eigenpairs(const Eigen::MatrixBase<Derived>& m, Index k) {
    using Scalar = typename Derived::Scalar;
    detail::require_symmetric(m);
    const Index d = m.rows();
    if (k < 1 || k > d) {
        throw RangeError("k = " + std::to_string(k) + " is outside [1, " + std::to_string(d) + "]");
    }
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(m.eval());
    if (solver.info() != Eigen::Success) throw ContractError("eigendecomposition did not converge");

    // Eigen returns ascending order; take the last k columns reversed.
    const auto& all_values = solver.eigenvalues();
    const auto& all_vectors = solver.eigenvectors();
    Vector<Scalar> values(k);
    Matrix<Scalar> vectors(d, k);
    for (Index j = 0; j < k; ++j) {
        values[j] = all_values[d - 1 - j];
        vectors.col(j) = all_vectors.col(d - 1 - j);
    }
    canonicalize_signs(vectors);
    const Scalar next = k < d ? all_values[d - 1 - k] : Scalar(0);
    const Scalar gap = values[k - 1] - next;
    return {std::move(values), OrthonormalBasis<Scalar>(std::move(vectors)), gap};
}

}  // namespace isoembed
