#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "isoembed/errors.hpp"

namespace isoembed {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

/// Rows within this distance of unit length are silently renormalized by
/// UnitVectorSet; anything further off is rejected.
inline constexpr double kRenormalizeLimit = 1e-6;

namespace detail {

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& m) {
    return m.allFinite();
}

template <typename Derived>
auto max_row_norm_deviation(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    Scalar worst(0);
    for (Index i = 0; i < m.rows(); ++i) {
        worst = std::max(worst, std::abs(m.row(i).norm() - Scalar(1)));
    }
    return worst;
}

}  // namespace detail

/// Largest entrywise deviation of VᵀV from the identity.
template <typename Derived>
auto orthonormality_error(const Eigen::MatrixBase<Derived>& v) {
    using Scalar = typename Derived::Scalar;
    const Index k = v.cols();
    Matrix<Scalar> gram = v.transpose() * v;
    gram -= Matrix<Scalar>::Identity(k, k);
    return k == 0 ? Scalar(0) : gram.cwiseAbs().maxCoeff();
}

/// Raw data points u_1..u_r, one per row.
template <typename Scalar>
class PointSet {
public:
    explicit PointSet(Matrix<Scalar> points) : points_(std::move(points)) {
        if (points_.rows() < 1 || points_.cols() < 1) {
            throw EmptyInputError("point set must have at least one row and one column");
        }
        if (!detail::all_finite(points_)) {
            throw InvalidInputError("point set contains non-finite entries");
        }
    }

    const Matrix<Scalar>& points() const noexcept { return points_; }
    Index count() const noexcept { return points_.rows(); }
    Index dim() const noexcept { return points_.cols(); }

private:
    Matrix<Scalar> points_;
};

/// Row i of a pairwise set is (u_a - u_b) / ‖u_a - u_b‖ with a = first[i],
/// b = second[i]. Points are stored centered (differences do not change).
template <typename Scalar>
struct PairOrigin {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> points;
    std::vector<Index> first;
    std::vector<Index> second;
    Vector<Scalar> inverse_norm;
};

/// Unit-length directions x_1..x_n stored as the rows of X.
template <typename Scalar>
class UnitVectorSet {
public:
    explicit UnitVectorSet(Matrix<Scalar> x, Scalar row_norm_tolerance = Scalar(1e-9))
        : x_(std::move(x)), tolerance_(row_norm_tolerance) {
        if (x_.rows() < 1 || x_.cols() < 1) {
            throw EmptyInputError("unit vector set must have at least one row and one column");
        }
        if (!detail::all_finite(x_)) {
            throw InvalidInputError("unit vector set contains non-finite entries");
        }
        for (Index i = 0; i < x_.rows(); ++i) {
            const Scalar norm = x_.row(i).norm();
            const Scalar deviation = std::abs(norm - Scalar(1));
            if (deviation <= tolerance_) continue;
            if (deviation <= Scalar(kRenormalizeLimit)) {
                x_.row(i) /= norm;
                renormalized_ = true;
                continue;
            }
            throw ContractError("row " + std::to_string(i + 1) + " has norm " +
                                std::to_string(static_cast<double>(norm)) +
                                ", expected unit length");
        }
    }

    /// As above, remembering the points the rows were built from.
    UnitVectorSet(Matrix<Scalar> x, std::shared_ptr<const PairOrigin<Scalar>> origin,
                  Scalar row_norm_tolerance = Scalar(1e-9))
        : UnitVectorSet(std::move(x), row_norm_tolerance) {
        if (origin && (static_cast<Index>(origin->first.size()) != x_.rows() ||
                       static_cast<Index>(origin->second.size()) != x_.rows() ||
                       origin->inverse_norm.size() != x_.rows() || origin->points.cols() != x_.cols())) {
            throw ShapeError("pair origin does not match the vector set");
        }
        origin_ = std::move(origin);
    }

    const Matrix<Scalar>& matrix() const noexcept { return x_; }
    auto row(Index i) const { return x_.row(i); }
    Index size() const noexcept { return x_.rows(); }
    Index dim() const noexcept { return x_.cols(); }
    Scalar row_norm_tolerance() const noexcept { return tolerance_; }
    /// True when construction had to rescale rows that were slightly off.
    bool renormalized() const noexcept { return renormalized_; }
    /// Null unless the set came from pairwise differences.
    const PairOrigin<Scalar>* pair_origin() const noexcept { return origin_.get(); }

    /// The given rows, in the given order; keeps the pair origin.
    UnitVectorSet select_rows(const std::vector<Index>& rows) const {
        Matrix<Scalar> picked(static_cast<Index>(rows.size()), x_.cols());
        for (std::size_t i = 0; i < rows.size(); ++i) picked.row(static_cast<Index>(i)) = x_.row(rows[i]);
        if (!origin_) return UnitVectorSet(std::move(picked), tolerance_);
        auto origin = std::make_shared<PairOrigin<Scalar>>();
        origin->points = origin_->points;
        origin->inverse_norm.resize(static_cast<Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            origin->first.push_back(origin_->first[static_cast<std::size_t>(rows[i])]);
            origin->second.push_back(origin_->second[static_cast<std::size_t>(rows[i])]);
            origin->inverse_norm[static_cast<Index>(i)] = origin_->inverse_norm[rows[i]];
        }
        return UnitVectorSet(std::move(picked), std::move(origin), tolerance_);
    }

private:
    Matrix<Scalar> x_;
    Scalar tolerance_;
    bool renormalized_ = false;
    std::shared_ptr<const PairOrigin<Scalar>> origin_;
};

namespace detail {

template <typename Derived>
bool on_simplex(const Eigen::MatrixBase<Derived>& w, typename Derived::Scalar tol) {
    if (w.size() == 0 || !w.allFinite()) return false;
    return w.minCoeff() >= -tol && std::abs(w.sum() - 1) <= tol;
}

}  // namespace detail

/// Dual weights λ on the probability simplex.
template <typename Scalar>
class SimplexWeights {
public:
    explicit SimplexWeights(Vector<Scalar> lambda, Scalar tol = Scalar(1e-9))
        : lambda_(std::move(lambda)) {
        if (!detail::on_simplex(lambda_, tol)) {
            throw ContractError("weights are not on the probability simplex");
        }
    }

    static SimplexWeights uniform(Index n) {
        if (n < 1) throw RangeError("uniform weights need n >= 1");
        return SimplexWeights(Vector<Scalar>::Constant(n, Scalar(1) / Scalar(n)));
    }

    const Vector<Scalar>& values() const noexcept { return lambda_; }
    Scalar operator[](Index i) const { return lambda_[i]; }
    Index size() const noexcept { return lambda_.size(); }

private:
    Vector<Scalar> lambda_;
};

/// A d×k matrix V with orthonormal columns: the embedding map x ↦ Vᵀx.
template <typename Scalar>
class OrthonormalBasis {
public:
    explicit OrthonormalBasis(Matrix<Scalar> v, Scalar tol = Scalar(1e-8)) : v_(std::move(v)) {
        if (v_.cols() < 1 || v_.cols() > v_.rows()) {
            throw RangeError("basis must have 1 <= k <= d columns");
        }
        if (!detail::all_finite(v_)) {
            throw InvalidInputError("basis contains non-finite entries");
        }
        const Scalar err = orthonormality_error(v_);
        if (!(err <= tol)) {
            throw ContractError("basis columns are not orthonormal (max |VᵀV - I| = " +
                                std::to_string(static_cast<double>(err)) + ")");
        }
    }

    const Matrix<Scalar>& matrix() const noexcept { return v_; }
    auto column(Index j) const { return v_.col(j); }
    Index dim() const noexcept { return v_.rows(); }
    Index k() const noexcept { return v_.cols(); }

private:
    Matrix<Scalar> v_;
};

}  // namespace isoembed
