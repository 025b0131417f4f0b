#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <utility>

#include <Eigen/QR>

#include "isoembed/dual_ascent.hpp"

namespace isoembed {

/// PCA: top-k eigenvectors of (1/n) XᵀX, i.e. the moment matrix at uniform
/// weights. Identical to iterate 0 of run_projected_ascent.
template <typename Scalar>
OrthonormalBasis<Scalar> pca_basis(const UnitVectorSet<Scalar>& x, Index k) {
    detail::require_k(x, k);
    return top_k_eigenpairs(weighted_moment_matrix(x, SimplexWeights<Scalar>::uniform(x.size())), k).basis;
}

/// Standard normal deviates, reproducible across platforms.
///
/// std::mt19937_64 seeded with the given seed; each deviate pair comes from
/// two uniforms u = (bits >> 11 + 0.5) · 2⁻⁵³ in (0, 1) through the basic
/// Box–Muller transform, cos branch first. std::normal_distribution is
/// avoided because its algorithm differs between standard libraries.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

namespace detail {

/// Thin Q of a Householder QR, with columns flipped so diag(R) >= 0.
template <typename Scalar>
Matrix<Scalar> orthonormalize_columns(const Matrix<Scalar>& a) {
    const Index d = a.rows();
    const Index k = a.cols();
    Eigen::HouseholderQR<Matrix<Scalar>> qr(a);
    Matrix<Scalar> q = qr.householderQ() * Matrix<Scalar>::Identity(d, k);
    const auto& r = qr.matrixQR();
    for (Index j = 0; j < k; ++j) {
        if (r(j, j) < Scalar(0)) q.col(j) = -q.col(j);
    }
    return q;
}

template <typename Scalar>
Matrix<Scalar> gaussian_matrix(Index rows, Index cols, GaussianStream& gauss) {
    Matrix<Scalar> a(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) a(i, j) = static_cast<Scalar>(gauss());
    }
    return a;
}

}  // namespace detail

/// A d×k Gaussian matrix (filled column by column from GaussianStream(seed))
/// orthonormalized by QR. Same arguments, same bits.
template <typename Scalar = double>
OrthonormalBasis<Scalar> random_orthonormal_basis(Index d, Index k, std::uint64_t seed) {
    if (d < 1 || k < 1 || k > d) {
        throw RangeError("random basis needs 1 <= k <= d (got d = " + std::to_string(d) +
                         ", k = " + std::to_string(k) + ")");
    }
    GaussianStream gauss(seed);
    return OrthonormalBasis<Scalar>(detail::orthonormalize_columns(detail::gaussian_matrix<Scalar>(d, k, gauss)));
}

template <typename Scalar>
struct GridSearchResult {
    OrthonormalBasis<Scalar> basis;
    Scalar epsilon;
};

/// Brute-force minimizer of the maximum distortion for tiny problems.
///
/// k = 1 and d <= 3: every direction of a deterministic grid is scored
/// (d = 2: θ = π m / resolution for m < resolution; d = 3: a Fibonacci
/// sphere of `resolution` points). Otherwise, for d <= 4, `resolution`
/// random orthonormal bases are scored. The returned ε is an upper bound
/// on the true optimum.
template <typename Scalar>
GridSearchResult<Scalar> grid_search_optimum(const UnitVectorSet<Scalar>& x, Index k, Index resolution,
                                             std::uint64_t seed = 0) {
    const Index d = x.dim();
    detail::require_k(x, k);
    if (resolution < 100) throw RangeError("grid search needs resolution >= 100");

    if (k == 1 && d <= 3) {
        Matrix<Scalar> directions(d == 1 ? 1 : resolution, d);
        if (d == 1) {
            directions(0, 0) = Scalar(1);
        } else if (d == 2) {
            for (Index m = 0; m < resolution; ++m) {
                const Scalar theta = Scalar(std::numbers::pi) * Scalar(m) / Scalar(resolution);
                directions(m, 0) = std::cos(theta);
                directions(m, 1) = std::sin(theta);
            }
        } else {
            const Scalar golden_angle = Scalar(std::numbers::pi) * (Scalar(3) - std::sqrt(Scalar(5)));
            for (Index m = 0; m < resolution; ++m) {
                const Scalar z = Scalar(1) - Scalar(2) * (Scalar(m) + Scalar(0.5)) / Scalar(resolution);
                const Scalar radius = std::sqrt(std::max(Scalar(0), Scalar(1) - z * z));
                const Scalar phi = golden_angle * Scalar(m);
                directions(m, 0) = radius * std::cos(phi);
                directions(m, 1) = radius * std::sin(phi);
                directions(m, 2) = z;
            }
        }
        // captured(i, m) = (x_i · g_m)²; worst distortion per direction is 1 - min_i captured.
        const Matrix<Scalar> captured = (x.matrix() * directions.transpose()).array().square().matrix();
        Index best = 0;
        Scalar best_eps = std::numeric_limits<Scalar>::infinity();
        for (Index m = 0; m < captured.cols(); ++m) {
            const Scalar eps = Scalar(1) - captured.col(m).minCoeff();
            if (eps < best_eps) {
                best_eps = eps;
                best = m;
            }
        }
        Matrix<Scalar> v = directions.row(best).transpose();
        v /= v.norm();
        OrthonormalBasis<Scalar> basis(std::move(v));
        const Scalar eps = primal_distortion(x, basis).epsilon;
        return {std::move(basis), eps};
    }

    if (d > 4) {
        throw CapabilityError("grid search supports k = 1 with d <= 3, or d <= 4 by random sampling");
    }
    GaussianStream gauss(seed);
    std::optional<OrthonormalBasis<Scalar>> best;
    Scalar best_eps = std::numeric_limits<Scalar>::infinity();
    for (Index m = 0; m < resolution; ++m) {
        OrthonormalBasis<Scalar> candidate(
            detail::orthonormalize_columns(detail::gaussian_matrix<Scalar>(d, k, gauss)));
        const Scalar eps = primal_distortion(x, candidate).epsilon;
        if (eps < best_eps) {
            best_eps = eps;
            best = std::move(candidate);
        }
    }
    return {std::move(*best), best_eps};
}

}  // namespace isoembed
