#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "isoembed/core.hpp"
#include "isoembed/simplex.hpp"
#include "isoembed/spectral.hpp"

namespace isoembed {

template <typename Scalar>
struct AscentConfig {
    Index iterations = 120;
    /// Unset means √2 / √(n·T).
    std::optional<Scalar> step_size;
    bool evaluate_average = true;
    /// Iterates whose top-k gap falls below this are flagged degenerate.
    Scalar degeneracy_tolerance = Scalar(1e-8);
    /// Reserved for randomized reporting; the driver itself is deterministic.
    std::uint64_t seed = 42;
};

/// Per-vector distortion φ_i = 1 - ‖Vᵀx_i‖² and its maximum.
template <typename Scalar>
struct DistortionReport {
    Vector<Scalar> phi;
    Scalar epsilon;
    Index argmax;  ///< 0-based, first index on ties
};

template <typename Scalar>
struct IterationRecord {
    Index t;
    Scalar dual_value;
    Scalar primal_epsilon;
    Scalar best_epsilon;
    bool degenerate;
    bool average = false;  ///< the averaged-iterate record that closes the trace
};

enum class SelectedIterate { Best, Average };

template <typename Scalar>
struct EmbeddingResult {
    OrthonormalBasis<Scalar> basis;
    DistortionReport<Scalar> distortion;
    std::vector<IterationRecord<Scalar>> trace;
    SelectedIterate selected;
    SimplexWeights<Scalar> lambda;
    Scalar best_dual;
    std::optional<Scalar> step_size;  ///< unset for T = 0 runs with an automatic step
    Index degenerate_iterations;
    std::uint64_t fingerprint;  ///< of the UnitVectorSet the run used
};

namespace detail {

template <typename Scalar>
void require_k(const UnitVectorSet<Scalar>& x, Index k) {
    if (k < 1 || k > x.dim()) {
        throw RangeError("k = " + std::to_string(k) + " is outside [1, " +
                         std::to_string(x.dim()) + "]");
    }
}

/// Dual value 1 - Σ_{j<=k} μ_j, clipped to [0, 1]. Exactly 0 when k = d.
template <typename Scalar>
Scalar dual_value_of(const SpectralState<Scalar>& state, Index d) {
    if (state.basis.k() == d) return Scalar(0);
    return std::clamp(Scalar(1) - state.eigenvalues.sum(), Scalar(0), Scalar(1));
}

/// ‖Vᵀx_i‖² for every row.
template <typename Scalar>
Vector<Scalar> captured_energy(const UnitVectorSet<Scalar>& x, const OrthonormalBasis<Scalar>& v) {
    if (v.k() == x.dim()) return Vector<Scalar>::Ones(x.size());
    if (const auto* origin = x.pair_origin()) {
        // ‖Vᵀ(u_a - u_b)‖² / ‖u_a - u_b‖² from the projected points.
        const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> projected =
            origin->points * v.matrix();
        Vector<Scalar> energy(x.size());
        for (Index i = 0; i < x.size(); ++i) {
            const auto a = origin->first[static_cast<std::size_t>(i)];
            const auto b = origin->second[static_cast<std::size_t>(i)];
            const Scalar scale = origin->inverse_norm[i];
            energy[i] = (projected.row(a) - projected.row(b)).squaredNorm() * scale * scale;
        }
        return energy;
    }
    constexpr Index block = 2048;
    const auto& X = x.matrix();
    const Index n = X.rows();
    Vector<Scalar> energy(n);
    Matrix<Scalar> projected(std::min(block, n), v.k());
    for (Index start = 0; start < n; start += block) {
        const Index rows = std::min(block, n - start);
        projected.topRows(rows).noalias() = X.middleRows(start, rows) * v.matrix();
        energy.segment(start, rows) = projected.topRows(rows).rowwise().squaredNorm();
    }
    return energy;
}

/// Distortion report from precomputed ‖Vᵀx_i‖².
template <typename Scalar>
DistortionReport<Scalar> distortion_from_energy(const Vector<Scalar>& energy) {
    Vector<Scalar> phi = (Scalar(1) - energy.array()).cwiseMax(Scalar(0)).cwiseMin(Scalar(1)).matrix();
    Index argmax = 0;
    for (Index i = 1; i < phi.size(); ++i) {
        if (phi[i] > phi[argmax]) argmax = i;
    }
    const Scalar eps = phi[argmax];
    return {std::move(phi), eps, argmax};
}

template <typename Scalar>
struct Evaluation {
    SpectralState<Scalar> state;
    Scalar dual;
};

template <typename Scalar>
Evaluation<Scalar> evaluate(const UnitVectorSet<Scalar>& x, const SimplexWeights<Scalar>& w, Index k) {
    auto state = top_k_eigenpairs(weighted_moment_matrix(x, w), k);
    const Scalar dual = dual_value_of(state, x.dim());
    return {std::move(state), dual};
}

}  // namespace detail

/// g(λ) = 1 - (sum of the top-k eigenvalues of M(λ)); lies in [0, 1].
template <typename Scalar>
Scalar dual_objective(const UnitVectorSet<Scalar>& x, const SimplexWeights<Scalar>& w, Index k) {
    detail::require_k(x, k);
    return detail::evaluate(x, w, k).dual;
}

/// ∂g/∂λ_ℓ = -Σ_{j<=k} (x_ℓᵀ v_j)². Exact where the top-k eigenvalues are
/// separated from the rest; elsewhere it is the value for whichever
/// eigenbasis the decomposition returned.
template <typename Scalar>
Vector<Scalar> dual_gradient(const UnitVectorSet<Scalar>& x, const SimplexWeights<Scalar>& w, Index k) {
    detail::require_k(x, k);
    const auto eval = detail::evaluate(x, w, k);
    return -detail::captured_energy(x, eval.state.basis);
}

template <typename Scalar>
DistortionReport<Scalar> primal_distortion(const UnitVectorSet<Scalar>& x, const OrthonormalBasis<Scalar>& v) {
    if (v.dim() != x.dim()) {
        throw ShapeError("basis has " + std::to_string(v.dim()) + " rows but vectors live in dimension " +
                         std::to_string(x.dim()));
    }
    if (!(orthonormality_error(v.matrix()) <= Scalar(1e-8))) {
        throw ContractError("basis columns are not orthonormal within 1e-8");
    }
    return detail::distortion_from_energy(detail::captured_energy(x, v));
}

/// η = D / (L √T) with D = √2 (simplex diameter) and L = √n (gradient bound).
inline double default_step_size(Index n, Index iterations) {
    if (n < 1) throw RangeError("step size needs n >= 1");
    if (iterations < 1) {
        throw ConfigError("an automatic step size needs at least one iteration; pass an explicit step");
    }
    return std::sqrt(2.0) / (std::sqrt(static_cast<double>(n)) * std::sqrt(static_cast<double>(iterations)));
}

/// Projected gradient ascent on the dual, starting from uniform weights.
///
/// Every iterate's top-k eigenvectors are scored by their maximum distortion
/// and the best is kept (strict improvement only, so earlier iterates win
/// ties). The uniform start is scored as iterate 0, which makes the result
/// never worse than PCA. After T >= 1 steps the averaged weights
/// (1/T) Σ_{t=1..T} λ_t are scored too, and the average is returned unless
/// the best iterate is strictly better.
template <typename Scalar>
EmbeddingResult<Scalar> run_projected_ascent(const UnitVectorSet<Scalar>& x, Index k,
                                             const AscentConfig<Scalar>& cfg = {}) {
    detail::require_k(x, k);
    if (cfg.iterations < 0) throw ConfigError("iteration count must be non-negative");
    if (cfg.step_size && !(std::isfinite(*cfg.step_size) && *cfg.step_size > Scalar(0))) {
        throw ConfigError("step size must be a positive finite number");
    }

    const Index n = x.size();
    const Index d = x.dim();
    const Index iterations = cfg.iterations;
    std::optional<Scalar> step = cfg.step_size;
    if (!step && iterations > 0) step = static_cast<Scalar>(default_step_size(n, iterations));

    auto is_degenerate = [&](const SpectralState<Scalar>& s) {
        return k < d && s.spectral_gap < cfg.degeneracy_tolerance;
    };

    std::vector<IterationRecord<Scalar>> trace;
    trace.reserve(static_cast<std::size_t>(iterations) + 2);

    // The energy of the current basis gives both its distortion and the next gradient.
    auto lambda = SimplexWeights<Scalar>::uniform(n);
    auto eval = detail::evaluate(x, lambda, k);
    Vector<Scalar> energy = detail::captured_energy(x, eval.state.basis);
    auto best_distortion = detail::distortion_from_energy(energy);
    auto best_basis = eval.state.basis;
    auto best_lambda = lambda;
    Scalar best_dual = eval.dual;
    trace.push_back({0, eval.dual, best_distortion.epsilon, best_distortion.epsilon, is_degenerate(eval.state)});

    Vector<Scalar> lambda_sum = Vector<Scalar>::Zero(n);
    for (Index t = 1; t <= iterations; ++t) {
        lambda = project_to_simplex((lambda.values() - *step * energy).eval());
        lambda_sum += lambda.values();

        eval = detail::evaluate(x, lambda, k);
        energy = detail::captured_energy(x, eval.state.basis);
        auto distortion = detail::distortion_from_energy(energy);
        const Scalar eps = distortion.epsilon;
        if (eps < best_distortion.epsilon) {
            best_distortion = std::move(distortion);
            best_basis = eval.state.basis;
            best_lambda = lambda;
        }
        best_dual = std::max(best_dual, eval.dual);
        trace.push_back({t, eval.dual, eps, best_distortion.epsilon, is_degenerate(eval.state)});
    }

    SelectedIterate selected = SelectedIterate::Best;
    if (iterations > 0 && cfg.evaluate_average) {
        SimplexWeights<Scalar> average((lambda_sum / Scalar(iterations)).eval());
        auto avg_eval = detail::evaluate(x, average, k);
        auto avg_distortion = primal_distortion(x, avg_eval.state.basis);
        best_dual = std::max(best_dual, avg_eval.dual);
        trace.push_back({iterations + 1, avg_eval.dual, avg_distortion.epsilon,
                         std::min(best_distortion.epsilon, avg_distortion.epsilon),
                         is_degenerate(avg_eval.state), true});
        if (!(best_distortion.epsilon < avg_distortion.epsilon)) {
            selected = SelectedIterate::Average;
            best_distortion = std::move(avg_distortion);
            best_basis = avg_eval.state.basis;
            best_lambda = average;
        }
    }

    Index degenerate = 0;
    for (const auto& r : trace) degenerate += r.degenerate ? 1 : 0;

    return {std::move(best_basis), std::move(best_distortion), std::move(trace), selected,
            std::move(best_lambda), best_dual, step, degenerate, fingerprint(x.matrix())};
}

}  // namespace isoembed
