#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "isoembed/dual_ascent.hpp"
#include "isoembed/spectral.hpp"

namespace isoembed {

inline constexpr double kDefaultRankTolerance = 1e-10;

template <typename Scalar>
struct SingularSpectrum {
    Vector<Scalar> singular_values;  ///< σ_1 >= ... >= σ_d >= 0
    Index rank;                      ///< ℓ = #{σ_i > rank_tol · σ_1}
    Scalar kappa;                    ///< σ_1 / σ_ℓ
};

/// Singular values of X, taken as square roots of the eigenvalues of the
/// d×d Gram matrix XᵀX (n is usually far larger than d).
template <typename Scalar>
SingularSpectrum<Scalar> singular_spectrum(const UnitVectorSet<Scalar>& x,
                                           Scalar rank_tol = Scalar(kDefaultRankTolerance)) {
    const auto& X = x.matrix();
    Matrix<Scalar> gram = X.transpose() * X;
    gram = (gram + gram.transpose()).eval() * Scalar(0.5);
    Vector<Scalar> sigma = symmetric_spectrum(gram).cwiseMax(Scalar(0)).cwiseSqrt();

    const Scalar cutoff = rank_tol * sigma[0];
    Index rank = 0;
    while (rank < sigma.size() && sigma[rank] > cutoff) ++rank;
    // Unit rows make σ_1² >= 1, so rank >= 1 always.
    const Scalar kappa = sigma[0] / sigma[rank - 1];
    return {std::move(sigma), rank, kappa};
}

/// Spectral guarantees for the dual-based embedding of X:
///   ε_ALG / p* <= 1 / (1 - σ_1²/n) <= 1 / (1 - κ²/ℓ).
/// Bounds that are undefined or vacuous are +infinity and explained in
/// `diagnostics`.
template <typename Scalar>
struct BoundReport {
    Vector<Scalar> singular_values;
    Index rank;
    Scalar kappa;
    Scalar bound_sigma;
    Scalar bound_kappa;
    Scalar spectrum_sum_check;  ///< Σ_{i<=ℓ} σ_i², equal to n for unit rows
    Index n;
    std::vector<std::string> diagnostics;
    std::uint64_t fingerprint;
};

template <typename Scalar>
BoundReport<Scalar> approximation_bound(const UnitVectorSet<Scalar>& x,
                                        Scalar rank_tol = Scalar(kDefaultRankTolerance)) {
    constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();
    auto spectrum = singular_spectrum(x, rank_tol);
    const Scalar n = static_cast<Scalar>(x.size());
    const Index rank = spectrum.rank;
    const Scalar sigma1_sq = spectrum.singular_values[0] * spectrum.singular_values[0];
    const Scalar sum_sq = spectrum.singular_values.head(rank).squaredNorm();

    std::vector<std::string> diagnostics;
    Scalar bound_sigma = inf;
    Scalar bound_kappa = inf;
    if (rank == 1) {
        diagnostics.emplace_back("rank-1 data: all vectors are parallel, sigma_1^2 = n and both bounds are unbounded");
    } else {
        if (n - sigma1_sq > Scalar(0)) {
            bound_sigma = n / (n - sigma1_sq);
        } else {
            diagnostics.emplace_back("sigma_1^2 reaches n numerically; sigma bound is unbounded");
        }
        const Scalar ell = static_cast<Scalar>(rank);
        const Scalar kappa_sq = spectrum.kappa * spectrum.kappa;
        if (kappa_sq < ell) {
            bound_kappa = ell / (ell - kappa_sq);
        } else {
            diagnostics.emplace_back("kappa^2 >= rank; condition-number bound is vacuous");
        }
    }
    return {std::move(spectrum.singular_values),
            rank,
            spectrum.kappa,
            bound_sigma,
            bound_kappa,
            sum_sq,
            x.size(),
            std::move(diagnostics),
            fingerprint(x.matrix())};
}

inline constexpr double kWeakDualityTolerance = 1e-8;

template <typename Scalar>
struct SandwichDiagnostic {
    bool holds;  ///< best dual <= ε_ALG (weak duality)
    /// ε_ALG / best dual, an upper bound on ε_ALG / p*; unset when best dual is 0.
    std::optional<Scalar> certified_ratio;
    bool exact_optimum;  ///< ε_ALG = 0, so the embedding is optimal outright
    /// Only evaluated when the caller asserts best dual is the dual optimum.
    std::optional<bool> within_bound_sigma;
    std::optional<bool> within_bound_kappa;
};

/// Checks d̂ <= ε_ALG for a finished run and reports the certified ratio.
/// Throws ConsistencyError on a weak-duality violation, or, when
/// `assume_dual_optimal` is set, on a ratio above either spectral bound.
template <typename Scalar>
SandwichDiagnostic<Scalar> duality_sandwich_check(const EmbeddingResult<Scalar>& result,
                                                  const BoundReport<Scalar>& report,
                                                  bool assume_dual_optimal = false) {
    if (result.fingerprint != report.fingerprint) {
        throw UsageError("embedding result and bound report were computed from different data");
    }
    const Scalar eps = result.distortion.epsilon;
    const Scalar dual = result.best_dual;
    if (!(dual <= eps + Scalar(kWeakDualityTolerance))) {
        throw ConsistencyError("weak duality violated: best dual value " + std::to_string(dual) +
                               " exceeds distortion " + std::to_string(eps));
    }

    SandwichDiagnostic<Scalar> out{true, std::nullopt, eps == Scalar(0), std::nullopt, std::nullopt};
    if (dual > Scalar(0)) out.certified_ratio = eps / dual;

    if (assume_dual_optimal && out.certified_ratio) {
        const Scalar ratio = *out.certified_ratio;
        out.within_bound_sigma = ratio <= report.bound_sigma + Scalar(1e-9);
        out.within_bound_kappa = ratio <= report.bound_kappa + Scalar(1e-9);
        if (!*out.within_bound_sigma || !*out.within_bound_kappa) {
            throw ConsistencyError("certified ratio " + std::to_string(ratio) +
                                   " exceeds the spectral bound although the dual value was declared optimal");
        }
    }
    return out;
}

}  // namespace isoembed
