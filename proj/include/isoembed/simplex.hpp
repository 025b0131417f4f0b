#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <vector>

#include "isoembed/types.hpp"

namespace isoembed {

/// True iff min w_i >= -tol and |Σ w_i - 1| <= tol.
template <typename Derived>
bool is_on_simplex(const Eigen::MatrixBase<Derived>& w, typename Derived::Scalar tol) {
    return detail::on_simplex(w, tol);
}

/// Euclidean projection of y onto the probability simplex.
///
/// Sort y descending, take ρ as the largest (1-based) index j with
/// y_(j) + (1 - Σ_{i<=j} y_(i)) / j > 0, shift every coordinate by
/// α = (1 - Σ_{i<=ρ} y_(i)) / ρ and clip at zero. O(n log n).
template <typename Derived>
SimplexWeights<typename Derived::Scalar> project_to_simplex(const Eigen::MatrixBase<Derived>& y) {
    using Scalar = typename Derived::Scalar;
    const Index n = y.size();
    if (n < 1) throw InvalidInputError("cannot project an empty vector onto the simplex");
    if (!y.allFinite()) throw InvalidInputError("simplex projection input has non-finite entries");

    // Any subset A gives (Σ_A y - 1)/|A| <= the final threshold -α, so entries
    // below such a bound are clipped to zero and sort after every kept entry.
    // Sorting only the kept ones leaves every prefix sum, ρ and α unchanged.
    // The margin covers rounding in either sum.
    const Scalar margin = Scalar(4) * std::numeric_limits<Scalar>::epsilon() * (y.cwiseAbs().sum() + Scalar(1));
    std::vector<Scalar> sorted(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) sorted[static_cast<std::size_t>(i)] = y[i];
    for (int pass = 0; pass < 3; ++pass) {
        Scalar sum(0);
        for (Scalar v : sorted) sum += v;
        const Scalar bound = (sum - Scalar(1)) / Scalar(sorted.size()) - margin;
        const auto kept = std::partition(sorted.begin(), sorted.end(), [bound](Scalar v) { return v > bound; });
        if (kept == sorted.begin() || kept == sorted.end()) break;
        sorted.erase(kept, sorted.end());
    }
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    Scalar prefix(0);
    Scalar prefix_at_rho(0);
    Index rho = 0;
    for (Index j = 0; j < static_cast<Index>(sorted.size()); ++j) {
        const Scalar value = sorted[static_cast<std::size_t>(j)];
        prefix += value;
        if (value + (Scalar(1) - prefix) / Scalar(j + 1) > Scalar(0)) {
            rho = j + 1;
            prefix_at_rho = prefix;
        }
    }
    // j = 1 always qualifies in exact arithmetic; huge inputs can cancel to 0.
    if (rho == 0) {
        rho = 1;
        prefix_at_rho = sorted.front();
    }
    const Scalar alpha = (Scalar(1) - prefix_at_rho) / Scalar(rho);

    Vector<Scalar> out = (y.array() + alpha).cwiseMax(Scalar(0)).matrix();
    return SimplexWeights<Scalar>(std::move(out));
}

}  // namespace isoembed
