#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "isoembed/types.hpp"

namespace isoembed {

/// Divides every row by its Euclidean norm.
template <typename Derived>
UnitVectorSet<typename Derived::Scalar> normalize_rows(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    Matrix<Scalar> out = m;
    for (Index i = 0; i < out.rows(); ++i) {
        const Scalar norm = out.row(i).norm();
        if (!(norm > Scalar(0))) {
            throw DegenerateVectorError(
                "row " + std::to_string(i + 1) + " is the zero vector and has no direction",
                static_cast<std::size_t>(i + 1));
        }
        out.row(i) /= norm;
    }
    return UnitVectorSet<Scalar>(std::move(out));
}

enum class DuplicatePolicy { Error, Drop };

template <typename Scalar>
struct PairwiseDifferences {
    UnitVectorSet<Scalar> vectors;
    /// 1-based (i, j) pairs omitted under DuplicatePolicy::Drop.
    std::vector<std::pair<std::size_t, std::size_t>> dropped;
};

/// Normalized differences (u_i − u_j)/‖u_i − u_j‖ for all i < j, in row-major
/// pair order: (1,2), (1,3), …, (1,r), (2,3), ….
template <typename Scalar>
PairwiseDifferences<Scalar> pairwise_unit_differences(const PointSet<Scalar>& points,
                                                      DuplicatePolicy policy = DuplicatePolicy::Error) {
    const Index r = points.count();
    const Index d = points.dim();
    if (r < 2) throw RangeError("pairwise differences need at least two points");

    const auto& u = points.points();
    Matrix<Scalar> diffs(r * (r - 1) / 2, d);
    auto origin = std::make_shared<PairOrigin<Scalar>>();
    origin->points = u.rowwise() - u.colwise().mean();
    origin->inverse_norm.resize(diffs.rows());
    std::vector<std::pair<std::size_t, std::size_t>> dropped;
    Index row = 0;
    for (Index i = 0; i < r; ++i) {
        for (Index j = i + 1; j < r; ++j) {
            const auto pair = std::make_pair(static_cast<std::size_t>(i + 1),
                                             static_cast<std::size_t>(j + 1));
            diffs.row(row) = u.row(i) - u.row(j);
            const Scalar norm = diffs.row(row).norm();
            if (!(norm > Scalar(0))) {
                if (policy == DuplicatePolicy::Error) {
                    throw CoincidentPairError("points " + std::to_string(pair.first) + " and " +
                                                  std::to_string(pair.second) + " coincide",
                                              pair.first, pair.second);
                }
                dropped.push_back(pair);
                continue;
            }
            diffs.row(row) /= norm;
            origin->first.push_back(i);
            origin->second.push_back(j);
            origin->inverse_norm[row] = Scalar(1) / norm;
            ++row;
        }
    }
    if (row == 0) throw EmptyInputError("every pair of points coincides; no differences remain");
    diffs.conservativeResize(row, d);
    origin->inverse_norm.conservativeResize(row);
    return {UnitVectorSet<Scalar>(std::move(diffs), std::move(origin)), std::move(dropped)};
}

/// 64-bit FNV-1a over the shape and the raw bytes of the entries (column-major).
template <typename Derived>
std::uint64_t fingerprint(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    auto mix = [&hash](const void* data, std::size_t bytes) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t b = 0; b < bytes; ++b) {
            hash ^= p[b];
            hash *= 0x100000001b3ULL;
        }
    };
    const std::int64_t shape[2] = {static_cast<std::int64_t>(m.rows()),
                                   static_cast<std::int64_t>(m.cols())};
    mix(shape, sizeof(shape));
    for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = 0; i < m.rows(); ++i) {
            Scalar value = m(i, j);
            if (value == Scalar(0)) value = Scalar(0);  // fold -0.0 into +0.0
            mix(&value, sizeof(Scalar));
        }
    }
    return hash;
}

std::string fingerprint_hex(std::uint64_t hash);

enum class MatrixFormat {
    Auto,        ///< comma-delimited if the line contains a comma, else whitespace
    Csv,
    Whitespace,
};

struct LoadOptions {
    MatrixFormat format = MatrixFormat::Auto;
    bool skip_header = false;
};

/// Reads a numeric matrix, one point per row. Blank lines and lines whose
/// first non-blank character is '#' are ignored.
PointSet<double> load_points(const std::filesystem::path& path, const LoadOptions& options = {});

/// Same grammar as load_points, reading from an in-memory buffer.
PointSet<double> parse_points(const std::string& text, const LoadOptions& options = {});

}  // namespace isoembed
