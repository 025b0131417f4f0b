#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "isoembed/bounds.hpp"
#include "isoembed/dual_ascent.hpp"

namespace isoembed {

/// Run metadata that the JSON report carries besides the numeric results.
struct RunSummary {
    Index n = 0;
    Index d = 0;
    Index k = 0;
    Index iterations = 0;
    std::optional<double> eta;
    std::string mode;
    std::optional<double> runtime_seconds;  ///< omitted (null) for reproducible output
    std::string input_fingerprint;
};

using BaselineMap = std::map<std::string, DistortionReport<double>>;

/// The report as a single JSON object with a fixed field order:
/// n, d, k, iters, eta, mode, epsilon_alg, selected_iterate, dual_best,
/// epsilon_<baseline>..., bound_sigma, bound_kappa, rank, kappa, sigma_max,
/// degenerate_iterations, runtime_seconds, input_fingerprint.
/// Infinite bounds are written as the string "inf".
std::string report_json(const RunSummary& summary, const EmbeddingResult<double>& result,
                        const BoundReport<double>& bounds, const BaselineMap& baselines);

void emit_report(const RunSummary& summary, const EmbeddingResult<double>& result,
                 const BoundReport<double>& bounds, const BaselineMap& baselines,
                 const std::filesystem::path& path);

/// CSV with header `t,dual_value,primal_epsilon,best_epsilon,degenerate`; the
/// averaged-iterate record, when present, is last and has t = "avg".
std::string trace_csv(const EmbeddingResult<double>& result);

void write_trace(const EmbeddingResult<double>& result, const std::filesystem::path& path);

}  // namespace isoembed
