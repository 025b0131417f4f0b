#include "isoembed/cli.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "isoembed/baselines.hpp"
#include "isoembed/bounds.hpp"
#include "isoembed/core.hpp"
#include "isoembed/dual_ascent.hpp"
#include "isoembed/report.hpp"

namespace isoembed {

namespace {

struct Options {
    std::string input;
    std::string mode = "pairwise";
    int k = 0;
    int iterations = 120;
    std::string eta = "auto";
    std::vector<std::string> baselines;
    std::uint64_t seed = 42;
    bool dedup = false;
    bool header = false;
    std::string out;
    std::string trace;
    double rank_tol = kDefaultRankTolerance;
    long pair_sample = 0;
    bool no_timing = false;
};

/// Keeps `count` rows chosen by a seeded partial Fisher–Yates shuffle, in
/// their original order.
UnitVectorSet<double> sample_rows(const UnitVectorSet<double>& x, Index count, std::uint64_t seed) {
    std::vector<Index> order(static_cast<std::size_t>(x.size()));
    std::iota(order.begin(), order.end(), Index{0});
    std::mt19937_64 engine(seed);
    for (Index i = 0; i < count; ++i) {
        const auto remaining = static_cast<std::uint64_t>(x.size() - i);
        const auto j = i + static_cast<Index>(engine() % remaining);
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    order.resize(static_cast<std::size_t>(count));
    std::sort(order.begin(), order.end());
    return x.select_rows(order);
}

int run(const Options& opt, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();

    std::optional<double> explicit_eta;
    if (opt.eta != "auto") {
        double value = 0.0;
        std::size_t used = 0;
        try {
            value = std::stod(opt.eta, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != opt.eta.size() || !std::isfinite(value) || value <= 0.0) {
            throw UsageError("--eta must be 'auto' or a positive number");
        }
        explicit_eta = value;
    }

    LoadOptions load;
    load.skip_header = opt.header;
    const PointSet<double> points = load_points(opt.input, load);
    const std::string input_hash = fingerprint_hex(fingerprint(points.points()));

    std::optional<UnitVectorSet<double>> vectors;
    if (opt.mode == "pairwise") {
        auto diffs = pairwise_unit_differences(
            points, opt.dedup ? DuplicatePolicy::Drop : DuplicatePolicy::Error);
        if (!diffs.dropped.empty()) {
            err << "warning: dropped " << diffs.dropped.size() << " coincident pair(s)\n";
        }
        vectors.emplace(std::move(diffs.vectors));
    } else {
        if (detail::max_row_norm_deviation(points.points()) > 1e-9) {
            err << "warning: input rows are not unit length; normalizing\n";
        }
        vectors.emplace(normalize_rows(points.points()));
    }

    if (opt.pair_sample > 0 && opt.pair_sample < vectors->size()) {
        err << "warning: sampling " << opt.pair_sample << " of " << vectors->size() << " vectors\n";
        vectors.emplace(sample_rows(*vectors, opt.pair_sample, opt.seed));
    }
    const UnitVectorSet<double>& x = *vectors;

    if (opt.k > x.dim()) {
        throw UsageError("--k " + std::to_string(opt.k) + " exceeds the data dimension " + std::to_string(x.dim()));
    }

    AscentConfig<double> cfg;
    cfg.iterations = opt.iterations;
    cfg.step_size = explicit_eta;
    cfg.seed = opt.seed;
    const auto result = run_projected_ascent(x, opt.k, cfg);
    const auto bounds = approximation_bound(x, opt.rank_tol);
    duality_sandwich_check(result, bounds);

    BaselineMap baselines;
    for (const auto& name : opt.baselines) {
        if (name == "pca") {
            baselines.emplace(name, primal_distortion(x, pca_basis(x, opt.k)));
        } else {
            baselines.emplace(name, primal_distortion(x, random_orthonormal_basis<double>(x.dim(), opt.k, opt.seed)));
        }
    }
    if (result.degenerate_iterations > 0) {
        err << "warning: " << result.degenerate_iterations
            << " iterate(s) had a near-degenerate top-k eigenvalue gap\n";
    }

    RunSummary summary;
    summary.n = x.size();
    summary.d = x.dim();
    summary.k = opt.k;
    summary.iterations = opt.iterations;
    summary.eta = result.step_size;
    summary.mode = opt.mode;
    summary.input_fingerprint = input_hash;
    if (!opt.trace.empty()) write_trace(result, opt.trace);
    if (!opt.no_timing) {
        summary.runtime_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }

    if (opt.out.empty()) {
        out << report_json(summary, result, bounds, baselines);
    } else {
        emit_report(summary, result, bounds, baselines, opt.out);
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Orthonormal embeddings that minimize the maximum squared-length distortion", "embed"};
    Options opt;
    app.add_option("--input", opt.input, "Matrix file, one point per row")->required();
    app.add_option("--mode", opt.mode, "pairwise: embed normalized pairwise differences; rows: rows are directions")
        ->check(CLI::IsMember({"pairwise", "rows"}));
    app.add_option("--k", opt.k, "Embedding dimension")->required()->check(CLI::PositiveNumber);
    app.add_option("--iters", opt.iterations, "Ascent iterations")->check(CLI::NonNegativeNumber);
    app.add_option("--eta", opt.eta, "Step size: 'auto' (sqrt(2/(n*T))) or a positive number");
    app.add_option("--baselines", opt.baselines, "Comma-separated baselines to score: pca,random")
        ->delimiter(',')
        ->check(CLI::IsMember({"pca", "random"}));
    app.add_option("--seed", opt.seed, "Seed for the random baseline and pair sampling");
    app.add_flag("--dedup", opt.dedup, "Drop coincident point pairs instead of failing");
    app.add_flag("--header", opt.header, "Skip the first line of the input");
    app.add_option("--out", opt.out, "JSON report path (default: stdout)");
    app.add_option("--trace", opt.trace, "Per-iteration CSV trace path");
    app.add_option("--rank-tol", opt.rank_tol, "Relative singular-value cutoff for the rank")
        ->check(CLI::PositiveNumber);
    app.add_option("--pair-sample", opt.pair_sample, "Keep only this many vectors, sampled with --seed (0: all)")
        ->check(CLI::NonNegativeNumber);
    app.add_flag("--no-timing", opt.no_timing, "Write runtime_seconds as null so reports are reproducible");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << "run with --help for usage\n";
        return kExitUsageError;
    }

    try {
        return run(opt, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsageError;
    } catch (const ConfigError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitDataError;
    }
}

}  // namespace isoembed
