#include "isoembed/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace isoembed {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json number_or_inf(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return value;
}

std::string format_number(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::string report_json(const RunSummary& summary, const EmbeddingResult<double>& result,
                        const BoundReport<double>& bounds, const BaselineMap& baselines) {
    ordered_json j;
    j["n"] = summary.n;
    j["d"] = summary.d;
    j["k"] = summary.k;
    j["iters"] = summary.iterations;
    j["eta"] = summary.eta ? ordered_json(*summary.eta) : ordered_json(nullptr);
    j["mode"] = summary.mode;
    j["epsilon_alg"] = result.distortion.epsilon;
    j["selected_iterate"] = result.selected == SelectedIterate::Best ? "best" : "average";
    j["dual_best"] = result.best_dual;
    for (const auto& [name, report] : baselines) j["epsilon_" + name] = report.epsilon;
    j["bound_sigma"] = number_or_inf(bounds.bound_sigma);
    j["bound_kappa"] = number_or_inf(bounds.bound_kappa);
    j["rank"] = bounds.rank;
    j["kappa"] = number_or_inf(bounds.kappa);
    j["sigma_max"] = bounds.singular_values[0];
    j["degenerate_iterations"] = result.degenerate_iterations;
    j["runtime_seconds"] =
        summary.runtime_seconds ? ordered_json(*summary.runtime_seconds) : ordered_json(nullptr);
    j["input_fingerprint"] = summary.input_fingerprint;
    return j.dump(2) + "\n";
}

void emit_report(const RunSummary& summary, const EmbeddingResult<double>& result,
                 const BoundReport<double>& bounds, const BaselineMap& baselines,
                 const std::filesystem::path& path) {
    write_file(path, report_json(summary, result, bounds, baselines));
}

std::string trace_csv(const EmbeddingResult<double>& result) {
    std::string out = "t,dual_value,primal_epsilon,best_epsilon,degenerate\n";
    for (const auto& r : result.trace) {
        out += r.average ? std::string("avg") : std::to_string(r.t);
        out += ',' + format_number(r.dual_value);
        out += ',' + format_number(r.primal_epsilon);
        out += ',' + format_number(r.best_epsilon);
        out += r.degenerate ? ",1\n" : ",0\n";
    }
    return out;
}

void write_trace(const EmbeddingResult<double>& result, const std::filesystem::path& path) {
    write_file(path, trace_csv(result));
}

}  // namespace isoembed
