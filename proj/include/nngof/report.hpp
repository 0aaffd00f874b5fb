#pragma once

#include <string>

#include <json.hpp>

#include "nngof/gof_test.hpp"
#include "nngof/model_compare.hpp"

namespace nngof {

// Context echoed into rendered reports.
struct ReportContext {
    std::string input_path;
    std::vector<std::string> columns;
    std::string null_family = "mggd";  // "mggd" or "gaussian"
    std::uint64_t seed = 0;
};

// Machine-readable report. Doubles round-trip exactly through the JSON
// serialization; wall-clock timing is deliberately excluded so emitted files
// are identical across reruns.
nlohmann::json gof_report_to_json(const GofReport& report, const ReportContext& ctx);
GofReport gof_report_from_json(const nlohmann::json& j);

std::string render_gof_report_text(const GofReport& report, const ReportContext& ctx);

// Bootstrap statistic values per replicate (histogram source data).
void write_bootstrap_csv(const GofReport& report, const std::string& path);

nlohmann::json model_comparison_to_json(const ModelComparison& cmp);
std::string render_model_comparison_text(const ModelComparison& cmp);
void write_beta_profile_csv(const ModelComparison& cmp, const std::string& path);

void write_qq_csv(const std::vector<QqPoint>& points, const std::string& path);

}  // namespace nngof
