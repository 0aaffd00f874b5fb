#include "nngof/report.hpp"

#include <cstdio>
#include <fstream>

#include "nngof/errors.hpp"

namespace nngof {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open output file " + path);
    return out;
}

}  // namespace

nlohmann::json gof_report_to_json(const GofReport& report, const ReportContext& ctx) {
    nlohmann::json j;
    j["input"] = ctx.input_path;
    j["columns"] = ctx.columns;
    j["null_family"] = ctx.null_family;
    j["seed"] = ctx.seed;
    j["n"] = report.n;
    j["m"] = report.m;
    j["alpha"] = report.alpha;
    j["t_obs"] = report.t_obs;
    j["z_obs"] = report.z_obs;
    j["p_value"] = report.p_value;
    j["reject"] = report.reject;
    j["boot_stats"] = report.boot_stats;
    j["failed_replicates"] = report.failed_replicates;

    nlohmann::json fitted;
    fitted["beta"] = report.fitted_beta;
    fitted["beta_clamped"] = report.fit_diagnostics.beta_clamped;
    fitted["tyler_iterations"] = report.fit_diagnostics.tyler_iterations;
    fitted["tyler_converged"] = report.fit_diagnostics.tyler_converged;
    fitted["tyler_residual"] = report.fit_diagnostics.tyler_residual;
    fitted["median_iterations"] = report.fit_diagnostics.median_iterations;
    fitted["dropped_rows"] = report.fit_diagnostics.dropped_rows;
    fitted["lambda_min"] = report.fit_diagnostics.scatter_condition.lambda_min;
    fitted["lambda_max"] = report.fit_diagnostics.scatter_condition.lambda_max;
    fitted["condition"] = report.fit_diagnostics.scatter_condition.condition;
    if (report.fitted) {
        fitted["mu"] = std::vector<double>(report.fitted->params.mu.data(),
                                           report.fitted->params.mu.data() +
                                               report.fitted->params.mu.size());
        nlohmann::json sigma = nlohmann::json::array();
        const Matrix& s = report.fitted->params.sigma->matrix();
        for (Index i = 0; i < s.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (Index k = 0; k < s.cols(); ++k) row.push_back(s(i, k));
            sigma.push_back(row);
        }
        fitted["sigma"] = sigma;
    }
    j["fitted"] = fitted;
    return j;
}

GofReport gof_report_from_json(const nlohmann::json& j) {
    GofReport report;
    report.n = j.at("n").get<Index>();
    report.m = j.at("m").get<Index>();
    report.alpha = j.at("alpha").get<double>();
    report.t_obs = j.at("t_obs").get<Index>();
    report.z_obs = j.at("z_obs").get<double>();
    report.p_value = j.at("p_value").get<double>();
    report.reject = j.at("reject").get<bool>();
    report.boot_stats = j.at("boot_stats").get<std::vector<Index>>();
    report.failed_replicates = j.at("failed_replicates").get<int>();
    const auto& fitted = j.at("fitted");
    report.fitted_beta = fitted.at("beta").get<double>();
    report.fit_diagnostics.beta_clamped = fitted.at("beta_clamped").get<bool>();
    report.fit_diagnostics.tyler_iterations = fitted.at("tyler_iterations").get<int>();
    report.fit_diagnostics.tyler_converged = fitted.at("tyler_converged").get<bool>();
    report.fit_diagnostics.tyler_residual = fitted.at("tyler_residual").get<double>();
    report.fit_diagnostics.median_iterations = fitted.at("median_iterations").get<int>();
    report.fit_diagnostics.dropped_rows = fitted.at("dropped_rows").get<Index>();
    report.fit_diagnostics.scatter_condition.lambda_min = fitted.at("lambda_min").get<double>();
    report.fit_diagnostics.scatter_condition.lambda_max = fitted.at("lambda_max").get<double>();
    report.fit_diagnostics.scatter_condition.condition = fitted.at("condition").get<double>();
    if (fitted.contains("mu") && fitted.contains("sigma")) {
        const auto mu_vec = fitted.at("mu").get<std::vector<double>>();
        Vector mu = Eigen::Map<const Vector>(mu_vec.data(), static_cast<Index>(mu_vec.size()));
        const auto& sj = fitted.at("sigma");
        Matrix sigma(static_cast<Index>(sj.size()), static_cast<Index>(sj.size()));
        for (Index i = 0; i < sigma.rows(); ++i)
            for (Index k = 0; k < sigma.cols(); ++k)
                sigma(i, k) = sj.at(static_cast<std::size_t>(i))
                                  .at(static_cast<std::size_t>(k))
                                  .get<double>();
        MggdParams params(std::move(mu), SpdMatrix(sigma), ShapeParam(report.fitted_beta));
        WhiteningMap map(params.mu, *params.sigma);
        report.fitted = FittedNull{std::move(params), std::move(map), report.fit_diagnostics};
    }
    return report;
}

std::string render_gof_report_text(const GofReport& report, const ReportContext& ctx) {
    char buf[512];
    std::string out;
    out += "NN goodness-of-fit test\n";
    if (!ctx.input_path.empty()) {
        out += "  input              : " + ctx.input_path + "\n";
        if (!ctx.columns.empty()) {
            out += "  columns            : ";
            for (std::size_t i = 0; i < ctx.columns.size(); ++i) {
                if (i) out += ",";
                out += ctx.columns[i];
            }
            out += "\n";
        }
    }
    std::snprintf(buf, sizeof(buf), "  null family        : %s%s\n", ctx.null_family.c_str(),
                  ctx.null_family == "gaussian" ? " (shape fixed at 1)" : " (shape estimated)");
    out += buf;
    std::snprintf(buf, sizeof(buf), "  sample             : n=%lld, m=%lld\n",
                  static_cast<long long>(report.n), static_cast<long long>(report.m));
    out += buf;
    std::snprintf(buf, sizeof(buf), "  fitted beta        : %.4f%s\n", report.fitted_beta,
                  report.fit_diagnostics.beta_clamped ? " (clamped to bound)" : "");
    out += buf;
    std::snprintf(buf, sizeof(buf), "  scatter condition  : %.3g (lambda %.3g .. %.3g)\n",
                  report.fit_diagnostics.scatter_condition.condition,
                  report.fit_diagnostics.scatter_condition.lambda_min,
                  report.fit_diagnostics.scatter_condition.lambda_max);
    out += buf;
    std::snprintf(buf, sizeof(buf), "  T_obs              : %lld of n=%lld  (z = %.3f)\n",
                  static_cast<long long>(report.t_obs), static_cast<long long>(report.n),
                  report.z_obs);
    out += buf;
    std::snprintf(buf, sizeof(buf), "  bootstrap          : B=%zu (%d failed)\n",
                  report.boot_stats.size(), report.failed_replicates);
    out += buf;
    std::snprintf(buf, sizeof(buf), "  p-value            : %.6g\n", report.p_value);
    out += buf;
    std::snprintf(buf, sizeof(buf), "  decision at alpha=%g : %s\n", report.alpha,
                  report.reject ? "REJECT" : "do not reject");
    out += buf;
    return out;
}

void write_bootstrap_csv(const GofReport& report, const std::string& path) {
    auto out = open_out(path);
    out << "replicate,t_star\n";
    for (std::size_t b = 0; b < report.boot_stats.size(); ++b)
        out << b << "," << report.boot_stats[b] << "\n";
}

nlohmann::json model_comparison_to_json(const ModelComparison& cmp) {
    const auto fit_json = [](const ModelFitSummary& s) {
        nlohmann::json j;
        j["model"] = s.model;
        j["log_likelihood"] = s.log_likelihood;
        j["parameter_count"] = s.parameter_count;
        j["aic"] = s.aic;
        j["bic"] = s.bic;
        j["shape"] = s.shape;
        j["grid_edge"] = s.grid_edge;
        return j;
    };
    nlohmann::json j;
    j["normal"] = fit_json(cmp.normal);
    j["t"] = fit_json(cmp.student_t);
    j["mggd"] = fit_json(cmp.mggd);
    nlohmann::json profile = nlohmann::json::array();
    for (const auto& p : cmp.beta_profile)
        profile.push_back({{"beta", p.shape}, {"log_likelihood", p.log_likelihood}});
    j["beta_profile"] = profile;
    return j;
}

std::string render_model_comparison_text(const ModelComparison& cmp) {
    char buf[256];
    std::string out = "Model comparison (penalized likelihood)\n";
    std::snprintf(buf, sizeof(buf), "  %-8s %6s %14s %12s %12s  %s\n", "model", "k", "loglik",
                  "AIC", "BIC", "shape");
    out += buf;
    for (const ModelFitSummary* s : {&cmp.normal, &cmp.student_t, &cmp.mggd}) {
        char shape_buf[64] = "-";
        if (s->model != "normal")
            std::snprintf(shape_buf, sizeof(shape_buf), "%.4g%s", s->shape,
                          s->grid_edge ? " (grid edge)" : "");
        std::snprintf(buf, sizeof(buf), "  %-8s %6d %14.3f %12.3f %12.3f  %s\n",
                      s->model.c_str(), s->parameter_count, s->log_likelihood, s->aic, s->bic,
                      shape_buf);
        out += buf;
    }
    return out;
}

void write_beta_profile_csv(const ModelComparison& cmp, const std::string& path) {
    auto out = open_out(path);
    out << "beta,log_likelihood\n";
    for (const auto& p : cmp.beta_profile)
        out << format_double(p.shape) << "," << format_double(p.log_likelihood) << "\n";
}

void write_qq_csv(const std::vector<QqPoint>& points, const std::string& path) {
    auto out = open_out(path);
    out << "chi_square_quantile,observed_mahalanobis_sq\n";
    for (const auto& p : points)
        out << format_double(p.theoretical) << "," << format_double(p.observed) << "\n";
}

}  // namespace nngof
