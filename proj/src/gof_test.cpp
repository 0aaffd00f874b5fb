#include "nngof/gof_test.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "nngof/errors.hpp"
#include "nngof/thread_pool.hpp"

namespace nngof {

double bootstrap_pvalue(double t_obs, const std::vector<double>& boot_stats, Index n,
                        bool plus_one) {
    if (boot_stats.empty()) throw std::invalid_argument("bootstrap_pvalue: no replicates");
    const double center = static_cast<double>(n) / 2.0;
    const double obs_dev = std::fabs(t_obs - center);
    std::size_t count = 0;
    for (const double t : boot_stats) {
        if (std::fabs(t - center) >= obs_dev) ++count;
    }
    if (plus_one)
        return static_cast<double>(count + 1) / static_cast<double>(boot_stats.size() + 1);
    return static_cast<double>(count) / static_cast<double>(boot_stats.size());
}

double bootstrap_pvalue(Index t_obs, const std::vector<Index>& boot_stats, Index n,
                        bool plus_one) {
    std::vector<double> as_double(boot_stats.begin(), boot_stats.end());
    return bootstrap_pvalue(static_cast<double>(t_obs), as_double, n, plus_one);
}

namespace detail {

namespace {

FittedNull fit_or_oracle(const Sample& x, const TestConfig& cfg) {
    if (cfg.oracle_params) {
        const MggdParams& p = *cfg.oracle_params;
        if (p.dim() != x.m()) throw DimensionError("run_test: oracle parameter dimension");
        return FittedNull{p, WhiteningMap(p.mu, *p.sigma), FitDiagnostics{}};
    }
    FitConfig fit_cfg;
    fit_cfg.tyler = cfg.tyler;
    fit_cfg.fixed_beta = cfg.fixed_beta;
    return fit_mggd(x, fit_cfg);
}

}  // namespace

BootstrapOutcome run_fitted_bootstrap(const Sample& x, const TestConfig& cfg,
                                      const std::vector<CloudStatistic>& statistics) {
    if (x.n() < 10) throw DimensionError("run_fitted_bootstrap: need n >= 10");
    if (cfg.bootstrap_B < 1) throw std::invalid_argument("run_fitted_bootstrap: B >= 1");
    // Half-open above: alpha = 1 is accepted so always-reject sweeps work.
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0))
        throw std::invalid_argument("run_fitted_bootstrap: alpha outside (0,1]");
    if (statistics.empty())
        throw std::invalid_argument("run_fitted_bootstrap: no statistics requested");

    const Index n = x.n();
    const Index m = x.m();
    const bool refit = cfg.refit_in_bootstrap && !cfg.oracle_params;
    const RngStream root(cfg.seed);

    BootstrapOutcome out{fit_or_oracle(x, cfg), {}, {}, 0};

    const Sample z = whiten(out.fitted.whitening, x);
    RngStream ref_stream = root.substream(0);
    const Sample y =
        sample_standard_mggd(m, out.fitted.params.beta, n, ref_stream);

    out.observed.reserve(statistics.size());
    for (const auto& stat : statistics) out.observed.push_back(stat(z, y));

    const std::size_t n_stats = statistics.size();
    const std::size_t B = static_cast<std::size_t>(cfg.bootstrap_B);
    std::vector<std::vector<double>> slots(B);
    std::vector<char> ok(B, 0);

    auto one_replicate = [&](RngStream stream) {
        const Sample x_star = sample_mggd(out.fitted.params, n, stream);
        std::optional<FittedNull> refitted;
        if (refit) {
            FitConfig fc;
            fc.tyler = cfg.tyler;
            fc.fixed_beta = cfg.fixed_beta;
            refitted = fit_mggd(x_star, fc);
        }
        const FittedNull& active = refitted ? *refitted : out.fitted;
        const Sample z_star = whiten(active.whitening, x_star);
        const Sample y_star = sample_standard_mggd(m, active.params.beta, n, stream);
        std::vector<double> values(n_stats);
        for (std::size_t k = 0; k < n_stats; ++k) values[k] = statistics[k](z_star, y_star);
        return values;
    };

    parallel_for(B, cfg.threads, [&](std::size_t b) {
        try {
            slots[b] = one_replicate(root.substream(static_cast<std::uint64_t>(b) + 1));
            ok[b] = 1;
            return;
        } catch (const std::exception&) {
            // One retry on a fresh stream; a second failure marks the
            // replicate as failed.
        }
        try {
            slots[b] = one_replicate(
                root.substream(static_cast<std::uint64_t>(B) + 1 + static_cast<std::uint64_t>(b)));
            ok[b] = 1;
        } catch (const std::exception&) {
            ok[b] = 0;
        }
    });

    out.boot_stats.assign(n_stats, {});
    for (auto& v : out.boot_stats) v.reserve(B);
    for (std::size_t b = 0; b < B; ++b) {
        if (!ok[b]) {
            ++out.failed_replicates;
            continue;
        }
        for (std::size_t k = 0; k < n_stats; ++k) out.boot_stats[k].push_back(slots[b][k]);
    }

    if (out.failed_replicates > 0 &&
        static_cast<double>(out.failed_replicates) > 0.05 * static_cast<double>(B)) {
        throw ConvergenceError("bootstrap: " + std::to_string(out.failed_replicates) + " of " +
                               std::to_string(B) + " replicates failed to fit");
    }
    return out;
}

}  // namespace detail

GofReport run_test(const Sample& x, const TestConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();

    const detail::CloudStatistic nn_stat = [](const Sample& z, const Sample& y) {
        return static_cast<double>(cross_edge_statistic(z, y).t_count);
    };
    detail::BootstrapOutcome outcome = detail::run_fitted_bootstrap(x, cfg, {nn_stat});

    GofReport report;
    report.n = x.n();
    report.m = x.m();
    report.alpha = cfg.alpha;
    report.t_obs = static_cast<Index>(outcome.observed[0]);
    report.z_obs = nn_result_from_count(report.t_obs, report.n).z_score;
    report.boot_stats.reserve(outcome.boot_stats[0].size());
    for (const double t : outcome.boot_stats[0])
        report.boot_stats.push_back(static_cast<Index>(t));
    report.p_value = bootstrap_pvalue(report.t_obs, report.boot_stats, report.n);
    report.reject = report.p_value < cfg.alpha;
    report.fitted_beta = outcome.fitted.params.beta.value();
    report.fit_diagnostics = outcome.fitted.diagnostics;
    report.failed_replicates = outcome.failed_replicates;
    report.fitted = std::move(outcome.fitted);
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace nngof
