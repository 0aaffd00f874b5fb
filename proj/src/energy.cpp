#include "nngof/energy.hpp"

#include <cmath>

#include "nngof/errors.hpp"

namespace nngof {

namespace {

double mean_cross_distance(const Matrix& a, const Matrix& b) {
    double sum = 0.0;
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < b.rows(); ++j)
            sum += (a.row(i) - b.row(j)).norm();
    return sum / (static_cast<double>(a.rows()) * static_cast<double>(b.rows()));
}

double mean_within_distance(const Matrix& a) {
    double sum = 0.0;
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = i + 1; j < a.rows(); ++j)
            sum += (a.row(i) - a.row(j)).norm();
    const double n = static_cast<double>(a.rows());
    return 2.0 * sum / (n * n);
}

}  // namespace

double energy_distance(const Sample& z, const Sample& y) {
    if (z.m() != y.m()) throw DimensionError("energy_distance: dimension mismatch");
    const double na = static_cast<double>(z.n());
    const double nb = static_cast<double>(y.n());
    const double e = 2.0 * mean_cross_distance(z.data, y.data) -
                     mean_within_distance(z.data) - mean_within_distance(y.data);
    return (na * nb / (na + nb)) * e;
}

double energy_pvalue(double e_obs, const std::vector<double>& boot_stats) {
    if (boot_stats.empty()) throw std::invalid_argument("energy_pvalue: no replicates");
    std::size_t count = 0;
    for (const double e : boot_stats)
        if (e >= e_obs) ++count;
    return static_cast<double>(count) / static_cast<double>(boot_stats.size());
}

namespace {

const detail::CloudStatistic kEnergyStat = [](const Sample& z, const Sample& y) {
    return energy_distance(z, y);
};

const detail::CloudStatistic kNnStat = [](const Sample& z, const Sample& y) {
    return static_cast<double>(cross_edge_statistic(z, y).t_count);
};

EnergyStatResult energy_from_outcome(const detail::BootstrapOutcome& outcome,
                                     std::size_t stat_index, double alpha) {
    EnergyStatResult res;
    res.e_stat = outcome.observed[stat_index];
    res.boot_stats = outcome.boot_stats[stat_index];
    res.p_value = energy_pvalue(res.e_stat, res.boot_stats);
    res.reject = res.p_value < alpha;
    res.failed_replicates = outcome.failed_replicates;
    return res;
}

}  // namespace

EnergyStatResult run_energy_gof(const Sample& x, const TestConfig& cfg) {
    const detail::BootstrapOutcome outcome = detail::run_fitted_bootstrap(x, cfg, {kEnergyStat});
    return energy_from_outcome(outcome, 0, cfg.alpha);
}

JointGofResult run_joint_gof(const Sample& x, const TestConfig& cfg) {
    detail::BootstrapOutcome outcome =
        detail::run_fitted_bootstrap(x, cfg, {kNnStat, kEnergyStat});

    JointGofResult joint;
    joint.nn.n = x.n();
    joint.nn.m = x.m();
    joint.nn.alpha = cfg.alpha;
    joint.nn.t_obs = static_cast<Index>(outcome.observed[0]);
    joint.nn.z_obs = nn_result_from_count(joint.nn.t_obs, joint.nn.n).z_score;
    for (const double t : outcome.boot_stats[0])
        joint.nn.boot_stats.push_back(static_cast<Index>(t));
    joint.nn.p_value = bootstrap_pvalue(joint.nn.t_obs, joint.nn.boot_stats, joint.nn.n);
    joint.nn.reject = joint.nn.p_value < cfg.alpha;
    joint.nn.fitted_beta = outcome.fitted.params.beta.value();
    joint.nn.fit_diagnostics = outcome.fitted.diagnostics;
    joint.nn.failed_replicates = outcome.failed_replicates;

    joint.energy = energy_from_outcome(outcome, 1, cfg.alpha);
    joint.nn.fitted = std::move(outcome.fitted);
    return joint;
}

}  // namespace nngof
