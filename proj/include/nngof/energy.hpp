#pragma once

#include "nngof/gof_test.hpp"
#include "nngof/sample.hpp"

namespace nngof {

struct EnergyStatResult {
    double e_stat = 0.0;
    double p_value = 1.0;
    bool reject = false;
    std::vector<double> boot_stats;
    int failed_replicates = 0;
};

// Two-sample energy statistic
//   (nA nB / (nA + nB)) * (2 mean||z - y|| - mean||z - z'|| - mean||y - y'||)
// with V-statistic means (diagonals included), so identical point sets give
// exactly zero.
double energy_distance(const Sample& z, const Sample& y);

// Upper-tail p-value for a nonnegative discrepancy statistic: the fraction of
// bootstrap values >= the observed one.
double energy_pvalue(double e_obs, const std::vector<double>& boot_stats);

// Energy goodness-of-fit competitor on the identical refitted-bootstrap
// scaffold as run_test; only the cloud statistic differs, so harness
// comparisons isolate the statistic itself.
EnergyStatResult run_energy_gof(const Sample& x, const TestConfig& cfg);

// One joint pass for the simulation harness: both statistics evaluated on the
// same fit and the same bootstrap replicates.
struct JointGofResult {
    GofReport nn;
    EnergyStatResult energy;
};
JointGofResult run_joint_gof(const Sample& x, const TestConfig& cfg);

}  // namespace nngof
