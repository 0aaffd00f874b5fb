#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nngof/sample.hpp"

namespace nngof {

enum class ScatterModel { kIdentity, kDiagOneToFive, kDiagOneToTwenty };

const char* scatter_model_name(ScatterModel model);  // "A" / "B" / "C"

// Diagonal scatter for a model: A = I, B = diag linearly spaced 1..5,
// C = diag linearly spaced 1..20.
Matrix scatter_model_matrix(ScatterModel model, Index m);

struct AlternativeSpec {
    enum class Kind { kNull, kStudentT, kMggd };
    Kind kind = Kind::kNull;
    double nu = 3.0;    // kStudentT degrees of freedom
    double beta = 0.5;  // kMggd data shape

    std::string tag() const;
};

struct ExperimentConfig {
    std::string experiment = "size";  // size | power | sensitivity | robustness
    Index n = 50;
    std::vector<Index> m_list = {20, 50};
    double beta0 = 0.5;
    AlternativeSpec alternative;
    std::vector<double> beta_grid;  // sensitivity only
    std::vector<ScatterModel> scatter_models = {ScatterModel::kIdentity};
    double alpha = 0.05;
    int bootstrap_B = 100;
    int n_mc = 200;
    std::uint64_t seed = 1;
    unsigned threads = 0;  // 0 = hardware width
    std::optional<double> rho;
};

struct RejectionRow {
    std::string method;    // "nn" or "energy"
    Index m = 0;
    std::string scenario;  // canonical scenario tag
    double rejection_pct = 0.0;
    double mc_se_pct = 0.0;
    int n_trials = 0;
    int failed_trials = 0;
    std::vector<double> pvalues;   // per successful trial, trial order
    double elapsed_seconds = 0.0;  // display only; never written to files
};

struct RejectionTable {
    std::vector<RejectionRow> rows;

    const RejectionRow* find(const std::string& method, Index m,
                             const std::string& scenario_substr) const;
};

// Empirical size under the composite null: data drawn from
// MGGD(mu, Sigma_model, beta0) with mu uniform on [-1,1]^m per trial.
RejectionTable run_size_experiment(const ExperimentConfig& cfg);

// Empirical power against the heavy-tailed elliptical alternative
// (multivariate t with cfg.alternative.nu degrees of freedom).
RejectionTable run_power_experiment(const ExperimentConfig& cfg);

// Shape sensitivity: data from MGGD(beta) over the grid, tested against the
// fixed-shape null beta0 (the composite family would absorb every grid
// point). Scenario tags carry the data beta.
RejectionTable run_sensitivity(const ExperimentConfig& cfg, const std::vector<double>& beta_grid);

// Size and t-power under scatter models A/B/C.
RejectionTable run_scale_robustness(const ExperimentConfig& cfg);

// Sorted (p, ecdf) pairs as CSV; returns the Kolmogorov distance of the
// p-values to the uniform reference.
double emit_pvalue_ecdf(const std::vector<double>& pvalues, const std::string& path);

// Deterministic per-trial seed: base seed x scenario tag x trial index.
std::uint64_t trial_seed(std::uint64_t base_seed, const std::string& scenario_tag,
                         int trial);

// CSV serialization of a rejection table (deterministic byte output).
void write_rejection_table_csv(const RejectionTable& table, const std::string& path);
std::string format_rejection_table(const RejectionTable& table);

// FNV-1a hash of a byte string, used for config fingerprints and tags.
std::uint64_t fnv1a_hash(const std::string& bytes);

struct SimulationOutputs {
    RejectionTable table;
    std::vector<std::string> files_written;
};

// Load an experiment config from a JSON file, run the named experiment, and
// write the table CSV, per-scenario p-value ECDF CSVs and a run manifest to
// out_dir. Every output file depends only on (config, seed).
SimulationOutputs run_simulation_config(const std::string& config_path,
                                        const std::string& out_dir,
                                        std::optional<unsigned> threads_override = {},
                                        std::optional<std::uint64_t> seed_override = {});

}  // namespace nngof
