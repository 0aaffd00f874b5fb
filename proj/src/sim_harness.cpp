#include "nngof/sim_harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "nngof/energy.hpp"
#include "nngof/errors.hpp"
#include "nngof/gof_test.hpp"
#include "nngof/mggd.hpp"
#include "nngof/rng.hpp"
#include "nngof/special_functions.hpp"
#include "nngof/thread_pool.hpp"

namespace nngof {

namespace {

constexpr const char* kArtifactVersion = "0.1.0";

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

const char* scatter_model_name(ScatterModel model) {
    switch (model) {
        case ScatterModel::kIdentity: return "A";
        case ScatterModel::kDiagOneToFive: return "B";
        case ScatterModel::kDiagOneToTwenty: return "C";
    }
    return "?";
}

Matrix scatter_model_matrix(ScatterModel model, Index m) {
    Matrix sigma = Matrix::Identity(m, m);
    double hi = 1.0;
    if (model == ScatterModel::kDiagOneToFive) hi = 5.0;
    if (model == ScatterModel::kDiagOneToTwenty) hi = 20.0;
    if (hi > 1.0) {
        for (Index k = 0; k < m; ++k) {
            const double t = m == 1 ? 0.0
                                    : static_cast<double>(k) / static_cast<double>(m - 1);
            sigma(k, k) = 1.0 + t * (hi - 1.0);
        }
    }
    return sigma;
}

std::string AlternativeSpec::tag() const {
    char buf[64];
    switch (kind) {
        case Kind::kNull:
            return "null";
        case Kind::kStudentT:
            std::snprintf(buf, sizeof(buf), "t(nu=%g)", nu);
            return buf;
        case Kind::kMggd:
            std::snprintf(buf, sizeof(buf), "mggd(beta=%g)", beta);
            return buf;
    }
    return "?";
}

std::uint64_t fnv1a_hash(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t trial_seed(std::uint64_t base_seed, const std::string& scenario_tag, int trial) {
    return derive_seed(derive_seed(base_seed, fnv1a_hash(scenario_tag)),
                       static_cast<std::uint64_t>(trial));
}

const RejectionRow* RejectionTable::find(const std::string& method, Index m,
                                         const std::string& scenario_substr) const {
    for (const auto& row : rows) {
        if (row.method == method && row.m == m &&
            row.scenario.find(scenario_substr) != std::string::npos)
            return &row;
    }
    return nullptr;
}

namespace {

struct CellSpec {
    Index n = 0;
    Index m = 0;
    ScatterModel model = ScatterModel::kIdentity;
    AlternativeSpec alternative;  // data generator
    double beta0 = 0.5;           // null shape under test
    bool pin_beta = false;        // fixed-shape null (sensitivity-style)
};

std::string cell_tag(const CellSpec& spec) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "m=%lld|model=%s|alt=%s|null=%s(beta0=%g)",
                  static_cast<long long>(spec.m), scatter_model_name(spec.model),
                  spec.alternative.tag().c_str(), spec.pin_beta ? "fixed" : "composite",
                  spec.beta0);
    return buf;
}

struct TrialOutcome {
    bool ok = false;
    bool nn_reject = false;
    bool energy_reject = false;
    double nn_pvalue = 1.0;
    double energy_pvalue = 1.0;
};

// One Monte Carlo cell: n_mc trials in parallel, two rows out (NN + energy).
void run_cell(const ExperimentConfig& cfg, const CellSpec& spec, RejectionTable& table) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string tag = cell_tag(spec);

    // Factorize the scatter model once; trials share it read-only.
    const SpdMatrix sigma_cell(scatter_model_matrix(spec.model, spec.m));

    std::vector<TrialOutcome> slots(static_cast<std::size_t>(cfg.n_mc));
    parallel_for(static_cast<std::size_t>(cfg.n_mc), cfg.threads, [&](std::size_t trial) {
        const std::uint64_t key = trial_seed(cfg.seed, tag, static_cast<int>(trial));
        RngStream gen(derive_seed(key, 1));

        Vector mu(spec.m);
        for (Index k = 0; k < spec.m; ++k) mu(k) = gen.next_uniform(-1.0, 1.0);

        Sample data;
        switch (spec.alternative.kind) {
            case AlternativeSpec::Kind::kNull:
                data = sample_mggd(MggdParams(mu, sigma_cell, ShapeParam(spec.beta0)), spec.n,
                                   gen);
                break;
            case AlternativeSpec::Kind::kStudentT:
                data = sample_multivariate_t(mu, sigma_cell, spec.alternative.nu, spec.n, gen);
                break;
            case AlternativeSpec::Kind::kMggd:
                data = sample_mggd(
                    MggdParams(mu, sigma_cell, ShapeParam(spec.alternative.beta)), spec.n, gen);
                break;
        }

        TestConfig test_cfg;
        test_cfg.alpha = cfg.alpha;
        test_cfg.bootstrap_B = cfg.bootstrap_B;
        test_cfg.tyler.rho = cfg.rho;
        test_cfg.seed = derive_seed(key, 2);
        test_cfg.threads = 1;  // trial-level parallelism only
        if (spec.pin_beta) test_cfg.fixed_beta = spec.beta0;

        TrialOutcome& slot = slots[trial];
        try {
            const JointGofResult joint = run_joint_gof(data, test_cfg);
            slot.ok = true;
            slot.nn_reject = joint.nn.reject;
            slot.energy_reject = joint.energy.reject;
            slot.nn_pvalue = joint.nn.p_value;
            slot.energy_pvalue = joint.energy.p_value;
        } catch (const std::exception&) {
            slot.ok = false;
        }
    });

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    for (const std::string method : {"nn", "energy"}) {
        RejectionRow row;
        row.method = method;
        row.m = spec.m;
        row.scenario = tag;
        row.elapsed_seconds = elapsed;
        int rejected = 0;
        for (const auto& slot : slots) {
            if (!slot.ok) {
                ++row.failed_trials;
                continue;
            }
            ++row.n_trials;
            const bool rej = method == std::string("nn") ? slot.nn_reject : slot.energy_reject;
            if (rej) ++rejected;
            row.pvalues.push_back(method == std::string("nn") ? slot.nn_pvalue
                                                              : slot.energy_pvalue);
        }
        if (row.n_trials == 0) throw ConvergenceError("run_cell: every trial failed: " + tag);
        const double p_hat = static_cast<double>(rejected) / static_cast<double>(row.n_trials);
        row.rejection_pct = 100.0 * p_hat;
        row.mc_se_pct =
            100.0 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(row.n_trials));
        table.rows.push_back(std::move(row));
    }
}

}  // namespace

RejectionTable run_size_experiment(const ExperimentConfig& cfg) {
    RejectionTable table;
    for (const Index m : cfg.m_list) {
        CellSpec spec;
        spec.n = cfg.n;
        spec.m = m;
        spec.model = cfg.scatter_models.empty() ? ScatterModel::kIdentity
                                                : cfg.scatter_models.front();
        spec.alternative.kind = AlternativeSpec::Kind::kNull;
        spec.beta0 = cfg.beta0;
        run_cell(cfg, spec, table);
    }
    return table;
}

RejectionTable run_power_experiment(const ExperimentConfig& cfg) {
    RejectionTable table;
    for (const Index m : cfg.m_list) {
        CellSpec spec;
        spec.n = cfg.n;
        spec.m = m;
        spec.model = cfg.scatter_models.empty() ? ScatterModel::kIdentity
                                                : cfg.scatter_models.front();
        spec.alternative = cfg.alternative;
        if (spec.alternative.kind == AlternativeSpec::Kind::kNull)
            spec.alternative.kind = AlternativeSpec::Kind::kStudentT;
        spec.beta0 = cfg.beta0;
        run_cell(cfg, spec, table);
    }
    return table;
}

RejectionTable run_sensitivity(const ExperimentConfig& cfg,
                               const std::vector<double>& beta_grid) {
    if (beta_grid.empty()) throw std::invalid_argument("run_sensitivity: empty beta grid");
    RejectionTable table;
    for (const Index m : cfg.m_list) {
        for (const double beta : beta_grid) {
            CellSpec spec;
            spec.n = cfg.n;
            spec.m = m;
            spec.model = cfg.scatter_models.empty() ? ScatterModel::kIdentity
                                                    : cfg.scatter_models.front();
            spec.alternative.kind = AlternativeSpec::Kind::kMggd;
            spec.alternative.beta = beta;
            spec.beta0 = cfg.beta0;
            spec.pin_beta = true;  // fixed-shape null; the composite family
                                   // would absorb every grid point
            run_cell(cfg, spec, table);
        }
    }
    return table;
}

RejectionTable run_scale_robustness(const ExperimentConfig& cfg) {
    std::vector<ScatterModel> models = cfg.scatter_models;
    if (models.size() < 2) {
        models = {ScatterModel::kIdentity, ScatterModel::kDiagOneToFive,
                  ScatterModel::kDiagOneToTwenty};
    }
    RejectionTable table;
    for (const ScatterModel model : models) {
        for (const Index m : cfg.m_list) {
            CellSpec size_spec;
            size_spec.n = cfg.n;
            size_spec.m = m;
            size_spec.model = model;
            size_spec.alternative.kind = AlternativeSpec::Kind::kNull;
            size_spec.beta0 = cfg.beta0;
            run_cell(cfg, size_spec, table);

            CellSpec power_spec = size_spec;
            power_spec.alternative.kind = AlternativeSpec::Kind::kStudentT;
            power_spec.alternative.nu = cfg.alternative.nu;
            run_cell(cfg, power_spec, table);
        }
    }
    return table;
}

double emit_pvalue_ecdf(const std::vector<double>& pvalues, const std::string& path) {
    if (pvalues.empty()) throw std::invalid_argument("emit_pvalue_ecdf: no p-values");
    std::vector<double> sorted = pvalues;
    std::sort(sorted.begin(), sorted.end());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("emit_pvalue_ecdf: cannot open " + path);
    out << "p,ecdf\n";
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        out << format_double(sorted[i]) << ","
            << format_double(static_cast<double>(i + 1) / n) << "\n";
    }
    return ks_uniform_statistic(sorted);
}

void write_rejection_table_csv(const RejectionTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("write_rejection_table_csv: cannot open " + path);
    out << "method,m,rejection_pct,mc_se,scenario,n_trials,failed_trials\n";
    for (const auto& row : table.rows) {
        out << row.method << "," << row.m << "," << format_double(row.rejection_pct) << ","
            << format_double(row.mc_se_pct) << ",\"" << row.scenario << "\"," << row.n_trials
            << "," << row.failed_trials << "\n";
    }
}

std::string format_rejection_table(const RejectionTable& table) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-8s %5s  %-44s %10s %8s %8s\n", "method", "m", "scenario",
                  "reject_%", "mc_se", "trials");
    out += buf;
    for (const auto& row : table.rows) {
        std::snprintf(buf, sizeof(buf), "%-8s %5lld  %-44s %10.2f %8.2f %8d\n",
                      row.method.c_str(), static_cast<long long>(row.m), row.scenario.c_str(),
                      row.rejection_pct, row.mc_se_pct, row.n_trials);
        out += buf;
    }
    return out;
}

namespace {

std::string scenario_slug(const std::string& scenario) {
    std::string slug;
    for (const char c : scenario) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '.') {
            slug += c;
        } else if (!slug.empty() && slug.back() != '_') {
            slug += '_';
        }
    }
    if (!slug.empty() && slug.back() == '_') slug.pop_back();
    return slug;
}

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
    ExperimentConfig cfg;
    cfg.experiment = j.value("experiment", cfg.experiment);
    cfg.n = j.value("n", cfg.n);
    if (j.contains("m_list")) {
        cfg.m_list.clear();
        for (const auto& v : j.at("m_list")) cfg.m_list.push_back(v.get<Index>());
    }
    cfg.beta0 = j.value("beta0", cfg.beta0);
    if (j.contains("alternative")) {
        const auto& alt = j.at("alternative");
        const std::string type = alt.value("type", "null");
        if (type == "null") {
            cfg.alternative.kind = AlternativeSpec::Kind::kNull;
        } else if (type == "t") {
            cfg.alternative.kind = AlternativeSpec::Kind::kStudentT;
            cfg.alternative.nu = alt.value("nu", 3.0);
        } else if (type == "mggd") {
            cfg.alternative.kind = AlternativeSpec::Kind::kMggd;
            cfg.alternative.beta = alt.value("beta", 0.5);
        } else {
            throw DataError("config: unknown alternative type '" + type + "'");
        }
    }
    if (j.contains("beta_grid")) {
        cfg.beta_grid.clear();
        for (const auto& v : j.at("beta_grid")) cfg.beta_grid.push_back(v.get<double>());
    }
    if (j.contains("scatter_models")) {
        cfg.scatter_models.clear();
        for (const auto& v : j.at("scatter_models")) {
            const std::string name = v.get<std::string>();
            if (name == "A") cfg.scatter_models.push_back(ScatterModel::kIdentity);
            else if (name == "B") cfg.scatter_models.push_back(ScatterModel::kDiagOneToFive);
            else if (name == "C") cfg.scatter_models.push_back(ScatterModel::kDiagOneToTwenty);
            else throw DataError("config: unknown scatter model '" + name + "'");
        }
    }
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.bootstrap_B = j.value("bootstrap_B", cfg.bootstrap_B);
    cfg.n_mc = j.value("n_mc", cfg.n_mc);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.threads = j.value("threads", cfg.threads);
    if (j.contains("rho") && !j.at("rho").is_null()) cfg.rho = j.at("rho").get<double>();
    return cfg;
}

}  // namespace

SimulationOutputs run_simulation_config(const std::string& config_path,
                                        const std::string& out_dir,
                                        std::optional<unsigned> threads_override,
                                        std::optional<std::uint64_t> seed_override) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw DataError("simulate: cannot open config " + config_path);
    const std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("simulate: config parse error: ") + e.what());
    }

    ExperimentConfig cfg = parse_experiment_config(j);
    if (threads_override) cfg.threads = *threads_override;
    if (seed_override) cfg.seed = *seed_override;

    RejectionTable table;
    if (cfg.experiment == "size") {
        table = run_size_experiment(cfg);
    } else if (cfg.experiment == "power") {
        table = run_power_experiment(cfg);
    } else if (cfg.experiment == "sensitivity") {
        if (cfg.beta_grid.empty()) throw DataError("simulate: sensitivity needs beta_grid");
        table = run_sensitivity(cfg, cfg.beta_grid);
    } else if (cfg.experiment == "robustness") {
        table = run_scale_robustness(cfg);
    } else {
        throw DataError("simulate: unknown experiment '" + cfg.experiment + "'");
    }

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    SimulationOutputs outputs;
    outputs.table = table;

    const std::string table_path =
        (fs::path(out_dir) / (cfg.experiment + "_table.csv")).string();
    write_rejection_table_csv(table, table_path);
    outputs.files_written.push_back(table_path);

    nlohmann::json ecdf_ks = nlohmann::json::object();
    for (const auto& row : table.rows) {
        const std::string name =
            "ecdf_" + row.method + "_" + scenario_slug(row.scenario) + ".csv";
        const std::string path = (fs::path(out_dir) / name).string();
        const double ks = emit_pvalue_ecdf(row.pvalues, path);
        outputs.files_written.push_back(path);
        ecdf_ks[name] = ks;
    }

    nlohmann::json manifest;
    manifest["artifact_version"] = kArtifactVersion;
    manifest["config_hash"] = fnv1a_hash(raw);
    manifest["config"] = j;
    manifest["seed"] = cfg.seed;
    manifest["experiment"] = cfg.experiment;
    manifest["ecdf_uniform_ks"] = ecdf_ks;
    {
        nlohmann::json files = nlohmann::json::array();
        for (const auto& f : outputs.files_written)
            files.push_back(fs::path(f).filename().string());
        manifest["outputs"] = files;
    }
    const std::string manifest_path = (fs::path(out_dir) / "manifest.json").string();
    std::ofstream mout(manifest_path, std::ios::binary);
    mout << manifest.dump(2) << "\n";
    outputs.files_written.push_back(manifest_path);

    return outputs;
}

}  // namespace nngof
