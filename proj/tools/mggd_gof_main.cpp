// Command-line front end: goodness-of-fit testing, simulation experiments,
// model comparison and diagnostic plot data.
//
// Exit codes: 0 ok, 1 usage error, 2 data error, 3 numeric failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nngof/dataset.hpp"
#include "nngof/energy.hpp"
#include "nngof/errors.hpp"
#include "nngof/gof_test.hpp"
#include "nngof/model_compare.hpp"
#include "nngof/report.hpp"
#include "nngof/sim_harness.hpp"
#include "nngof/special_functions.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<std::string> parse_columns(const std::string& spec) {
    std::vector<std::string> cols;
    std::string cur;
    for (const char c : spec) {
        if (c == ',') {
            if (!cur.empty()) cols.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) cols.push_back(cur);
    return cols;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw nngof::DataError("cannot open output file " + path);
    out << content;
}

struct TestCommandArgs {
    std::string input;
    std::string columns;
    std::string null_family = "mggd";
    double alpha = 0.05;
    int bootstrap = 200;
    std::uint64_t seed = 1;
    std::optional<double> rho;
    unsigned threads = 0;
    std::string out_dir;
    bool with_energy = false;
};

int cmd_test(const TestCommandArgs& args) {
    const std::vector<std::string> columns = parse_columns(args.columns);
    const nngof::Dataset data = nngof::ingest_csv(args.input, columns);
    if (data.dropped_rows > 0)
        std::cerr << "note: dropped " << data.dropped_rows << " row(s) with missing values\n";

    nngof::TestConfig cfg;
    cfg.alpha = args.alpha;
    cfg.bootstrap_B = args.bootstrap;
    cfg.seed = args.seed;
    cfg.threads = args.threads;
    cfg.tyler.rho = args.rho;
    if (args.null_family == "gaussian") {
        cfg.fixed_beta = 1.0;
    } else if (args.null_family != "mggd") {
        throw CLI::ValidationError("--null must be 'mggd' or 'gaussian'");
    }

    nngof::ReportContext ctx;
    ctx.input_path = args.input;
    ctx.columns = data.column_names;
    ctx.null_family = args.null_family;
    ctx.seed = args.seed;

    nngof::GofReport report;
    std::optional<nngof::EnergyStatResult> energy;
    if (args.with_energy) {
        const nngof::JointGofResult joint = nngof::run_joint_gof(data.as_sample(), cfg);
        report = joint.nn;
        energy = joint.energy;
    } else {
        report = nngof::run_test(data.as_sample(), cfg);
    }

    if (report.fit_diagnostics.scatter_condition.condition > 1e8)
        std::cerr << "warning: fitted scatter is poorly conditioned (condition "
                  << report.fit_diagnostics.scatter_condition.condition << ")\n";

    std::string text = nngof::render_gof_report_text(report, ctx);
    if (energy) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "Energy competitor\n  statistic          : %.6g\n  p-value            : %.6g\n",
                      energy->e_stat, energy->p_value);
        text += buf;
    }
    std::cout << text;
    std::cerr << "elapsed: " << report.elapsed_seconds << " s\n";

    if (!args.out_dir.empty()) {
        fs::create_directories(args.out_dir);
        nlohmann::json j = nngof::gof_report_to_json(report, ctx);
        if (energy) {
            j["energy"] = {{"e_stat", energy->e_stat}, {"p_value", energy->p_value}};
        }
        write_text_file((fs::path(args.out_dir) / "report.json").string(), j.dump(2) + "\n");
        write_text_file((fs::path(args.out_dir) / "report.txt").string(), text);
        nngof::write_bootstrap_csv(report,
                                   (fs::path(args.out_dir) / "nn_bootstrap.csv").string());
    }
    return 0;
}

int cmd_compare_models(const std::string& input, const std::string& columns_spec,
                       const std::string& out_dir) {
    const nngof::Dataset data = nngof::ingest_csv(input, parse_columns(columns_spec));
    const nngof::ModelComparison cmp = nngof::model_comparison(data);
    std::cout << nngof::render_model_comparison_text(cmp);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_text_file((fs::path(out_dir) / "model_comparison.json").string(),
                        nngof::model_comparison_to_json(cmp).dump(2) + "\n");
        nngof::write_beta_profile_csv(cmp, (fs::path(out_dir) / "beta_profile.csv").string());
    }
    return 0;
}

int cmd_qq(const std::string& input, const std::string& columns_spec,
           const std::string& out_dir) {
    const nngof::Dataset data = nngof::ingest_csv(input, parse_columns(columns_spec));
    const auto points = nngof::mahalanobis_qq(data);
    fs::create_directories(out_dir);
    const std::string path = (fs::path(out_dir) / "qq.csv").string();
    nngof::write_qq_csv(points, path);
    std::cout << "wrote " << path << " (" << points.size() << " points)\n";
    return 0;
}

int cmd_ecdf(const std::string& input, const std::string& column,
             const std::string& out_dir) {
    const nngof::Dataset data = nngof::ingest_csv(
        input, column.empty() ? std::vector<std::string>{} : std::vector<std::string>{column});
    std::vector<double> pvalues(data.values.col(0).data(),
                                data.values.col(0).data() + data.n());
    fs::create_directories(out_dir);
    const std::string path = (fs::path(out_dir) / "ecdf.csv").string();
    const double ks = nngof::emit_pvalue_ecdf(pvalues, path);
    std::cout << "wrote " << path << "\n";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "kolmogorov distance to uniform: %.6g\n", ks);
    std::cout << buf;
    return 0;
}

int cmd_simulate(const std::string& config, const std::string& out_dir,
                 std::optional<unsigned> threads, std::optional<std::uint64_t> seed) {
    const nngof::SimulationOutputs outputs =
        nngof::run_simulation_config(config, out_dir, threads, seed);
    std::cout << nngof::format_rejection_table(outputs.table);
    double elapsed = 0.0;
    for (const auto& row : outputs.table.rows) elapsed += row.elapsed_seconds;
    std::cerr << "elapsed: " << 0.5 * elapsed << " s\n";  // rows share cell timings
    for (const auto& f : outputs.files_written) std::cout << "wrote " << f << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nearest-neighbour goodness-of-fit testing for generalized Gaussian models"};
    app.require_subcommand(1);

    TestCommandArgs test_args;
    double rho_value = -1.0;
    auto* test = app.add_subcommand("test", "Run the NN goodness-of-fit test on a CSV dataset");
    test->add_option("--input", test_args.input, "CSV file with header row")->required();
    test->add_option("--columns", test_args.columns, "Comma-separated column names (default all)");
    test->add_option("--null", test_args.null_family, "Null family: mggd | gaussian")
        ->default_str("mggd");
    test->add_option("--alpha", test_args.alpha, "Test level")
        ->check(CLI::Range(1e-12, 1.0));
    test->add_option("--bootstrap", test_args.bootstrap, "Bootstrap replicates B")
        ->check(CLI::PositiveNumber);
    test->add_option("--seed", test_args.seed, "RNG seed");
    test->add_option("--rho", rho_value, "Tyler regularization weight in (0,1)")
        ->check(CLI::Range(1e-12, 0.9999));
    test->add_option("--threads", test_args.threads, "Worker threads (0 = hardware)");
    test->add_option("--out", test_args.out_dir, "Output directory for report files");
    test->add_flag("--with-energy", test_args.with_energy,
                   "Also run the energy-distance competitor on the same replicates");

    std::string cm_input, cm_columns, cm_out;
    auto* compare = app.add_subcommand("compare-models",
                                       "Gaussian / t / generalized-Gaussian AIC-BIC comparison");
    compare->add_option("--input", cm_input, "CSV file")->required();
    compare->add_option("--columns", cm_columns, "Comma-separated column names");
    compare->add_option("--out", cm_out, "Output directory");

    std::string qq_input, qq_columns, qq_out = ".";
    auto* qq = app.add_subcommand("qq", "Mahalanobis distance QQ data vs chi-square");
    qq->add_option("--input", qq_input, "CSV file")->required();
    qq->add_option("--columns", qq_columns, "Comma-separated column names");
    qq->add_option("--out", qq_out, "Output directory");

    std::string ecdf_input, ecdf_column, ecdf_out = ".";
    auto* ecdf = app.add_subcommand("ecdf", "Empirical CDF of a p-value column");
    ecdf->add_option("--input", ecdf_input, "CSV file of p-values")->required();
    ecdf->add_option("--column", ecdf_column, "Column name (default: first column)");
    ecdf->add_option("--out", ecdf_out, "Output directory");

    std::string sim_config, sim_out = "sim_out";
    unsigned sim_threads = 0;
    bool sim_threads_set = false;
    std::uint64_t sim_seed = 0;
    bool sim_seed_set = false;
    auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo experiment from a config file");
    sim->add_option("--config", sim_config, "JSON experiment config")->required();
    sim->add_option("--out", sim_out, "Output directory");
    sim->add_option("--threads", sim_threads, "Override worker threads")
        ->each([&](const std::string&) { sim_threads_set = true; });
    sim->add_option("--seed", sim_seed, "Override base seed")
        ->each([&](const std::string&) { sim_seed_set = true; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (test->parsed()) {
            if (rho_value > 0.0) test_args.rho = rho_value;
            return cmd_test(test_args);
        }
        if (compare->parsed()) return cmd_compare_models(cm_input, cm_columns, cm_out);
        if (qq->parsed()) return cmd_qq(qq_input, qq_columns, qq_out);
        if (ecdf->parsed()) return cmd_ecdf(ecdf_input, ecdf_column, ecdf_out);
        if (sim->parsed()) {
            return cmd_simulate(sim_config, sim_out,
                                sim_threads_set ? std::optional<unsigned>(sim_threads)
                                                : std::nullopt,
                                sim_seed_set ? std::optional<std::uint64_t>(sim_seed)
                                             : std::nullopt);
        }
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const nngof::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
