// Command-line front end: run, sweep, lemma-check, diag.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kss/config.hpp"
#include "kss/diagnostics.hpp"
#include "kss/driver.hpp"
#include "kss/error.hpp"

namespace {

int cmd_run(const std::string& path, const std::string& out_dir, const std::string& snaps,
            bool quiet) {
    kss::RunConfig cfg = kss::load_run_config(path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (!snaps.empty()) cfg.snapshot_times = kss::parse_number_list("--snapshot-at", snaps);
    cfg.validate();
    kss::RunOptions opts;
    opts.quiet = quiet;
    const kss::RunSummary s = kss::run_simulation(cfg, opts);
    if (!quiet) {
        std::cout << "status " << kss::to_string(s.status) << ", verdict "
                  << kss::to_string(s.verdict.verdict) << ", steps " << s.steps << ", t "
                  << s.end_time << ", peak linf_n " << s.verdict.peak_linf_n << '\n';
        if (!s.error.empty()) std::cout << "  " << s.error_stage << ": " << s.error << '\n';
        std::cout << "outputs in " << cfg.output_dir.string() << '\n';
    }
    return kss::exit_code(s.status);
}

int cmd_sweep(const std::string& path, const std::string& out_dir, bool quiet) {
    kss::SweepSpec spec = kss::load_sweep_spec(path);
    if (!out_dir.empty()) spec.base.output_dir = out_dir;
    const auto rows = kss::run_sweep(spec, true);
    if (!quiet) kss::write_sweep_csv(std::cout, rows);
    return 0;
}

int cmd_lemma(int cases, std::uint64_t seed, const std::string& out_dir, bool quiet) {
    const kss::CampaignReport rep = kss::run_lemma_campaign(cases, seed);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream out(std::filesystem::path(out_dir) / "lemma_campaign.jsonl");
        kss::write_campaign_jsonl(out, rep);
    } else if (!quiet) {
        kss::write_campaign_jsonl(std::cout, rep);
    }
    std::cerr << "cases " << rep.cases << ", violations " << rep.violations << ", rejected "
              << rep.rejected << '\n';
    return rep.violations == 0 ? 0 : 1;
}

int cmd_diag(const std::string& csv, const std::string& tau_text, double p) {
    std::ifstream in(csv);
    if (!in) throw kss::ConfigError("", "cannot open " + csv);
    const auto series = kss::read_csv_series(in, "grad_np2_sq_" + kss::format_exponent(p));
    if (series.empty()) throw kss::InsufficientData("CSV has no samples");
    const double T = series.back().t;
    const double tau = tau_text == "auto" ? kss::compute_tau(T) : std::stod(tau_text);
    const double I = kss::sliding_I(series, tau, T);
    std::cout << std::setprecision(17) << "T " << T << "\ntau " << tau << "\nI " << I << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Keller-Segel-Stokes simulator with saturated sensitivity"};
    app.require_subcommand(1);
    std::string out_dir;
    bool quiet = false;
    app.add_option("--output-dir", out_dir, "Directory for CSV, JSON and snapshots");
    app.add_flag("--quiet", quiet, "Suppress progress output");

    std::string config_path, snaps;
    auto* run = app.add_subcommand("run", "Run one simulation from a config file");
    run->add_option("config", config_path, "Config file")->required();
    run->add_option("--snapshot-at", snaps, "Comma-separated snapshot times");
    run->add_option("--output-dir", out_dir, "Output directory");
    run->add_flag("--quiet", quiet, "Suppress progress output");

    std::string spec_path;
    auto* sweep = app.add_subcommand("sweep", "Run an alpha sweep from a sweep spec");
    sweep->add_option("spec", spec_path, "Sweep spec file")->required();
    sweep->add_option("--output-dir", out_dir, "Output directory");
    sweep->add_flag("--quiet", quiet, "Suppress progress output");

    int cases = 100;
    std::uint64_t seed = 1;
    auto* lemma = app.add_subcommand("lemma-check", "Randomized check of the ODE comparison bound");
    lemma->add_option("--cases", cases, "Number of random cases")->check(CLI::PositiveNumber);
    lemma->add_option("--seed", seed, "Random seed");
    lemma->add_option("--output-dir", out_dir, "Write lemma_campaign.jsonl here");
    lemma->add_flag("--quiet", quiet, "Suppress per-case output");

    std::string csv_path, tau_text = "auto";
    double p = 2.0;
    auto* diag = app.add_subcommand("diag", "Post-hoc I(T) from a diagnostics CSV");
    diag->add_option("csv", csv_path, "diagnostics.csv")->required();
    diag->add_option("--tau", tau_text, "Window length or 'auto'");
    diag->add_option("--p", p, "Exponent column to integrate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kss::kExitConfigError;
    }

    try {
        if (*run) return cmd_run(config_path, out_dir, snaps, quiet);
        if (*sweep) return cmd_sweep(spec_path, out_dir, quiet);
        if (*lemma) return cmd_lemma(cases, seed, out_dir, quiet);
        if (*diag) return cmd_diag(csv_path, tau_text, p);
    } catch (const kss::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kss::kExitConfigError;
    } catch (const kss::InvalidParameter& e) {
        std::cerr << "invalid parameter: " << e.what() << '\n';
        return kss::kExitConfigError;
    } catch (const kss::SolverFailure& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
