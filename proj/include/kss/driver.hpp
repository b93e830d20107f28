#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kss/config.hpp"
#include "kss/diagnostics.hpp"
#include "kss/odelemma.hpp"
#include "kss/state.hpp"
#include "kss/transport.hpp"

namespace kss {

enum class RunStatus { completed, growth_triggered, dt_collapsed, solver_failure };

std::string to_string(RunStatus s);
int exit_code(RunStatus s);

inline constexpr int kExitConfigError = 64;

struct RunSummary {
    RunStatus status = RunStatus::completed;
    BlowupVerdict verdict;
    double end_time = 0.0;
    long steps = 0;
    double wall_time_s = 0.0;
    double tau = 0.0;
    double mass_n0 = 0.0;
    double mass_c0 = 0.0;
    double peak_linf_u = 0.0;
    double peak_div_u = 0.0;
    double min_n = 0.0;
    double min_c = 0.0;
    std::size_t clipped = 0;
    std::size_t cell_steps = 0;
    /// Observed I(T) per diagnostic exponent; absent when the run is too short.
    std::map<double, std::optional<double>> observed_I;
    std::string error;
    std::string error_stage;
    std::vector<DiagnosticsRecord> records;
};

struct RunOptions {
    bool write_outputs = true;
    bool quiet = true;
    /// Called after every accepted step with the previous and new state.
    std::function<void(const SimState& before, const SimState& after, const StepReport&)> on_step;
};

/// Steps cfg from t = 0 to t_end or until an abort. With write_outputs the
/// output directory receives diagnostics.csv (flushed per row), summary.json
/// and snapshot files snapshot_<i>_{n,c,p,u}.kss at the requested times.
RunSummary run_simulation(const RunConfig& cfg, const RunOptions& opts = {});

std::string summary_json(const RunSummary& s, const RunConfig& cfg);

struct SweepRow {
    double alpha = 0.0;
    std::uint64_t seed = 0;
    double mass_scale = 1.0;
    RunStatus status = RunStatus::completed;
    Verdict verdict = Verdict::bounded_on_horizon;
    double peak_linf_n = 0.0;
    std::optional<double> t_trigger;
    std::optional<double> I_observed;
    std::string error;
    /// Full summary of the run; default-constructed when it threw.
    RunSummary summary;
};

/// One run per (alpha, seed) plus the extra (alpha, mass_scale) entries, run
/// concurrently in isolated output directories. Writes sweep.csv when
/// `write_outputs` is set. A failing run is recorded in its row.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, bool write_outputs = true);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct CampaignEntry {
    ode::LemmaCase lemma_case;
    std::string verdict;  // "ok", "violation" or "rejected"
    std::optional<ode::LemmaReport> report;
    std::string message;
};

struct CampaignReport {
    int cases = 0;
    int violations = 0;
    int rejected = 0;
    std::vector<CampaignEntry> entries;
};

inline constexpr int kLemmaSteps = 4000;

CampaignReport run_lemma_cases(const std::vector<ode::LemmaCase>& cases,
                               int n_steps = kLemmaSteps);
/// n_cases random admissible problems from `seed`, checked by verify_lemma1.
CampaignReport run_lemma_campaign(int n_cases, std::uint64_t seed, int n_steps = kLemmaSteps);

/// One JSON object per case: parameters, slack values and verdict.
void write_campaign_jsonl(std::ostream& out, const CampaignReport& report);

}  // namespace kss
