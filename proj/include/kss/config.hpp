#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "kss/diagnostics.hpp"
#include "kss/grid.hpp"
#include "kss/model.hpp"
#include "kss/stokes.hpp"
#include "kss/transport.hpp"

namespace kss {

struct RunConfig {
    ModelParams model;
    InitialData init;
    Grid grid;
    StepControl step;
    DiagnosticsConfig diag;
    PoissonSolveParams poisson;
    double t_end = 1.0;
    std::filesystem::path output_dir = "kss_out";
    std::vector<double> snapshot_times;
    std::uint64_t seed = 0;

    /// Checks cross-field invariants; throws ConfigError naming the key.
    void validate() const;
};

/// One extra sweep entry: alpha paired with a multiplier on the n0 mass.
struct SweepExtra {
    double alpha = 0.0;
    double mass_scale = 1.0;
};

struct SweepSpec {
    RunConfig base;
    std::vector<double> alpha_values;
    std::vector<std::uint64_t> replicate_seeds;
    std::vector<SweepExtra> extra_runs;

    void validate() const;
};

/// Flat `key = value` text, `#` starts a comment. Keys are listed in the
/// README; unknown keys and malformed values raise ConfigError.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(std::istream& in);

RunConfig parse_run_config(const KeyValues& kv);
RunConfig load_run_config(const std::filesystem::path& path);

/// Run-config keys plus sweep.alphas, sweep.seeds and sweep.extra
/// (`alpha:mass_scale` pairs separated by commas).
SweepSpec parse_sweep_spec(const KeyValues& kv);
SweepSpec load_sweep_spec(const std::filesystem::path& path);

/// Multiplies the initial density by `scale` (its target mass when one is set).
void scale_initial_mass(InitialData& init, double scale);

/// Parses "1,2.5,3" (whitespace tolerated).
std::vector<double> parse_number_list(const std::string& key, const std::string& text);

}  // namespace kss
