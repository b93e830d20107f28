#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kss/field.hpp"
#include "kss/model.hpp"
#include "kss/state.hpp"

namespace kss {

struct DiagnosticsConfig {
    std::vector<double> p_list{2.0, 4.0, 6.0};
    double tau = 1.0;
    int sample_every = 10;
    double blowup_growth_factor = 100.0;
    double blowup_dt_floor = 1e-9;
    /// Exponent for the per-sample testing-identity residual; 0 disables it.
    double identity_p = 2.0;

    void validate() const;
};

struct DiagnosticsRecord {
    double t = 0.0;
    double mass_n = 0.0;
    double mass_c = 0.0;
    double linf_n = 0.0;
    std::vector<double> lp_n;          // per p_list entry
    std::vector<double> grad_np2_sq;   // per p_list entry
    std::vector<double> lp_grad_c;     // per p_list entry
    double linf_u = 0.0;
    double l2_u = 0.0;
    double div_u_max = 0.0;
    double dt_used = 0.0;
    std::optional<double> identity_residual;
    int poisson_iterations = 0;
};

/// Integral of |grad(n^(p/2))|^2 from face differences times cell volume.
/// Throws InvalidParameter for p <= 1.
double grad_np2_sq(const ScalarField& n, double p);

struct SeriesSample {
    double t;
    double value;
};

/// Largest trapezoidal integral of `series` over [t, t + tau] for window
/// starts t on the sample grid within [tau, T - tau]. A window end that falls
/// between samples is linearly interpolated. Throws InsufficientData when
/// the series does not reach T or no window start exists.
double sliding_I(const std::vector<SeriesSample>& series, double tau, double T);

/// min{1, t_horizon / 4}; the run horizon stands in for the maximal
/// existence time.
double compute_tau(double t_horizon);

/// Relative mismatch of the discrete L^p testing identity
///   d/dt int n^p + p(p-1) int n^(p-2) |grad n|^2 = p(p-1) int n^(p-1) S(n) grad n . grad c
/// across one step, spatial terms at the midpoint state. The mismatch is
/// divided by the sum of the three term magnitudes.
double testing_identity_residual(const SimState& before, const SimState& after,
                                 const ModelParams& params, double p, double dt);

/// ||c||_p + || |grad c| ||_p.
double w1p_proxy_c(const ScalarField& c, double p);

/// Samples every monitored functional from `state`.
DiagnosticsRecord measure(const SimState& state, const DiagnosticsConfig& cfg, double dt_used);

enum class Verdict { bounded_on_horizon, growth_triggered, dt_collapsed, incomplete };

std::string to_string(Verdict v);

struct BlowupVerdict {
    Verdict verdict = Verdict::bounded_on_horizon;
    std::optional<double> trigger_time;
    double peak_linf_n = 0.0;
};

/// How a run ended, as seen by the verdict logic.
struct RunEnd {
    double end_time = 0.0;
    bool dt_collapsed = false;
    double final_dt = 0.0;
};

/// growth_triggered at the first sample whose linf_n exceeds
/// blowup_growth_factor times the first sample's; otherwise dt_collapsed when
/// the run stopped on a step below blowup_dt_floor; otherwise
/// bounded_on_horizon if the horizon was reached, else incomplete.
BlowupVerdict blowup_verdict(const std::vector<DiagnosticsRecord>& records,
                             const DiagnosticsConfig& cfg, double horizon, const RunEnd& end);

/// Column names: t, mass_n, mass_c, linf_n, lp_n_<p>..., grad_np2_sq_<p>...,
/// lp_grad_c_<p>..., linf_u, l2_u, div_u_max, dt_used, identity_residual,
/// poisson_iterations.
std::vector<std::string> csv_columns(const DiagnosticsConfig& cfg);
void write_csv_header(std::ostream& out, const DiagnosticsConfig& cfg);
void write_csv_row(std::ostream& out, const DiagnosticsRecord& r);

/// Formats an exponent for a column suffix ("2", "2.5").
std::string format_exponent(double p);

/// Reads (t, column) pairs back from a diagnostics CSV.
std::vector<SeriesSample> read_csv_series(std::istream& in, const std::string& column);

}  // namespace kss
