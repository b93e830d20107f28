// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "kss/config.hpp"
#include "kss/diagnostics.hpp"
#include "kss/driver.hpp"
#include "kss/odelemma.hpp"
#include "kss/operators.hpp"
#include "kss/stokes.hpp"
#include "kss/transport.hpp"

using namespace kss;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigDir = KSS_CONFIG_DIR;
constexpr double kPi = std::numbers::pi;

struct Check {
    bool ok;
    std::string detail;
};

// Sub-checks per criterion; printed as one line each once everything ran.
std::map<int, std::pair<std::string, std::vector<Check>>> results;

void report(int id, bool ok, const std::string& name, const std::string& detail) {
    auto& entry = results[id];
    if (entry.first.empty()) entry.first = name;
    entry.second.push_back({ok, detail});
}

template <class... T>
std::string fmt(const T&... parts) {
    std::ostringstream s;
    s.precision(4);
    (s << ... << parts);
    return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Per-run bookkeeping shared by the conservation, incompressibility and
// positivity criteria.
struct Ledger {
    double worst_c_excess = -std::numeric_limits<double>::infinity();  // relative to the allowance
    double worst_div = 0.0;
    double min_n = std::numeric_limits<double>::infinity();
    double min_c = std::numeric_limits<double>::infinity();
    std::size_t clipped = 0;
    std::size_t cell_steps = 0;
    int runs = 0;

    void add(const RunSummary& s) {
        const double cap = std::max(s.mass_n0, s.mass_c0);
        const double allowance = 1e-10 * std::max(cap, 1.0);
        for (const auto& r : s.records) worst_c_excess = std::max(worst_c_excess, r.mass_c - cap - allowance);
        worst_div = std::max(worst_div, s.peak_div_u);
        min_n = std::min(min_n, s.min_n);
        min_c = std::min(min_c, s.min_c);
        clipped += s.clipped;
        cell_steps += s.cell_steps;
        ++runs;
    }
};

Ledger ledger;

// Aggregation preset: mass identity over the first 1000 steps and the exact
// signal-mass recursion on every step.
void aggregation_preset() {
    auto cfg = load_run_config(kConfigDir / "aggregation.cfg");
    long step = 0;
    double mass_n0 = 0.0, worst_mass = 0.0, worst_rec = 0.0, worst_div = 0.0;
    RunOptions opts{false, true, [&](const SimState& before, const SimState& after, const StepReport& rep) {
        if (step == 0) mass_n0 = integrate(before.n);
        ++step;
        if (step <= 1000)
            worst_mass = std::max(worst_mass, std::abs(integrate(after.n) - mass_n0) / mass_n0);
        const double expect = (1.0 - rep.dt) * integrate(before.c) + rep.dt * integrate(after.n);
        const double got = integrate(after.c);
        worst_rec = std::max(worst_rec, std::abs(got - expect) / std::abs(got));
        if (rep.stokes) worst_div = std::max(worst_div, rep.stokes->div_max_after);
    }};
    const auto s = run_simulation(cfg, opts);
    ledger.add(s);
    report(1, step >= 1000 && worst_mass <= 1e-11, "mass identity",
           fmt("max relative drift ", worst_mass, " over the first 1000 of ", step,
               " steps (64x64, fluid on)"));
    report(2, worst_rec <= 1e-12, "signal-mass bound",
           fmt("recursion mismatch ", worst_rec, " over ", step, " steps"));
    report(3, worst_div <= 1e-6, "incompressibility",
           fmt("aggregation preset max |div u| ", worst_div));
}

void other_presets() {
    for (const char* name : {"fluid_off.cfg", "forced_fluid.cfg"}) {
        auto cfg = load_run_config(kConfigDir / name);
        double worst_div = 0.0;
        RunOptions opts{false, true, [&](const SimState&, const SimState&, const StepReport& rep) {
            if (rep.stokes) worst_div = std::max(worst_div, rep.stokes->div_max_after);
        }};
        const auto s = run_simulation(cfg, opts);
        ledger.add(s);
        report(3, worst_div <= 1e-6 && s.status == RunStatus::completed, "incompressibility",
               fmt(name, " max |div u| ", worst_div, " (", to_string(s.status), ")"));
    }
}

void projection_idempotence() {
    double worst = 0.0, worst_div = 0.0;
    for (int k = 0; k < 50; ++k) {
        Grid g = k % 2 ? Grid::square(32, 1.0 + 0.05 * k) : Grid(3, {10, 12, 8}, {1.0, 1.2, 0.8});
        const auto v = test::random_vector(g, 5000 + k);
        const auto once = project_divergence_free(v, {});
        const auto twice = project_divergence_free(once.velocity, {});
        worst = std::max(worst, test::max_abs_diff(once.velocity, twice.velocity));
        worst_div = std::max(worst_div, max_abs_divergence(once.velocity));
    }
    report(3, worst <= 1e-8, "incompressibility",
           fmt("projection idempotence ", worst, " on 50 random fields (max |div P v| ", worst_div, ")"));
}

void lemma_campaign() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = run_lemma_campaign(100, 20240601);
    const double elapsed = seconds_since(t0);
    auto prob = [](double a, double gamma, double tau, double y0, double b) {
        ode::OdeBoundProblem p;
        p.a = a;
        p.gamma = gamma;
        p.tau = tau;
        p.y_start = y0;
        p.b = b;
        p.T = 4.0 * tau;
        return p;
    };
    const auto e1 = ode::lemma1_bound(prob(1, 2, 1, 0, 1));
    const auto e2 = ode::lemma1_bound(prob(1, 2, 1, 1e6, 1));
    const auto e3 = ode::lemma1_bound(prob(4, 3, 0.5, 0, 2));
    const bool exact = e1.c_const == 1.0 && e1.y_bound == 2.0 && e1.g_window_bound == 3.0 &&
                       e2.c_const == 1e6 && e2.y_bound == 1e6 + 1 && e3.c_const == 0.5 &&
                       e3.y_bound == 2.5;
    double min_slack = std::numeric_limits<double>::infinity();
    for (const auto& e : rep.entries)
        if (e.report) min_slack = std::min({min_slack, e.report->slack_y, e.report->slack_g});
    report(5, rep.cases == 100 && rep.violations == 0 && rep.rejected == 0 && exact && elapsed < 10.0,
           "ODE lemma campaign",
           fmt(rep.cases, " cases, ", rep.violations, " violations, ", rep.rejected,
               " rejected, smallest slack ", min_slack, ", exact constants ",
               exact ? "yes" : "no", ", ", elapsed, " s"));
}

double order(double coarse, double fine) { return std::log2(coarse / fine); }

void operator_convergence() {
    const double L = 2.0;
    auto errors = [&](int cells) {
        Grid g = Grid::square(cells, L);
        auto s = ScalarField::sample(g, [&](double x, double y, double) {
            return std::cos(kPi * x / L) * std::cos(kPi * y / L);
        });
        const auto grad = gradient(s);
        double eg = 0.0;
        for (int d = 0; d < 2; ++d) {
            const auto shape = g.face_shape(d);
            for (int i = 0; i < shape[0]; ++i)
                for (int j = 0; j < shape[1]; ++j) {
                    const auto x = g.face_center(d, i, j, 0);
                    const double exact = d == 0
                        ? -kPi / L * std::sin(kPi * x[0] / L) * std::cos(kPi * x[1] / L)
                        : -kPi / L * std::cos(kPi * x[0] / L) * std::sin(kPi * x[1] / L);
                    eg = std::max(eg, std::abs(grad.at(d, i, j) - exact));
                }
        }
        const double lambda = 2.0 * (kPi / L) * (kPi / L);
        const auto lap = laplacian(s);
        double el = 0.0, ep = 0.0;
        const auto sol = solve_poisson_neumann(s, {1e-13, 0});
        for (std::size_t c = 0; c < s.size(); ++c) {
            el = std::max(el, std::abs(lap[c] + lambda * s[c]));
            ep = std::max(ep, std::abs(sol.phi[c] + s[c] / lambda));
        }
        return std::array<double, 3>{eg, el, ep};
    };
    const auto e16 = errors(16), e32 = errors(32), e64 = errors(64);
    const char* names[] = {"gradient", "laplacian", "poisson"};
    std::string detail;
    bool ok = true;
    for (int k = 0; k < 3; ++k) {
        const double o1 = order(e16[k], e32[k]), o2 = order(e32[k], e64[k]);
        ok = ok && o1 >= 1.8 && o2 >= 1.8;
        detail += fmt(k ? "; " : "", names[k], " orders ", o1, ", ", o2);
    }
    report(6, ok, "operator convergence 16/32/64", detail);
}

void identity_consistency() {
    auto residual = [](int cells) {
        Grid g = Grid::square(cells);
        SimState s(g);
        s.n = ScalarField::sample(g, [](double x, double y, double) {
            return 0.5 + std::exp(-((x - 0.5) * (x - 0.5) + (y - 0.45) * (y - 0.45)) / 0.04);
        });
        s.c = ScalarField::sample(g, [](double x, double y, double) {
            return 1.0 + 0.5 * std::cos(kPi * x) * std::cos(kPi * y);
        });
        ModelParams p;
        p.alpha = 0.6;
        p.fluid_enabled = false;
        const auto r = advance(s, p, {}, {});
        return testing_identity_residual(s, r.state, p, 2.0, r.report.dt);
    };
    const double r32 = residual(32), r64 = residual(64), r128 = residual(128);
    report(7, r64 < r32 && r128 < r64 && r128 <= 0.1, "testing identity refinement",
           fmt("residual ", r32, " (h=1/32), ", r64, " (h=1/64), ", r128, " (h=1/128)"));
}

double window_integral(const std::vector<SeriesSample>& s, double a, double b) {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
        const double lo = std::max(a, s[k].t), hi = std::min(b, s[k + 1].t);
        if (hi <= lo) continue;
        auto at = [&](double t) {
            return s[k].value + (t - s[k].t) / (s[k + 1].t - s[k].t) * (s[k + 1].value - s[k].value);
        };
        total += 0.5 * (at(lo) + at(hi)) * (hi - lo);
    }
    return total;
}

void sliding_window() {
    int mismatches = 0, non_monotone = 0, checks = 0;
    const double steps[] = {1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4};
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Rng rng(seed * 7919);
        std::vector<SeriesSample> s{{0.0, rng.integer(0, 256) / 8.0}};
        while (s.back().t < 16.0)
            s.push_back({s.back().t + steps[rng.integer(0, 3)], rng.integer(0, 256) / 8.0});
        const double tau = rng.integer(2, 8) / 4.0;
        double prev = -1.0;
        for (double T = 2.0 * tau + 0.5; T <= 16.0; T += 0.25) {
            double brute = -std::numeric_limits<double>::infinity();
            for (const auto& x : s)
                if (x.t >= tau && x.t <= T - tau) brute = std::max(brute, window_integral(s, x.t, x.t + tau));
            const double I = sliding_I(s, tau, T);
            ++checks;
            if (I != brute) ++mismatches;
            if (I < prev) ++non_monotone;
            prev = I;
        }
    }
    report(8, mismatches == 0 && non_monotone == 0, "sliding-window functional",
           fmt(checks, " (series, T) pairs over 50 series: ", mismatches, " mismatches, ",
               non_monotone, " monotonicity breaks"));
}

// Verdicts of the pilot sweep, in row order (alpha 0, 0.1, ..., 0.8, then the
// alpha 0 run at ten times the mass).
const std::vector<std::string> kPilotVerdicts = {
    "growth_triggered",   "growth_triggered",   "growth_triggered",   "growth_triggered",
    "bounded_on_horizon", "bounded_on_horizon", "bounded_on_horizon", "bounded_on_horizon",
    "bounded_on_horizon", "growth_triggered"};

void criticality_sweep() {
    auto spec = load_sweep_spec(kConfigDir / "alpha_sweep.cfg");
    spec.base.output_dir = fs::current_path() / "acceptance_out" / "alpha_sweep";
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = run_sweep(spec, true);
    const double elapsed = seconds_since(t0);
    for (const auto& r : rows) ledger.add(r.summary);

    std::printf("      alpha  mass_x  verdict             peak_linf_n   t_trigger\n");
    std::vector<std::string> got;
    bool bounded_06 = false, blowup_0x10 = false;
    double last_growth = -1.0, first_bounded = -1.0;
    for (const auto& r : rows) {
        got.push_back(to_string(r.verdict));
        std::printf("      %5.2f  %6.1f  %-18s  %11.4g  %s\n", r.alpha, r.mass_scale,
                    got.back().c_str(), r.peak_linf_n,
                    r.t_trigger ? fmt(*r.t_trigger).c_str() : "-");
        if (r.mass_scale == 1.0 && std::abs(r.alpha - 0.6) < 1e-12)
            bounded_06 = r.verdict == Verdict::bounded_on_horizon;
        if (r.mass_scale == 10.0 && r.alpha == 0.0)
            blowup_0x10 = r.verdict == Verdict::growth_triggered || r.verdict == Verdict::dt_collapsed;
        if (r.mass_scale == 1.0) {
            if (r.verdict == Verdict::bounded_on_horizon && first_bounded < 0.0) first_bounded = r.alpha;
            if (r.verdict != Verdict::bounded_on_horizon) last_growth = r.alpha;
        }
    }
    const bool pinned = got == kPilotVerdicts;
    report(9, bounded_06 && blowup_0x10 && pinned && elapsed <= 600.0, "criticality sweep",
           fmt("alpha 0.6 ", bounded_06 ? "bounded" : "NOT bounded", ", alpha 0 at 10x mass ",
               blowup_0x10 ? "blows up" : "does NOT blow up", ", pilot verdicts ",
               pinned ? "reproduced" : "CHANGED", ", transition between alpha ", last_growth,
               " and ", first_bounded, ", ", elapsed, " s; table in ",
               (spec.base.output_dir / "sweep.csv").string()));
}

void fluid_decoupling() {
    auto cfg = load_run_config(kConfigDir / "fluid_off.cfg");
    cfg.model.phi = PotentialKind::zero;
    cfg.model.gravity = {0.0, 0.0, 0.0};
    cfg.model.forcing = ForcingKind::zero;
    cfg.init.u0.kind = VelocityInit::Kind::zero;
    ModelParams on = cfg.model, off = cfg.model;
    on.fluid_enabled = true;
    off.fluid_enabled = false;
    SimState a = build_initial_state(cfg.init, on, cfg.grid, cfg.seed, cfg.poisson);
    SimState b = build_initial_state(cfg.init, off, cfg.grid, cfg.seed, cfg.poisson);
    int differing = 0, steps = 0;
    double max_u = 0.0;
    for (; steps < 500; ++steps) {
        a = advance(a, on, cfg.step, cfg.poisson).state;
        b = advance(b, off, cfg.step, cfg.poisson).state;
        if (!(a.n == b.n) || !(a.c == b.c) || a.t != b.t) ++differing;
        max_u = std::max(max_u, a.u.max_abs());
    }
    report(10, differing == 0, "fluid decoupling",
           fmt(steps, " steps on ", cfg.grid.cells(0), "x", cfg.grid.cells(1), ", ", differing,
               " differing n/c states, max |u| with fluid on ", max_u));
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    aggregation_preset();
    other_presets();
    projection_idempotence();
    lemma_campaign();
    operator_convergence();
    identity_consistency();
    sliding_window();
    criticality_sweep();
    fluid_decoupling();

    // Ledger-wide checks over every simulation run above.
    report(2, ledger.worst_c_excess <= 0.0, "signal-mass bound",
           fmt("largest excess over the allowance ", ledger.worst_c_excess, " across ",
               ledger.runs, " runs"));
    report(3, ledger.worst_div <= 1e-6, "incompressibility",
           fmt("every step of ", ledger.runs, " runs max |div u| ", ledger.worst_div));
    const double clip_share = ledger.cell_steps ? double(ledger.clipped) / double(ledger.cell_steps) : 0.0;
    report(4, ledger.min_n >= 0.0 && ledger.min_c >= 0.0 && clip_share < 1e-3, "positivity",
           fmt("min n ", ledger.min_n, ", min c ", ledger.min_c, ", clipped ", ledger.clipped,
               " of ", ledger.cell_steps, " cell-steps (", 100.0 * clip_share, "%) over ",
               ledger.runs, " runs"));
    int failures = 0;
    for (const auto& [id, entry] : results) {
        bool ok = true;
        std::string detail;
        for (const auto& c : entry.second) {
            ok = ok && c.ok;
            detail += (detail.empty() ? "" : "; ") + c.detail;
        }
        if (!ok) ++failures;
        std::printf("%s [%d] %s: %s\n", ok ? "PASS" : "FAIL", id, entry.first.c_str(), detail.c_str());
    }
    std::printf("%d of %zu criteria passed in %.1f s\n", static_cast<int>(results.size()) - failures,
                results.size(), seconds_since(t0));
    return failures ? 1 : 0;
}
