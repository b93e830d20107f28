#include "kss/driver.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kss/error.hpp"
#include "kss/operators.hpp"
#include "kss/snapshot.hpp"

namespace kss {

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::completed: return "completed";
        case RunStatus::growth_triggered: return "growth_triggered";
        case RunStatus::dt_collapsed: return "dt_collapsed";
        case RunStatus::solver_failure: return "solver_failure";
    }
    return "solver_failure";
}

int exit_code(RunStatus s) {
    switch (s) {
        case RunStatus::completed: return 0;
        case RunStatus::growth_triggered: return 2;
        case RunStatus::dt_collapsed: return 3;
        case RunStatus::solver_failure: return 4;
    }
    return 4;
}

namespace {

void write_snapshots(const std::filesystem::path& dir, int index, const SimState& s) {
    std::ostringstream stem;
    stem << "snapshot_" << std::setw(3) << std::setfill('0') << index << '_';
    const std::string base = (dir / stem.str()).string();
    write_snapshot(base + "n.kss", s.n, SnapshotKind::density, s.t);
    write_snapshot(base + "c.kss", s.c, SnapshotKind::signal, s.t);
    write_snapshot(base + "p.kss", s.p, SnapshotKind::pressure, s.t);
    write_snapshot(base + "u.kss", s.u, s.t);
}

}  // namespace

RunSummary run_simulation(const RunConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    const auto wall_start = std::chrono::steady_clock::now();
    RunSummary sum;
    sum.tau = compute_tau(cfg.t_end);

    std::ofstream csv;
    if (opts.write_outputs) {
        std::filesystem::create_directories(cfg.output_dir);
        csv.open(cfg.output_dir / "diagnostics.csv", std::ios::trunc);
        if (!csv) throw ConfigError("output.dir", "cannot write to " + cfg.output_dir.string());
        write_csv_header(csv, cfg.diag);
        csv.flush();
    }
    auto emit = [&](DiagnosticsRecord r) {
        if (opts.write_outputs) {
            write_csv_row(csv, r);
            csv.flush();
        }
        sum.records.push_back(std::move(r));
    };

    SimState state = build_initial_state(cfg.init, cfg.model, cfg.grid, cfg.seed, cfg.poisson);
    emit(measure(state, cfg.diag, 0.0));
    sum.mass_n0 = sum.records.front().mass_n;
    sum.mass_c0 = sum.records.front().mass_c;
    sum.min_n = state.n.min();
    sum.min_c = state.c.min();
    sum.peak_linf_u = state.u.max_abs();
    sum.peak_div_u = sum.records.front().div_u_max;
    const double linf0 = sum.records.front().linf_n;

    std::vector<double> snaps = cfg.snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    std::size_t next_snap = 0;
    int snap_index = 0;
    auto flush_snapshots = [&]() {
        while (next_snap < snaps.size() && snaps[next_snap] <= state.t * (1.0 + 1e-12) + 1e-15) {
            if (opts.write_outputs) write_snapshots(cfg.output_dir, snap_index, state);
            ++snap_index;
            ++next_snap;
        }
    };
    flush_snapshots();

    RunEnd end;
    const double t_close = cfg.t_end * 1e-12;
    while (cfg.t_end - state.t > t_close) {
        StepReport report;
        SimState next;
        try {
            double dt = cfl_dt(state, cfg.model, cfg.step);
            const double limit =
                next_snap < snaps.size() ? std::min(cfg.t_end, snaps[next_snap]) : cfg.t_end;
            dt = std::min(dt, limit - state.t);
            auto res = advance(state, cfg.model, cfg.step, cfg.poisson, dt);
            next = std::move(res.state);
            report = res.report;
        } catch (const DtCollapse& e) {
            sum.status = RunStatus::dt_collapsed;
            sum.error = e.what();
            sum.error_stage = e.stage.empty() ? "cfl" : e.stage;
            end.dt_collapsed = true;
            end.final_dt = e.dt;
            break;
        } catch (const SolverFailure& e) {
            sum.status = RunStatus::solver_failure;
            sum.error = e.what();
            sum.error_stage = e.stage;
            break;
        } catch (const PositivityViolation& e) {
            sum.status = RunStatus::solver_failure;
            sum.error = e.what();
            sum.error_stage = e.stage;
            break;
        }
        ++sum.steps;
        sum.clipped += report.clipped_n + report.clipped_c;
        sum.cell_steps += cfg.grid.cell_count();
        sum.min_n = std::min(sum.min_n, next.n.min());
        sum.min_c = std::min(sum.min_c, next.c.min());
        if (opts.on_step) opts.on_step(state, next, report);

        const bool grew = linf0 > 0.0 && next.n.max() > cfg.diag.blowup_growth_factor * linf0;
        const bool last = cfg.t_end - next.t <= t_close;
        if (grew || last || sum.steps % cfg.diag.sample_every == 0) {
            DiagnosticsRecord r = measure(next, cfg.diag, report.dt);
            if (cfg.diag.identity_p > 0.0)
                r.identity_residual =
                    testing_identity_residual(state, next, cfg.model, cfg.diag.identity_p, report.dt);
            if (report.stokes) r.poisson_iterations = report.stokes->poisson_iterations;
            sum.peak_linf_u = std::max(sum.peak_linf_u, r.linf_u);
            sum.peak_div_u = std::max(sum.peak_div_u, r.div_u_max);
            emit(std::move(r));
        }
        if (report.stokes) sum.peak_div_u = std::max(sum.peak_div_u, report.stokes->div_max_after);
        state = std::move(next);
        flush_snapshots();
        if (grew) {
            sum.status = RunStatus::growth_triggered;
            break;
        }
    }
    end.end_time = state.t;
    sum.end_time = state.t;
    sum.verdict = blowup_verdict(sum.records, cfg.diag, cfg.t_end, end);
    if (sum.status == RunStatus::completed && sum.verdict.verdict == Verdict::growth_triggered)
        sum.status = RunStatus::growth_triggered;

    std::vector<SeriesSample> series;
    for (std::size_t pi = 0; pi < cfg.diag.p_list.size(); ++pi) {
        series.clear();
        for (const auto& r : sum.records) series.push_back({r.t, r.grad_np2_sq[pi]});
        try {
            sum.observed_I[cfg.diag.p_list[pi]] = sliding_I(series, sum.tau, sum.end_time);
        } catch (const InsufficientData&) {
            sum.observed_I[cfg.diag.p_list[pi]] = std::nullopt;
        }
    }
    sum.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

    if (opts.write_outputs) {
        std::ofstream js(cfg.output_dir / "summary.json", std::ios::trunc);
        js << summary_json(sum, cfg) << '\n';
    }
    return sum;
}

std::string summary_json(const RunSummary& s, const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["status"] = to_string(s.status);
    j["exit_code"] = exit_code(s.status);
    j["verdict"] = to_string(s.verdict.verdict);
    j["trigger_time"] = s.verdict.trigger_time ? nlohmann::ordered_json(*s.verdict.trigger_time)
                                               : nlohmann::ordered_json(nullptr);
    j["peak_linf_n"] = s.verdict.peak_linf_n;
    j["peak_linf_u"] = s.peak_linf_u;
    j["peak_div_u"] = s.peak_div_u;
    j["end_time"] = s.end_time;
    j["t_end"] = cfg.t_end;
    j["steps"] = s.steps;
    j["wall_time_s"] = s.wall_time_s;
    j["mass_n0"] = s.mass_n0;
    j["mass_c0"] = s.mass_c0;
    if (!s.records.empty()) {
        const auto& last = s.records.back();
        j["mass_n_final"] = last.mass_n;
        j["mass_c_final"] = last.mass_c;
        j["mass_n_drift_rel"] =
            s.mass_n0 > 0.0 ? std::abs(last.mass_n - s.mass_n0) / s.mass_n0 : 0.0;
    }
    j["min_n"] = s.min_n;
    j["min_c"] = s.min_c;
    j["clipped_values"] = s.clipped;
    j["cell_steps"] = s.cell_steps;
    j["tau"] = s.tau;
    nlohmann::ordered_json I = nlohmann::ordered_json::object();
    for (const auto& [p, v] : s.observed_I)
        I[format_exponent(p)] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    j["I_observed"] = I;
    j["alpha"] = cfg.model.alpha;
    j["fluid_enabled"] = cfg.model.fluid_enabled;
    if (!s.error.empty()) {
        j["error"] = s.error;
        j["error_stage"] = s.error_stage;
    }
    return j.dump(2);
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, bool write_outputs) {
    spec.validate();
    struct Job {
        double alpha;
        std::uint64_t seed;
        double mass_scale;
    };
    std::vector<Job> jobs;
    for (double a : spec.alpha_values)
        for (auto s : spec.replicate_seeds) jobs.push_back({a, s, 1.0});
    for (const auto& e : spec.extra_runs)
        for (auto s : spec.replicate_seeds) jobs.push_back({e.alpha, s, e.mass_scale});

    std::vector<SweepRow> rows(jobs.size());
    const double I_p = std::find(spec.base.diag.p_list.begin(), spec.base.diag.p_list.end(), 2.0) !=
                               spec.base.diag.p_list.end()
                           ? 2.0
                           : spec.base.diag.p_list.front();
    const auto njobs = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < njobs; ++i) {
        const Job& job = jobs[i];
        SweepRow& row = rows[i];
        row.alpha = job.alpha;
        row.seed = job.seed;
        row.mass_scale = job.mass_scale;
        RunConfig cfg = spec.base;
        cfg.model.alpha = job.alpha;
        cfg.seed = job.seed;
        scale_initial_mass(cfg.init, job.mass_scale);
        std::ostringstream dir;
        dir << "alpha_" << job.alpha << "_seed_" << job.seed << "_mass_" << job.mass_scale;
        cfg.output_dir = spec.base.output_dir / dir.str();
        try {
            RunOptions opts;
            opts.write_outputs = write_outputs;
            row.summary = run_simulation(cfg, opts);
            const RunSummary& s = row.summary;
            row.status = s.status;
            row.verdict = s.verdict.verdict;
            row.peak_linf_n = s.verdict.peak_linf_n;
            row.t_trigger = s.verdict.trigger_time;
            row.I_observed = s.observed_I.at(I_p);
            row.error = s.error;
        } catch (const std::exception& e) {
            row.status = RunStatus::solver_failure;
            row.verdict = Verdict::incomplete;
            row.error = e.what();
        }
    }
    if (write_outputs) {
        std::filesystem::create_directories(spec.base.output_dir);
        std::ofstream out(spec.base.output_dir / "sweep.csv", std::ios::trunc);
        write_sweep_csv(out, rows);
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    auto shortest = [](double v) {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    };
    std::ostringstream s;
    s << std::setprecision(17);
    s << "alpha,seed,mass_scale,verdict,status,peak_linf_n,t_trigger,I_observed\n";
    for (const auto& r : rows) {
        s << shortest(r.alpha) << ',' << r.seed << ',' << shortest(r.mass_scale) << ',' << to_string(r.verdict) << ','
          << to_string(r.status) << ',' << r.peak_linf_n << ',';
        if (r.t_trigger) s << *r.t_trigger;
        s << ',';
        if (r.I_observed) s << *r.I_observed;
        s << '\n';
    }
    out << s.str();
}

CampaignReport run_lemma_cases(const std::vector<ode::LemmaCase>& cases, int n_steps) {
    CampaignReport rep;
    rep.cases = static_cast<int>(cases.size());
    for (const auto& c : cases) {
        CampaignEntry e{c, "ok", std::nullopt, {}};
        try {
            e.report = ode::verify_lemma1(c.problem, c.h, c.g, n_steps);
        } catch (const ode::MalformedCase& err) {
            e.verdict = "rejected";
            e.message = err.what();
            ++rep.rejected;
        } catch (const ode::LemmaViolation& err) {
            e.verdict = "violation";
            e.message = err.what();
            e.report = err.report;
            ++rep.violations;
        } catch (const InvalidParameter& err) {
            e.verdict = "rejected";
            e.message = err.what();
            ++rep.rejected;
        }
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

CampaignReport run_lemma_campaign(int n_cases, std::uint64_t seed, int n_steps) {
    if (n_cases < 1) throw InvalidParameter("n_cases must be >= 1");
    Rng rng(seed);
    std::vector<ode::LemmaCase> cases;
    for (int i = 0; i < n_cases; ++i) cases.push_back(ode::random_admissible_case(rng));
    return run_lemma_cases(cases, n_steps);
}

void write_campaign_jsonl(std::ostream& out, const CampaignReport& report) {
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        const auto& e = report.entries[i];
        const auto& p = e.lemma_case.problem;
        nlohmann::ordered_json j;
        j["case"] = i;
        j["a"] = p.a;
        j["b"] = p.b;
        j["gamma"] = p.gamma;
        j["tau"] = p.tau;
        j["t_star"] = p.t_star;
        j["T"] = p.T;
        j["y_start"] = p.y_start;
        j["g_kind"] = ode::to_string(e.lemma_case.g.kind);
        j["g_value"] = e.lemma_case.g.value;
        if (e.report) {
            j["C"] = e.report->bound.c_const;
            j["y_bound"] = e.report->bound.y_bound;
            j["g_window_bound"] = e.report->bound.g_window_bound;
            j["max_y"] = e.report->max_y;
            j["max_g_window"] = e.report->max_g_window;
            j["slack_y"] = e.report->slack_y;
            j["slack_g"] = e.report->slack_g;
            j["eps_int"] = e.report->eps_int;
        }
        j["verdict"] = e.verdict;
        if (!e.message.empty()) j["message"] = e.message;
        out << j.dump() << '\n';
    }
}

}  // namespace kss
