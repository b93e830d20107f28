#include "kss/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "kss/error.hpp"
#include "kss/operators.hpp"

namespace kss {

void DiagnosticsConfig::validate() const {
    if (!(tau > 0.0)) throw InvalidParameter("diagnostics tau must be > 0");
    if (sample_every < 1) throw InvalidParameter("sample_every must be >= 1");
    if (!(blowup_growth_factor > 1.0)) throw InvalidParameter("growth factor must be > 1");
    for (double p : p_list)
        if (!(p > 1.0)) throw InvalidParameter("diagnostic exponents must be > 1");
    if (identity_p != 0.0 && !(identity_p > 1.0))
        throw InvalidParameter("identity exponent must be > 1 (or 0 to disable)");
}

double grad_np2_sq(const ScalarField& n, double p) {
    if (!(p > 1.0)) throw InvalidParameter("grad_np2_sq requires p > 1");
    ScalarField w = n;
    w.set_bc(ScalarBc::neumann_zero);
    if (p != 2.0)
        for (double& v : w.values()) v = v > 0.0 ? std::pow(v, 0.5 * p) : 0.0;
    const VectorField g = gradient(w);
    return inner(g, g);
}

double compute_tau(double t_horizon) {
    if (!(t_horizon > 0.0)) throw InvalidParameter("horizon must be > 0");
    return std::min(1.0, 0.25 * t_horizon);
}

double sliding_I(const std::vector<SeriesSample>& series, double tau, double T) {
    if (!(tau > 0.0)) throw InvalidParameter("tau must be > 0");
    if (series.size() < 2 || series.back().t < T || series.front().t > tau)
        throw InsufficientData("series does not cover [tau, T]");
    const std::size_t n = series.size();
    std::vector<double> cum(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
        cum[i] = cum[i - 1] +
                 0.5 * (series[i].value + series[i - 1].value) * (series[i].t - series[i - 1].t);

    double best = -std::numeric_limits<double>::infinity();
    bool any = false;
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double start = series[i].t;
        if (start < tau) continue;
        if (start > T - tau) break;
        const double end = start + tau;
        j = std::max(j, i);
        while (j + 1 < n && series[j + 1].t <= end) ++j;
        double integral = cum[j] - cum[i];
        if (series[j].t < end) {
            const auto& a = series[j];
            const auto& b = series[j + 1];
            const double w = (end - a.t) / (b.t - a.t);
            const double v_end = a.value + w * (b.value - a.value);
            integral += 0.5 * (a.value + v_end) * (end - a.t);
        }
        best = std::max(best, integral);
        any = true;
    }
    if (!any) throw InsufficientData("no window start in [tau, T - tau]");
    return best;
}

double testing_identity_residual(const SimState& before, const SimState& after,
                                 const ModelParams& params, double p, double dt) {
    if (!(p > 1.0)) throw InvalidParameter("identity exponent must be > 1");
    if (!(dt > 0.0)) throw InvalidParameter("dt must be > 0");
    const Grid& g = before.grid();
    const double vol = g.cell_volume();
    const auto law = params.law();

    double d_int = 0.0;
    {
        auto nb = before.n.values();
        auto na = after.n.values();
        double sa = 0.0, sb = 0.0;
        for (std::size_t i = 0; i < nb.size(); ++i) {
            sa += std::pow(std::max(na[i], 0.0), p);
            sb += std::pow(std::max(nb[i], 0.0), p);
        }
        d_int = (sa - sb) * vol / dt;
    }

    ScalarField nm(g), cm(g);
    for (std::size_t i = 0; i < nm.size(); ++i) {
        nm[i] = 0.5 * (before.n[i] + after.n[i]);
        cm[i] = 0.5 * (before.c[i] + after.c[i]);
    }
    const VectorField gn = gradient(nm);
    const VectorField gc = gradient(cm);
    const VectorField nf = interpolate_to_faces(nm);

    constexpr double kFloor = 1e-12;
    double dissipation = 0.0, cross = 0.0;
    for (int d = 0; d < g.dim(); ++d) {
        auto a = gn.component(d);
        auto b = gc.component(d);
        auto m = nf.component(d);
        const int last = g.cells(d);
        const auto shape = g.face_shape(d);
        for (int i = 0; i < shape[0]; ++i)
            for (int j = 0; j < shape[1]; ++j)
                for (int k = 0; k < shape[2]; ++k) {
                    const int along = d == 0 ? i : d == 1 ? j : k;
                    if (along == 0 || along == last) continue;
                    const std::size_t f = g.face_index(d, i, j, k);
                    const double nface = std::max(m[f], 0.0);
                    const double w2 = p == 2.0 ? 1.0 : std::pow(std::max(nface, kFloor), p - 2.0);
                    dissipation += w2 * a[f] * a[f];
                    cross += std::pow(nface, p - 1.0) * law(nface) * a[f] * b[f];
                }
    }
    // Scaled by the sum of the three term magnitudes, so the value is 0 for an
    // exact balance and at most 1.
    const double diss = p * (p - 1.0) * dissipation * vol;
    const double rhs = p * (p - 1.0) * cross * vol;
    const double scale = std::abs(d_int) + std::abs(diss) + std::abs(rhs);
    if (scale == 0.0) return 0.0;
    return std::abs(d_int + diss - rhs) / scale;
}

double w1p_proxy_c(const ScalarField& c, double p) {
    if (!(p >= 1.0)) throw InvalidParameter("w1p_proxy_c requires p >= 1");
    return lp_norm(c, p) + lp_norm(gradient_magnitude(c), p);
}

DiagnosticsRecord measure(const SimState& state, const DiagnosticsConfig& cfg, double dt_used) {
    DiagnosticsRecord r;
    r.t = state.t;
    r.mass_n = integrate(state.n);
    r.mass_c = integrate(state.c);
    r.linf_n = lp_norm(state.n, kInfNorm);
    const ScalarField grad_c = gradient_magnitude(state.c);
    for (double p : cfg.p_list) {
        r.lp_n.push_back(lp_norm(state.n, p));
        r.grad_np2_sq.push_back(grad_np2_sq(state.n, p));
        r.lp_grad_c.push_back(lp_norm(grad_c, p));
    }
    r.linf_u = state.u.max_abs();
    r.l2_u = l2_norm(state.u);
    r.div_u_max = max_abs_divergence(state.u);
    r.dt_used = dt_used;
    return r;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::bounded_on_horizon: return "bounded_on_horizon";
        case Verdict::growth_triggered: return "growth_triggered";
        case Verdict::dt_collapsed: return "dt_collapsed";
        case Verdict::incomplete: return "incomplete";
    }
    return "incomplete";
}

BlowupVerdict blowup_verdict(const std::vector<DiagnosticsRecord>& records,
                             const DiagnosticsConfig& cfg, double horizon, const RunEnd& end) {
    if (records.empty()) throw InvalidParameter("blowup_verdict needs at least one record");
    BlowupVerdict out;
    for (const auto& r : records) out.peak_linf_n = std::max(out.peak_linf_n, r.linf_n);
    const double base = records.front().linf_n;
    if (base > 0.0) {
        for (const auto& r : records)
            if (r.linf_n > cfg.blowup_growth_factor * base) {
                out.verdict = Verdict::growth_triggered;
                out.trigger_time = r.t;
                return out;
            }
    }
    if (end.dt_collapsed && end.final_dt < cfg.blowup_dt_floor) {
        out.verdict = Verdict::dt_collapsed;
        out.trigger_time = end.end_time;
        return out;
    }
    out.verdict = end.end_time >= horizon * (1.0 - 1e-12) ? Verdict::bounded_on_horizon
                                                           : Verdict::incomplete;
    if (out.verdict == Verdict::incomplete) out.trigger_time = end.end_time;
    return out;
}

std::string format_exponent(double p) {
    std::ostringstream s;
    s << p;
    return s.str();
}

std::vector<std::string> csv_columns(const DiagnosticsConfig& cfg) {
    std::vector<std::string> cols{"t", "mass_n", "mass_c", "linf_n"};
    for (double p : cfg.p_list) cols.push_back("lp_n_" + format_exponent(p));
    for (double p : cfg.p_list) cols.push_back("grad_np2_sq_" + format_exponent(p));
    for (double p : cfg.p_list) cols.push_back("lp_grad_c_" + format_exponent(p));
    for (const char* c : {"linf_u", "l2_u", "div_u_max", "dt_used", "identity_residual",
                          "poisson_iterations"})
        cols.emplace_back(c);
    return cols;
}

void write_csv_header(std::ostream& out, const DiagnosticsConfig& cfg) {
    const auto cols = csv_columns(cfg);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
}

void write_csv_row(std::ostream& out, const DiagnosticsRecord& r) {
    std::ostringstream s;
    s << std::setprecision(17);
    s << r.t << ',' << r.mass_n << ',' << r.mass_c << ',' << r.linf_n;
    for (double v : r.lp_n) s << ',' << v;
    for (double v : r.grad_np2_sq) s << ',' << v;
    for (double v : r.lp_grad_c) s << ',' << v;
    s << ',' << r.linf_u << ',' << r.l2_u << ',' << r.div_u_max << ',' << r.dt_used << ',';
    if (r.identity_residual) s << *r.identity_residual;
    else s << "nan";
    s << ',' << r.poisson_iterations << '\n';
    out << s.str();
}

std::vector<SeriesSample> read_csv_series(std::istream& in, const std::string& column) {
    std::string line;
    if (!std::getline(in, line)) throw InsufficientData("empty diagnostics CSV");
    auto split = [](const std::string& l) {
        std::vector<std::string> out;
        std::stringstream ss(l);
        std::string cell;
        while (std::getline(ss, cell, ',')) out.push_back(cell);
        return out;
    };
    const auto header = split(line);
    const auto find = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw InvalidParameter("CSV has no column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t tcol = find("t");
    const std::size_t vcol = find(column);
    std::vector<SeriesSample> series;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() <= std::max(tcol, vcol)) throw InvalidParameter("short CSV row");
        series.push_back({std::stod(cells[tcol]), std::stod(cells[vcol])});
    }
    return series;
}

}  // namespace kss
