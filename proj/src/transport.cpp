#include "kss/transport.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kss/error.hpp"
#include "kss/kernels.hpp"
#include "kss/operators.hpp"

namespace kss {

namespace k = kernels::omp;

namespace {

constexpr std::ptrdiff_t kParallelMin = 2048;

kernels::ConstFaces velocity_faces(const SimState& s, const ModelParams& params) {
    if (!params.fluid_enabled) return {};
    return kernels::faces(s.u);
}

void enforce_positivity(ScalarField& f, const char* name, std::size_t* clipped) {
    std::size_t count = 0;
    for (double& v : f.values()) {
        if (v >= 0.0) continue;
        if (v < -kNegativeTolerance || std::isnan(v))
            throw PositivityViolation(std::string(name) + " became negative (" +
                                      std::to_string(v) + "); step exceeded the stable range");
        v = 0.0;
        ++count;
    }
    if (clipped) *clipped += count;
}

void apply_flux_divergence(ScalarField& out, const ScalarField& base, const VectorField& flux,
                           double dt) {
    const ScalarField div = divergence(flux);
    auto o = out.values();
    auto b = base.values();
    auto dv = div.values();
    const auto count = static_cast<std::ptrdiff_t>(o.size());
#pragma omp parallel for schedule(static) if (count >= kParallelMin)
    for (std::ptrdiff_t i = 0; i < count; ++i) o[i] = b[i] - dt * dv[i];
}

}  // namespace

void StepControl::validate() const {
    if (!(dt_safety > 0.0 && dt_safety <= 1.0))
        throw InvalidParameter("dt_safety must lie in (0, 1]");
    if (!(dt_max > 0.0)) throw InvalidParameter("dt_max must be > 0");
    if (!(dt_min >= 0.0)) throw InvalidParameter("dt_min must be >= 0");
}

double cfl_dt_unchecked(const SimState& state, const ModelParams& params,
                        const StepControl& ctl) {
    const Grid& g = state.grid();
    const auto u = velocity_faces(state, params);
    double vmax = k::max_face_speed(g, state.n.values(), state.c.values(), u, params.law());
    if (params.fluid_enabled) vmax = std::max(vmax, state.u.max_abs());
    double diffusive = 0.0, advective = 0.0;
    for (int d = 0; d < g.dim(); ++d) {
        const double h = g.spacing(d);
        diffusive += 2.0 / (h * h);
        advective += 2.0 * vmax / h;
    }
    return ctl.dt_safety * std::min({1.0 / (diffusive + advective), ctl.dt_max, 1.0});
}

double cfl_dt(const SimState& state, const ModelParams& params, const StepControl& ctl) {
    const double dt = cfl_dt_unchecked(state, params, ctl);
    if (!(dt >= ctl.dt_min))
        throw DtCollapse("time step " + std::to_string(dt) + " fell below the floor " +
                             std::to_string(ctl.dt_min),
                         dt);
    return dt;
}

ScalarField step_n(const SimState& state, const ModelParams& params, double dt,
                   std::size_t* clipped) {
    const Grid& g = state.grid();
    VectorField flux(g, VectorBc::flux_zero);
    k::density_flux(g, state.n.values(), state.c.values(), velocity_faces(state, params),
                    params.law(), kernels::faces(flux));
    ScalarField out(g, state.n.bc());
    apply_flux_divergence(out, state.n, flux, dt);
    enforce_positivity(out, "n", clipped);
    return out;
}

ScalarField step_c(const SimState& state, const ModelParams& params, double dt,
                   std::size_t* clipped) {
    const Grid& g = state.grid();
    const ScalarField lap = laplacian(state.c);
    ScalarField out(g, state.c.bc());
    auto o = out.values();
    auto c = state.c.values();
    auto n = state.n.values();
    auto l = lap.values();
    const auto count = static_cast<std::ptrdiff_t>(o.size());
    if (params.fluid_enabled) {
        VectorField flux(g, VectorBc::flux_zero);
        k::advective_flux(g, c, kernels::faces(state.u), kernels::faces(flux));
        const ScalarField div = divergence(flux);
        auto dv = div.values();
#pragma omp parallel for schedule(static) if (count >= kParallelMin)
        for (std::ptrdiff_t i = 0; i < count; ++i)
            o[i] = c[i] + dt * (l[i] - c[i] + n[i] - dv[i]);
    } else {
#pragma omp parallel for schedule(static) if (count >= kParallelMin)
        for (std::ptrdiff_t i = 0; i < count; ++i) o[i] = c[i] + dt * (l[i] - c[i] + n[i]);
    }
    enforce_positivity(out, "c", clipped);
    return out;
}

AdvanceResult advance(const SimState& state, const ModelParams& params, const StepControl& ctl,
                      const PoissonSolveParams& psolve, std::optional<double> fixed_dt) {
    const char* stage = "cfl";
    try {
        double dt = 0.0;
        if (fixed_dt) {
            StepControl loose = ctl;
            loose.dt_safety = 1.0;
            const double bound = cfl_dt_unchecked(state, params, loose);
            if (!(*fixed_dt > 0.0) || *fixed_dt > bound)
                throw InvalidParameter("fixed dt " + std::to_string(*fixed_dt) +
                                       " exceeds the stability bound " + std::to_string(bound));
            dt = *fixed_dt;
        } else {
            dt = cfl_dt(state, params, ctl);
        }

        AdvanceResult out{state, {}};
        out.report.dt = dt;
        stage = "step_n";
        out.state.n = step_n(state, params, dt, &out.report.clipped_n);
        stage = "step_c";
        out.state.c = step_c(out.state, params, dt, &out.report.clipped_c);
        if (params.fluid_enabled) {
            stage = "stokes";
            auto st = stokes_step(out.state, params, dt, psolve);
            out.state.u = std::move(st.state.u);
            out.state.p = std::move(st.state.p);
            out.report.stokes = st.report;
        }
        out.state.t = state.t + dt;
        return out;
    } catch (Error& e) {
        if (e.stage.empty()) e.stage = stage;
        throw;
    }
}

}  // namespace kss
