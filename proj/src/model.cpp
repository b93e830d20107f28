#include "kss/model.hpp"

#include <cmath>
#include <numbers>

#include "kss/error.hpp"
#include "kss/operators.hpp"
#include "kss/rng.hpp"
#include "kss/stokes.hpp"

namespace kss {

namespace {

bool finite3(const std::array<double, 3>& v) {
    return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

VectorField constant_faces(const Grid& grid, const std::array<double, 3>& value) {
    VectorField v(grid, VectorBc::flux_zero);
    for (int d = 0; d < grid.dim(); ++d)
        for (double& x : v.component(d)) x = value[d];
    return v;
}

}  // namespace

void ModelParams::validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidParameter("alpha must be >= 0");
    if (!(kappa_s > 0.0) || !std::isfinite(kappa_s)) throw InvalidParameter("kappa_s must be > 0");
    if (!finite3(gravity)) throw InvalidParameter("gravity must be finite");
    if (!finite3(forcing_amplitude) || !std::isfinite(forcing_omega))
        throw InvalidParameter("forcing amplitude must be finite");
    for (std::size_t i = 0; i < sensitivity_table.size(); ++i) {
        const auto [n, s] = sensitivity_table[i];
        if (!std::isfinite(n) || !std::isfinite(s))
            throw InvalidParameter("sensitivity table entries must be finite");
        if (i > 0 && !(n > sensitivity_table[i - 1].first))
            throw InvalidParameter("sensitivity table knots must increase");
    }
}

double sensitivity(double n_value, const ModelParams& params) {
    if (!(n_value >= 0.0))
        throw InvalidParameter("sensitivity evaluated at negative density");
    return params.law()(n_value);
}

VectorField eval_phi_gradient(const ModelParams& params, const Grid& grid) {
    if (params.phi == PotentialKind::zero) return VectorField(grid, VectorBc::flux_zero);
    return constant_faces(grid, params.gravity);
}

VectorField eval_forcing(const ModelParams& params, const Grid& grid, double t) {
    switch (params.forcing) {
        case ForcingKind::zero:
            return VectorField(grid, VectorBc::flux_zero);
        case ForcingKind::constant:
            return constant_faces(grid, params.forcing_amplitude);
        case ForcingKind::periodic: {
            const double s = std::sin(params.forcing_omega * t);
            auto a = params.forcing_amplitude;
            for (double& x : a) x *= s;
            return constant_faces(grid, a);
        }
    }
    return VectorField(grid, VectorBc::flux_zero);
}

ScalarField build_scalar(const ScalarInit& init, const Grid& grid, std::uint64_t seed) {
    ScalarField s(grid);
    if (init.kind == ScalarInit::Kind::constant) {
        if (!(init.value >= 0.0)) throw InvalidParameter("constant initial value must be >= 0");
        s = ScalarField(grid, ScalarBc::neumann_zero, init.value);
    } else {
        if (!(init.floor >= 0.0)) throw InvalidParameter("bump floor must be >= 0");
        for (const Bump& b : init.bumps) {
            if (!(b.amplitude >= 0.0)) throw InvalidParameter("bump amplitude must be >= 0");
            if (!(b.width > 0.0)) throw InvalidParameter("bump width must be > 0");
        }
        s = ScalarField::sample(grid, [&](double x, double y, double z) {
            const std::array<double, 3> p{x, y, z};
            double v = init.floor;
            for (const Bump& b : init.bumps) {
                double r2 = 0.0;
                for (int d = 0; d < grid.dim(); ++d) r2 += (p[d] - b.center[d]) * (p[d] - b.center[d]);
                v += b.amplitude * std::exp(-r2 / (b.width * b.width));
            }
            return v;
        });
    }
    if (init.noise != 0.0) {
        if (!(init.noise >= 0.0 && init.noise < 1.0))
            throw InvalidParameter("initial noise must lie in [0, 1)");
        Rng rng(seed);
        for (double& v : s.values()) v *= 1.0 + init.noise * rng.uniform(-1.0, 1.0);
    }
    if (init.mass >= 0.0) {
        const double total = integrate(s);
        if (init.mass > 0.0 && !(total > 0.0))
            throw InvalidParameter("cannot rescale an all-zero profile to positive mass");
        const double scale = total > 0.0 ? init.mass / total : 0.0;
        for (double& v : s.values()) v *= scale;
    }
    return s;
}

VectorField random_smooth_velocity(const VelocityInit& init, const Grid& grid,
                                   std::uint64_t seed) {
    if (init.kind == VelocityInit::Kind::zero) return VectorField(grid);
    if (init.modes < 1) throw InvalidParameter("random velocity needs at least one mode");
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    struct Mode {
        std::array<int, 3> k;
        std::array<double, 3> phase;
        double weight;
    };
    std::array<std::vector<Mode>, 3> modes;
    for (int d = 0; d < grid.dim(); ++d)
        for (int m = 0; m < init.modes; ++m) {
            Mode mode{};
            for (int e = 0; e < 3; ++e) {
                mode.k[e] = rng.integer(1, 3);
                mode.phase[e] = rng.uniform(0.0, 2.0 * std::numbers::pi);
            }
            mode.weight = rng.uniform(-1.0, 1.0);
            modes[d].push_back(mode);
        }
    return VectorField::sample_interior(grid, [&](int d, double x, double y, double z) {
        const std::array<double, 3> p{x, y, z};
        double v = 0.0;
        for (const Mode& m : modes[d]) {
            double term = m.weight;
            for (int e = 0; e < grid.dim(); ++e)
                term *= std::sin(m.k[e] * std::numbers::pi * p[e] / grid.length(e) + m.phase[e]);
            v += term;
        }
        return init.amplitude * v;
    });
}

SimState build_initial_state(const InitialData& init, const ModelParams& params,
                             const Grid& grid, std::uint64_t seed,
                             const PoissonSolveParams& psolve) {
    params.validate();
    SimState state(grid);
    state.n = build_scalar(init.n0, grid, seed);
    state.c = build_scalar(init.c0, grid, seed + 1);
    if (init.u0.kind == VelocityInit::Kind::random) {
        state.u = project_divergence_free(random_smooth_velocity(init.u0, grid, seed), psolve).velocity;
    }
    return state;
}

}  // namespace kss
