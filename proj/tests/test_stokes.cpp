#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "kss/error.hpp"
#include "kss/operators.hpp"
#include "kss/stokes.hpp"

using namespace kss;
using kss::test::max_abs_diff;
using kss::test::random_scalar;
using kss::test::random_vector;

namespace {

constexpr double kPi = std::numbers::pi;

double poisson_cos_error(int cells) {
    const double L = 3.0;
    Grid g = Grid::square(cells, L);
    auto rhs = ScalarField::sample(g, [&](double x, double, double) { return std::cos(kPi * x / L); });
    auto sol = solve_poisson_neumann(rhs, {1e-12, 0});
    double err = 0.0;
    for (std::size_t c = 0; c < rhs.size(); ++c)
        err = std::max(err, std::abs(sol.phi[c] + (L / kPi) * (L / kPi) * rhs[c]));
    return err;
}

double mean(const ScalarField& s) { return integrate(s) / s.grid().volume(); }

}  // namespace

TEST_CASE("Poisson solve of trivial right-hand sides") {
    Grid g = Grid::square(16);
    auto zero = solve_poisson_neumann(ScalarField(g), {});
    CHECK(zero.phi.max() == 0.0);
    CHECK(zero.phi.min() == 0.0);
    auto five = solve_poisson_neumann(ScalarField(g, ScalarBc::neumann_zero, 5.0), {});
    CHECK(lp_norm(five.phi, kInfNorm) < 1e-12);
}

TEST_CASE("Poisson solve of a Neumann cosine converges at second order") {
    const double e32 = poisson_cos_error(32), e64 = poisson_cos_error(64);
    CHECK(e64 < 1e-3);
    CHECK(e32 / e64 > 3.5);
    CHECK(e32 / e64 < 4.5);
}

TEST_CASE("Poisson solution satisfies the discrete problem") {
    for (int dim : {2, 3}) {
        Grid g = dim == 2 ? Grid(2, {24, 40, 1}, {1.0, 2.0, 1.0}) : Grid::cube(10);
        auto rhs = random_scalar(g, 21);
        auto sol = solve_poisson_neumann(rhs, {1e-11, 0});
        auto lap = laplacian(sol.phi);
        const double m = mean(rhs);
        double err = 0.0, bnorm = 0.0;
        for (std::size_t c = 0; c < rhs.size(); ++c) {
            err = std::max(err, std::abs(lap[c] - (rhs[c] - m)));
            bnorm = std::max(bnorm, std::abs(rhs[c] - m));
        }
        CHECK(err <= 1e-11 * std::max(bnorm, 1.0) * 1.0001);
        CHECK(sol.residual == doctest::Approx(err).epsilon(1e-3));
        CHECK(std::abs(mean(sol.phi)) < 1e-12);
        // divergence(gradient(phi)) reproduces the mean-free rhs.
        auto div = divergence(gradient(sol.phi));
        CHECK(max_abs_diff(div, lap) == 0.0);
    }
}

TEST_CASE("warm start reduces iterations and the limit is enforced") {
    Grid g = Grid::square(48);
    auto rhs = random_scalar(g, 4);
    auto cold = solve_poisson_neumann(rhs, {});
    auto warm = solve_poisson_neumann(rhs, {}, &cold.phi);
    CHECK(warm.iterations < cold.iterations / 4);
    CHECK(max_abs_diff(cold.phi, warm.phi) < 1e-8);
    CHECK_THROWS_AS(solve_poisson_neumann(rhs, {1e-12, 3}), SolverFailure);
    CHECK(PoissonSolveParams{}.iteration_limit(g) == 10 * 48 * 48);
}

TEST_CASE("projection examples") {
    Grid g = Grid::square(32);
    // The discrete curl of a stream function sampled at cell corners is
    // divergence free and survives projection.
    VectorField curl(g);
    const double h = g.spacing(0);
    auto psi = [&](int i, int j) {
        const double x = i * h, y = j * h;
        return std::pow(std::sin(kPi * x) * std::sin(kPi * y), 2);
    };
    for (int i = 1; i < 32; ++i)
        for (int j = 0; j < 32; ++j) curl.at(0, i, j) = (psi(i, j + 1) - psi(i, j)) / h;
    for (int i = 0; i < 32; ++i)
        for (int j = 1; j < 32; ++j) curl.at(1, i, j) = -(psi(i + 1, j) - psi(i, j)) / h;
    CHECK(max_abs_divergence(curl) < 1e-12);
    auto pr = project_divergence_free(curl, {});
    CHECK(max_abs_diff(pr.velocity, curl) < 1e-9);
    CHECK(lp_norm(pr.potential, kInfNorm) < 1e-9);

    auto s = random_scalar(g, 12);
    auto grad = gradient(s);
    auto killed = project_divergence_free(grad, {1e-12, 0});
    CHECK(killed.velocity.max_abs() < 1e-8);

    auto v = random_vector(g, 13);
    auto out = project_divergence_free(v, {});
    CHECK(max_abs_divergence(out.velocity) <= 1e-8);
}

TEST_CASE("projection is idempotent on random fields") {
    for (int trial = 0; trial < 20; ++trial) {
        Grid g = trial % 2 ? Grid::square(24, 1.5) : Grid::cube(8);
        auto v = random_vector(g, 1000 + trial);
        auto once = project_divergence_free(v, {});
        auto twice = project_divergence_free(once.velocity, {});
        CHECK(max_abs_diff(once.velocity, twice.velocity) <= 1e-8);
    }
}

TEST_CASE("fluid at rest without forcing stays at rest") {
    Grid g = Grid::square(16);
    SimState s(g);
    ModelParams p;
    auto r = stokes_step(s, p, stokes_dt_limit(g), {});
    CHECK(r.state.u.max_abs() == 0.0);
    CHECK(r.state.p.max() == 0.0);
    CHECK(r.state.p.min() == 0.0);
    CHECK(r.report.div_max_after == 0.0);
}

TEST_CASE("slowest discrete Stokes mode decays at the predicted rate") {
    Grid g = Grid::square(16);
    ModelParams p;
    const double dt = stokes_dt_limit(g);
    SimState s(g);
    s.u = project_divergence_free(random_vector(g, 77), {1e-13, 0}).velocity;
    // Power iteration on the step operator isolates the slowest mode.
    for (int k = 0; k < 1500; ++k) {
        s = stokes_step(s, p, dt, {1e-13, 0}).state;
        const double norm = l2_norm(s.u);
        for (int d = 0; d < 2; ++d)
            for (auto& x : s.u.component(d)) x /= norm;
    }
    const double lambda = -inner(s.u, vector_laplacian(s.u)) / inner(s.u, s.u);
    CHECK(lambda > 0.0);
    double energy = 0.5 * inner(s.u, s.u);
    for (int k = 0; k < 20; ++k) {
        s = stokes_step(s, p, dt, {1e-13, 0}).state;
        const double next = 0.5 * inner(s.u, s.u);
        CHECK(next < energy);
        CHECK(next / energy == doctest::Approx(std::pow(1.0 - dt * lambda, 2)).epsilon(1e-8));
        energy = next;
    }
    // The continuum value 2 pi^2 bounds the first no-slip Stokes eigenvalue from below.
    CHECK(lambda > 2.0 * kPi * kPi);
}

TEST_CASE("buoyancy of a uniform density is balanced by pressure") {
    Grid g = Grid::square(20, 2.0);
    ModelParams p;
    p.phi = PotentialKind::linear;
    p.gravity = {0.0, -1.0, 0.0};
    SimState s(g);
    for (auto& v : s.n.values()) v = 1.0;
    auto r = stokes_step(s, p, stokes_dt_limit(g), {1e-12, 0});
    CHECK(r.state.u.max_abs() < 1e-10);
    CHECK(r.report.div_max_after < 1e-10);
    // P = g.x up to its mean.
    auto expect = ScalarField::sample(g, [](double, double y, double) { return -(y - 1.0); });
    CHECK(max_abs_diff(r.state.p, expect) < 1e-8);
}

TEST_CASE("stokes step rejects oversized steps and negative density") {
    Grid g = Grid::square(16);
    SimState s(g);
    CHECK(stokes_dt_limit(g) == doctest::Approx(1.0 / (256 * 4)));
    CHECK_THROWS_AS(stokes_step(s, ModelParams{}, 1.01 * stokes_dt_limit(g), {}), InvalidParameter);
    s.n[0] = -1.0;
    CHECK_THROWS_AS(stokes_step(s, ModelParams{}, 1e-4, {}), InvalidParameter);
}
