#include "kss/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "kss/error.hpp"
#include "kss/kernels.hpp"
#include "kss/operators.hpp"

namespace kss {

namespace k = kernels::omp;

namespace {

constexpr std::ptrdiff_t kParallelMin = 2048;

/// Diagonal of -laplacian under the mirror ghost rule.
std::vector<double> neumann_diagonal(const Grid& g) {
    std::vector<double> diag(g.cell_count(), 0.0);
    for (int i = 0; i < g.cells(0); ++i)
        for (int j = 0; j < g.cells(1); ++j)
            for (int kk = 0; kk < g.cells(2); ++kk) {
                const std::array<int, 3> at{i, j, kk};
                double v = 0.0;
                for (int d = 0; d < g.dim(); ++d) {
                    const double w = 1.0 / (g.spacing(d) * g.spacing(d));
                    if (at[d] > 0) v += w;
                    if (at[d] + 1 < g.cells(d)) v += w;
                }
                diag[g.index(i, j, kk)] = v;
            }
    return diag;
}

double mean_of(std::span<const double> x) { return k::sum(x) / static_cast<double>(x.size()); }

void remove_mean(std::span<double> x) {
    const double m = mean_of(x);
    for (double& v : x) v -= m;
}

}  // namespace

int PoissonSolveParams::iteration_limit(const Grid& g) const {
    if (max_iterations > 0) return max_iterations;
    const int n = *std::max_element(g.cells().begin(), g.cells().begin() + g.dim());
    return 10 * n * n;
}

PoissonSolution solve_poisson_neumann(const ScalarField& rhs, const PoissonSolveParams& params,
                                      const ScalarField* initial_guess) {
    if (!(params.tolerance > 0.0)) throw InvalidParameter("Poisson tolerance must be > 0");
    const Grid& g = rhs.grid();
    const std::size_t n = g.cell_count();
    const auto count = static_cast<std::ptrdiff_t>(n);

    // A = -laplacian is positive semidefinite; solve A x = b with b = -(rhs - mean).
    std::vector<double> b(rhs.values().begin(), rhs.values().end());
    remove_mean(b);
    for (double& v : b) v = -v;

    PoissonSolution out{ScalarField(g), 0, 0.0};
    const double bnorm = k::max_abs(b);
    if (bnorm == 0.0) return out;
    const double threshold = params.tolerance * std::max(bnorm, 1.0);

    std::vector<double> x(n, 0.0);
    if (initial_guess) {
        std::copy(initial_guess->values().begin(), initial_guess->values().end(), x.begin());
        remove_mean(x);
    }
    const std::vector<double> diag = neumann_diagonal(g);
    std::vector<double> r(n), z(n), p(n), q(n);

    auto apply = [&](std::span<const double> in, std::span<double> res) {
        k::laplacian(g, in, ScalarBc::neumann_zero, res);
        for (double& v : res) v = -v;
    };
    auto true_residual = [&]() {
        apply(x, q);
#pragma omp parallel for schedule(static) if (count >= kParallelMin)
        for (std::ptrdiff_t i = 0; i < count; ++i) r[i] = b[i] - q[i];
        return k::max_abs(r);
    };
    auto restart = [&]() {
#pragma omp parallel for schedule(static) if (count >= kParallelMin)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            z[i] = r[i] / diag[i];
            p[i] = z[i];
        }
        return k::dot(r, z);
    };

    const int limit = params.iteration_limit(g);
    double rnorm = true_residual();
    double rz = restart();
    int it = 0;
    while (true) {
        if (rnorm <= threshold) {
            // The recursive residual drifts; accept only on the true one.
            rnorm = true_residual();
            if (rnorm <= threshold) break;
            rz = restart();
        }
        if (it >= limit) {
            throw SolverFailure("Poisson solve did not converge in " + std::to_string(limit) +
                                    " iterations (residual " + std::to_string(rnorm) + ")",
                                rnorm, it);
        }
        ++it;
        apply(p, q);
        const double pq = k::dot(p, q);
        if (!(pq > 0.0)) {
            rnorm = true_residual();
            if (rnorm <= threshold) break;
            throw SolverFailure("Poisson solve broke down", rnorm, it);
        }
        const double a = rz / pq;
#pragma omp parallel for schedule(static) if (count >= kParallelMin)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            x[i] += a * p[i];
            r[i] -= a * q[i];
            z[i] = r[i] / diag[i];
        }
        const double rz_new = k::dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
#pragma omp parallel for schedule(static) if (count >= kParallelMin)
        for (std::ptrdiff_t i = 0; i < count; ++i) p[i] = z[i] + beta * p[i];
        rnorm = k::max_abs(r);
    }
    remove_mean(x);
    std::copy(x.begin(), x.end(), out.phi.values().begin());
    out.iterations = it;
    out.residual = rnorm;
    return out;
}

Projection project_divergence_free(const VectorField& v, const PoissonSolveParams& params,
                                   const ScalarField* initial_guess) {
    VectorField w = v;
    w.clear_boundary_normals();
    auto sol = solve_poisson_neumann(divergence(w), params, initial_guess);
    const VectorField grad = gradient(sol.phi);
    for (int d = 0; d < w.grid().dim(); ++d) {
        auto wc = w.component(d);
        auto gc = grad.component(d);
        for (std::size_t f = 0; f < wc.size(); ++f) wc[f] -= gc[f];
    }
    return {std::move(w), std::move(sol.phi), sol.iterations};
}

double stokes_dt_limit(const Grid& g) {
    const double h = g.min_spacing();
    return h * h / (2.0 * g.dim());
}

StokesStepResult stokes_step(const SimState& state, const ModelParams& params, double dt,
                             const PoissonSolveParams& psolve) {
    const Grid& g = state.grid();
    if (!(dt > 0.0) || dt > stokes_dt_limit(g) * (1.0 + 1e-12))
        throw InvalidParameter("stokes_step: dt " + std::to_string(dt) +
                               " violates the explicit viscous limit " +
                               std::to_string(stokes_dt_limit(g)));
    if (state.n.min() < 0.0) throw InvalidParameter("stokes_step: negative density");

    const VectorField lap = vector_laplacian(state.u);
    const VectorField n_face = interpolate_to_faces(state.n);
    const VectorField grad_phi = eval_phi_gradient(params, g);
    const VectorField force = eval_forcing(params, g, state.t);

    VectorField star = state.u;
    for (int d = 0; d < g.dim(); ++d) {
        auto s = star.component(d);
        auto l = lap.component(d);
        auto nf = n_face.component(d);
        auto gp = grad_phi.component(d);
        auto f = force.component(d);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] += dt * (l[i] + nf[i] * gp[i] + f[i]);
    }
    star.clear_boundary_normals();

    ScalarField guess = state.p;
    for (double& v : guess.values()) v *= dt;
    auto proj = project_divergence_free(star, psolve, &guess);

    StokesStepResult out{state, {}};
    out.state.u = std::move(proj.velocity);
    out.state.u.set_bc(state.u.bc());
    out.state.p = std::move(proj.potential);
    for (double& v : out.state.p.values()) v /= dt;
    out.report.div_max_after = max_abs_divergence(out.state.u);
    out.report.poisson_iterations = proj.iterations;
    out.report.dt_used = dt;
    return out;
}

}  // namespace kss
