#pragma once

#include "kss/field.hpp"
#include "kss/model.hpp"
#include "kss/state.hpp"

namespace kss {

struct PoissonSolveParams {
    /// Stop when max|r| <= tolerance * max(max|b|, 1) over cells.
    double tolerance = 1e-10;
    /// 0 selects 10 * (largest cells_per_axis)^2.
    int max_iterations = 0;

    int iteration_limit(const Grid& g) const;
};

struct PoissonSolution {
    ScalarField phi;
    int iterations = 0;
    double residual = 0.0;  // final max|laplacian(phi) - (rhs - mean)|
};

/// Mean-zero phi with laplacian(phi) = rhs - mean(rhs) under zero-Neumann
/// conditions, by Jacobi-preconditioned conjugate gradients. An optional
/// initial guess warm-starts the iteration. Throws SolverFailure when the
/// iteration limit is reached.
PoissonSolution solve_poisson_neumann(const ScalarField& rhs, const PoissonSolveParams& params,
                                      const ScalarField* initial_guess = nullptr);

struct Projection {
    VectorField velocity;
    ScalarField potential;
    int iterations = 0;
};

/// Discrete Helmholtz projection v - grad(phi), phi solving the Neumann
/// problem for divergence(v). Boundary-normal faces of v are treated as zero.
Projection project_divergence_free(const VectorField& v, const PoissonSolveParams& params,
                                   const ScalarField* initial_guess = nullptr);

struct StokesStepReport {
    double div_max_after = 0.0;
    int poisson_iterations = 0;
    double dt_used = 0.0;
};

struct StokesStepResult {
    SimState state;
    StokesStepReport report;
};

/// Largest dt accepted by stokes_step: h_min^2 / (2 dim).
double stokes_dt_limit(const Grid& g);

/// One projection step of u_t + grad P = lap u + n grad(phi) + f(t) with
/// explicit viscous term and u = 0 on the walls. Pressure is stored as
/// potential / dt (mean zero). Only u and p of the state change.
StokesStepResult stokes_step(const SimState& state, const ModelParams& params, double dt,
                             const PoissonSolveParams& psolve);

}  // namespace kss
