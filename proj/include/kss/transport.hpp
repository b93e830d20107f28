#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>

#include "kss/model.hpp"
#include "kss/state.hpp"
#include "kss/stokes.hpp"

namespace kss {

struct StepControl {
    double dt_safety = 0.4;
    double dt_max = std::numeric_limits<double>::infinity();
    /// cfl_dt below this floor aborts the run with DtCollapse.
    double dt_min = 1e-9;

    void validate() const;
};

/// Negative transport results above this magnitude are rounding and get
/// clipped to zero; anything more negative is a PositivityViolation.
inline constexpr double kNegativeTolerance = 1e-13;

/// Admissible explicit step
///   dt = safety * min(1 / (sum_d 2/h_d^2 + 2 v_max sum_d 1/h_d), dt_max, 1)
/// where v_max bounds both the total face velocity S(n_face) dc/dx + u seen
/// by n and the fluid speed seen by c. At rest this is safety * h^2 / (2 dim).
/// Throws DtCollapse when the result is below ctl.dt_min.
double cfl_dt(const SimState& state, const ModelParams& params, const StepControl& ctl);

/// Same bound without the dt_min check.
double cfl_dt_unchecked(const SimState& state, const ModelParams& params,
                        const StepControl& ctl);

/// Conservative upwind update n - dt div(F) with
/// F = -grad n + n_upwind (S(n_face) grad c + u) and zero flux through walls.
/// `clipped` (optional) is incremented per rounding-level negative clipped.
ScalarField step_n(const SimState& state, const ModelParams& params, double dt,
                   std::size_t* clipped = nullptr);

/// c + dt (lap c - c + n - div(c_upwind u)); integral obeys
/// (1 - dt) int c + dt int n up to rounding.
ScalarField step_c(const SimState& state, const ModelParams& params, double dt,
                   std::size_t* clipped = nullptr);

struct StepReport {
    double dt = 0.0;
    std::size_t clipped_n = 0;
    std::size_t clipped_c = 0;
    std::optional<StokesStepReport> stokes;
};

struct AdvanceResult {
    SimState state;
    StepReport report;
};

/// One split step n -> c -> (u, P). The fluid sub-step sees the updated n.
/// With `fixed_dt` the CFL choice is replaced, provided fixed_dt does not
/// exceed the safety-free CFL bound. Errors keep their type and carry the
/// failing sub-step in Error::stage.
AdvanceResult advance(const SimState& state, const ModelParams& params, const StepControl& ctl,
                      const PoissonSolveParams& psolve,
                      std::optional<double> fixed_dt = std::nullopt);

}  // namespace kss
