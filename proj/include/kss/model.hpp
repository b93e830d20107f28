#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "kss/field.hpp"
#include "kss/sensitivity.hpp"
#include "kss/state.hpp"

namespace kss {

struct PoissonSolveParams;

enum class PotentialKind { zero, linear };
enum class ForcingKind { zero, constant, periodic };

/// Physical parameters of the chemotaxis-Stokes model.
struct ModelParams {
    double alpha = 0.0;
    double kappa_s = 1.0;
    /// Optional tabulated S(n) knots; empty selects the power law.
    std::vector<std::pair<double, double>> sensitivity_table;

    PotentialKind phi = PotentialKind::zero;
    std::array<double, 3> gravity{0.0, 0.0, 0.0};

    ForcingKind forcing = ForcingKind::zero;
    std::array<double, 3> forcing_amplitude{0.0, 0.0, 0.0};
    double forcing_omega = 0.0;

    bool fluid_enabled = true;

    /// Throws InvalidParameter when alpha < 0, kappa_s <= 0 or any vector
    /// entry is not finite.
    void validate() const;
    SensitivityLaw law() const { return {kappa_s, alpha, sensitivity_table}; }
};

/// S(n) = kappa_s (n + 1)^(-alpha). Throws InvalidParameter for n < 0.
double sensitivity(double n_value, const ModelParams& params);

/// grad phi for phi = g.x: the constant vector g on every face.
VectorField eval_phi_gradient(const ModelParams& params, const Grid& grid);

/// f(t) on every face. Its sup over t never exceeds the declared amplitude.
VectorField eval_forcing(const ModelParams& params, const Grid& grid, double t);

struct Bump {
    std::array<double, 3> center{0.0, 0.0, 0.0};
    double width = 1.0;
    double amplitude = 0.0;
};

/// Nonnegative scalar initial profile: floor + sum of Gaussian bumps
/// A exp(-|x - x0|^2 / w^2), or a constant. With `mass` set the generated
/// field is rescaled to that total; `noise` applies a seeded multiplicative
/// perturbation (1 + noise * U(-1, 1)) per cell before rescaling.
struct ScalarInit {
    enum class Kind { constant, bumps };
    Kind kind = Kind::constant;
    double value = 0.0;
    double floor = 0.0;
    std::vector<Bump> bumps;
    double mass = -1.0;  // < 0: no rescaling
    double noise = 0.0;
};

struct VelocityInit {
    enum class Kind { zero, random };
    Kind kind = Kind::zero;
    double amplitude = 1.0;
    int modes = 3;
};

struct InitialData {
    ScalarInit n0;
    ScalarInit c0;
    VelocityInit u0;
};

/// Samples a scalar descriptor. Throws InvalidParameter when it would
/// produce negative values.
ScalarField build_scalar(const ScalarInit& init, const Grid& grid, std::uint64_t seed);

/// Smooth random interior face field (before projection).
VectorField random_smooth_velocity(const VelocityInit& init, const Grid& grid,
                                   std::uint64_t seed);

/// n0, c0 >= 0, u0 projected to be discretely divergence-free, t = 0.
SimState build_initial_state(const InitialData& init, const ModelParams& params,
                             const Grid& grid, std::uint64_t seed,
                             const PoissonSolveParams& psolve);

}  // namespace kss
