#pragma once

#include <string>
#include <vector>

#include "kss/error.hpp"
#include "kss/rng.hpp"

namespace kss::ode {

/// Data of the superlinearly damped differential inequality
///   y' + a y^gamma + g <= h  on (t_star, T),
///   int_t^{t+tau} h <= b     for t in [t_star, T - tau].
struct OdeBoundProblem {
    double a = 1.0;
    double b = 1.0;
    double gamma = 2.0;
    double tau = 1.0;
    double t_star = 0.0;
    double T = 2.0;
    double y_start = 0.0;

    /// Throws InvalidParameter unless a, b > 0, gamma > 1,
    /// 0 < tau < T - t_star and y_start >= 0.
    void validate() const;
};

struct OdeBoundResult {
    double c_const = 0.0;         // max{y(t*), ((gamma - 1) a tau)^(-1/(gamma - 1))}
    double y_bound = 0.0;         // b + C, bounds y on [t*, T]
    double g_window_bound = 0.0;  // 2b + C, bounds every tau-window integral of g
};

OdeBoundResult lemma1_bound(const OdeBoundProblem& prob);

/// Nonnegative forcing h(t): a constant, or piecewise-constant values on
/// consecutive pieces of equal width starting at t_star (zero afterwards).
struct ForcingSpec {
    enum class Kind { constant, piecewise_constant };
    Kind kind = Kind::constant;
    double value = 0.0;
    std::vector<double> pieces;
    double piece_width = 1.0;

    double operator()(double t, double t_star) const;
};

/// Absorbed term g >= 0: zero, a constant, lambda * h(t), or the trajectory
/// feedback lambda * (h(t) + a y^gamma).
struct DampingSpec {
    enum class Kind { zero, constant, fraction_of_h, feedback };
    Kind kind = Kind::zero;
    double value = 0.0;

    double operator()(double h, double a_y_gamma) const;
};

struct LemmaReport {
    OdeBoundResult bound;
    double max_y = 0.0;
    double y_end = 0.0;  // y(T)
    double max_g_window = 0.0;
    double max_h_window = 0.0;
    double slack_y = 0.0;  // y_bound - max_y
    double slack_g = 0.0;  // g_window_bound - max_g_window
    double eps_int = 0.0;
    int steps = 0;
};

/// Precondition failure: the case is not admissible (window bound on h
/// broken, negative data, trajectory leaving y >= 0).
struct MalformedCase : Error {
    using Error::Error;
};

/// A computed trajectory exceeded the lemma's bound beyond the integration
/// tolerance.
struct LemmaViolation : Error {
    LemmaViolation(const std::string& what, LemmaReport r) : Error(what), report(r) {}
    LemmaReport report;
};

/// Largest tau-window integral of h over starts in [t_star, T - tau], on a
/// grid of spacing tau / 100 (exact for piecewise-constant h aligned with it).
double max_window_integral(const ForcingSpec& h, const OdeBoundProblem& prob);

/// Integrates the saturated equation y' = -a y^gamma - g + h from y_start by
/// classical RK4 (dt chosen so that tau is a whole number of steps; refined
/// further if the damping term would be unstable) and checks
///   y <= b + C  and  int_t^{t+tau} g <= 2b + C
/// up to eps_int = 1e-6 (1 + b + C).
LemmaReport verify_lemma1(const OdeBoundProblem& prob, const ForcingSpec& h,
                          const DampingSpec& g, int n_steps);

struct LemmaCase {
    OdeBoundProblem problem;
    ForcingSpec h;
    DampingSpec g;
};

/// Random admissible case; h is scaled so its largest window integral is a
/// random fraction in [0.5, 1] of b.
LemmaCase random_admissible_case(Rng& rng);

std::string to_string(DampingSpec::Kind k);

}  // namespace kss::ode
