#include "kss/odelemma.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace kss::ode {

void OdeBoundProblem::validate() const {
    if (!(a > 0.0)) throw InvalidParameter("a must be > 0");
    if (!(b > 0.0)) throw InvalidParameter("b must be > 0");
    if (!(gamma > 1.0)) throw InvalidParameter("gamma must be > 1");
    if (!(T > t_star)) throw InvalidParameter("T must exceed t_star");
    if (!(tau > 0.0 && tau < T - t_star)) throw InvalidParameter("tau must lie in (0, T - t_star)");
    if (!(y_start >= 0.0)) throw InvalidParameter("y_start must be >= 0");
}

OdeBoundResult lemma1_bound(const OdeBoundProblem& prob) {
    prob.validate();
    const double e = prob.gamma - 1.0;
    const double floor_term = std::pow(e * prob.a * prob.tau, -1.0 / e);
    OdeBoundResult r;
    r.c_const = std::max(prob.y_start, floor_term);
    r.y_bound = prob.b + r.c_const;
    r.g_window_bound = 2.0 * prob.b + r.c_const;
    return r;
}

double ForcingSpec::operator()(double t, double t_star) const {
    if (kind == Kind::constant) return value;
    const double s = (t - t_star) / piece_width;
    if (s < 0.0) return 0.0;
    const auto idx = static_cast<std::size_t>(s);
    return idx < pieces.size() ? pieces[idx] : 0.0;
}

double DampingSpec::operator()(double h, double a_y_gamma) const {
    switch (kind) {
        case Kind::zero: return 0.0;
        case Kind::constant: return value;
        case Kind::fraction_of_h: return value * h;
        case Kind::feedback: return value * (h + a_y_gamma);
    }
    return 0.0;
}

std::string to_string(DampingSpec::Kind k) {
    switch (k) {
        case DampingSpec::Kind::zero: return "zero";
        case DampingSpec::Kind::constant: return "constant";
        case DampingSpec::Kind::fraction_of_h: return "fraction_of_h";
        case DampingSpec::Kind::feedback: return "feedback";
    }
    return "zero";
}

double max_window_integral(const ForcingSpec& h, const OdeBoundProblem& prob) {
    constexpr int kFine = 100;
    const double w = prob.tau / kFine;
    auto window = [&](double start) {
        double s = 0.0;
        for (int m = 0; m < kFine; ++m) s += h(start + (m + 0.5) * w, prob.t_star);
        return s * w;
    };
    const double last = prob.T - prob.tau;
    double best = 0.0;
    for (long k = 0;; ++k) {
        const double start = prob.t_star + static_cast<double>(k) * w;
        if (start > last) break;
        best = std::max(best, window(start));
    }
    return std::max(best, window(last));
}

LemmaReport verify_lemma1(const OdeBoundProblem& prob, const ForcingSpec& h,
                          const DampingSpec& g, int n_steps) {
    const OdeBoundResult bound = lemma1_bound(prob);
    if (n_steps < 1) throw InvalidParameter("n_steps must be >= 1");
    if (h.kind == ForcingSpec::Kind::constant ? !(h.value >= 0.0)
                                              : std::any_of(h.pieces.begin(), h.pieces.end(),
                                                            [](double v) { return !(v >= 0.0); }))
        throw MalformedCase("h must be nonnegative");
    if (h.kind == ForcingSpec::Kind::piecewise_constant && !(h.piece_width > 0.0))
        throw MalformedCase("h piece width must be > 0");
    if (!(g.value >= 0.0)) throw MalformedCase("g must be nonnegative");

    LemmaReport rep;
    rep.bound = bound;
    rep.eps_int = 1e-6 * (1.0 + bound.y_bound);
    rep.max_h_window = max_window_integral(h, prob);
    if (rep.max_h_window > prob.b * (1.0 + 1e-12))
        throw MalformedCase("window integral of h (" + std::to_string(rep.max_h_window) +
                            ") exceeds b (" + std::to_string(prob.b) + ")");

    const double span = prob.T - prob.t_star;
    int per_tau = std::max(1, static_cast<int>(std::ceil(n_steps * prob.tau / span)));
    // Keep the explicit damping stable: dt * a gamma y^(gamma-1) stays below 1
    // along any trajectory obeying the bound.
    const double stiffness =
        prob.a * prob.gamma * std::pow(bound.y_bound, prob.gamma - 1.0);
    per_tau = std::max(per_tau, static_cast<int>(std::ceil(stiffness * prob.tau)));
    const double dt = prob.tau / per_tau;
    const int steps = static_cast<int>(std::ceil(span / dt - 1e-9));

    auto rhs = [&](double t, double y) {
        const double ht = h(t, prob.t_star);
        const double damp = prob.a * std::pow(std::max(y, 0.0), prob.gamma);
        const double gt = g(ht, damp);
        return std::array<double, 2>{-damp - gt + ht, gt};
    };

    std::vector<double> G(static_cast<std::size_t>(steps) + 1, 0.0);
    double y = prob.y_start;
    double t = prob.t_star;
    rep.max_y = y;
    for (int s = 0; s < steps; ++s) {
        const double step = std::min(dt, prob.T - t);
        const auto k1 = rhs(t, y);
        const auto k2 = rhs(t + 0.5 * step, y + 0.5 * step * k1[0]);
        const auto k3 = rhs(t + 0.5 * step, y + 0.5 * step * k2[0]);
        const auto k4 = rhs(t + step, y + step * k3[0]);
        y += step / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        G[s + 1] = G[s] + step / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        t = prob.t_star + (s + 1 == steps ? span : (s + 1) * dt);
        if (y < -rep.eps_int)
            throw MalformedCase("trajectory left y >= 0 (g exceeds the admissible class)");
        rep.max_y = std::max(rep.max_y, y);
    }
    rep.steps = steps;
    rep.y_end = y;
    for (int s = 0; s + per_tau <= steps; ++s)
        rep.max_g_window = std::max(rep.max_g_window, G[s + per_tau] - G[s]);

    rep.slack_y = bound.y_bound - rep.max_y;
    rep.slack_g = bound.g_window_bound - rep.max_g_window;
    if (rep.slack_y < -rep.eps_int)
        throw LemmaViolation("y exceeded b + C by " + std::to_string(-rep.slack_y), rep);
    if (rep.slack_g < -rep.eps_int)
        throw LemmaViolation("window integral of g exceeded 2b + C by " +
                                 std::to_string(-rep.slack_g),
                             rep);
    return rep;
}

LemmaCase random_admissible_case(Rng& rng) {
    LemmaCase c;
    auto& p = c.problem;
    p.a = rng.uniform(0.2, 3.0);
    p.gamma = rng.uniform(1.2, 3.0);
    p.tau = rng.uniform(0.2, 2.0);
    p.t_star = rng.uniform(-1.0, 1.0);
    p.T = p.t_star + p.tau * rng.uniform(1.5, 6.0);
    p.b = rng.uniform(0.1, 5.0);
    p.y_start = rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.0, 10.0);

    static constexpr std::array<int, 5> kDivisions{1, 2, 4, 5, 10};
    const int m = kDivisions[static_cast<std::size_t>(rng.integer(0, 4))];
    c.h.kind = ForcingSpec::Kind::piecewise_constant;
    c.h.piece_width = p.tau / m;
    const auto count = static_cast<std::size_t>(std::ceil((p.T - p.t_star) / c.h.piece_width));
    for (std::size_t i = 0; i < count; ++i)
        c.h.pieces.push_back(rng.uniform() < 0.3 ? 0.0 : rng.uniform());
    if (std::all_of(c.h.pieces.begin(), c.h.pieces.end(), [](double v) { return v == 0.0; }))
        c.h.pieces.front() = 1.0;
    const double peak = max_window_integral(c.h, p);
    const double scale = p.b * rng.uniform(0.5, 1.0) / peak;
    for (double& v : c.h.pieces) v *= scale;

    static constexpr std::array<DampingSpec::Kind, 3> kKinds{
        DampingSpec::Kind::zero, DampingSpec::Kind::fraction_of_h, DampingSpec::Kind::feedback};
    c.g.kind = kKinds[static_cast<std::size_t>(rng.integer(0, 2))];
    c.g.value = c.g.kind == DampingSpec::Kind::zero ? 0.0 : rng.uniform(0.0, 1.0);
    return c;
}

}  // namespace kss::ode
