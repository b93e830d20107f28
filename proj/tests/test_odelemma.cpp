#include <cmath>

#include "doctest.h"
#include "kss/odelemma.hpp"

using namespace kss;
using namespace kss::ode;

namespace {

OdeBoundProblem problem(double a, double gamma, double tau, double y0, double b, double T = 4.0) {
    OdeBoundProblem p;
    p.a = a;
    p.gamma = gamma;
    p.tau = tau;
    p.y_start = y0;
    p.b = b;
    p.t_star = 0.0;
    p.T = T;
    return p;
}

ForcingSpec constant_h(double v) {
    ForcingSpec h;
    h.value = v;
    return h;
}

}  // namespace

TEST_CASE("bound constant examples") {
    auto r = lemma1_bound(problem(1, 2, 1, 0, 1));
    CHECK(r.c_const == 1.0);
    CHECK(r.y_bound == 2.0);
    CHECK(r.g_window_bound == 3.0);

    r = lemma1_bound(problem(1, 2, 1, 1e6, 1));
    CHECK(r.c_const == 1e6);
    CHECK(r.y_bound == 1e6 + 1);

    r = lemma1_bound(problem(4, 3, 0.5, 0, 2));
    CHECK(r.c_const == 0.5);
    CHECK(r.y_bound == 2.5);
    CHECK(r.g_window_bound == 4.5);
}

TEST_CASE("bound constant monotonicity and scaling") {
    Rng rng(5);
    for (int k = 0; k < 200; ++k) {
        auto p = problem(rng.uniform(0.1, 3), rng.uniform(1.1, 4), rng.uniform(0.1, 1),
                         rng.uniform(0, 5), rng.uniform(0.1, 5));
        const double c = lemma1_bound(p).c_const;
        auto q = p;
        q.y_start += rng.uniform(0, 5);
        CHECK(lemma1_bound(q).c_const >= c);
        q = p;
        q.a *= 1.5;
        CHECK(lemma1_bound(q).c_const <= c);
        q = p;
        q.tau *= 1.5;
        CHECK(lemma1_bound(q).c_const <= c);
    }
    auto p = problem(1, 2, 1, 50, 1);
    auto q = p;
    q.y_start = 100;
    CHECK(lemma1_bound(q).c_const == 2.0 * lemma1_bound(p).c_const);
}

TEST_CASE("invalid problems are rejected") {
    CHECK_THROWS_AS(lemma1_bound(problem(0, 2, 1, 0, 1)), InvalidParameter);
    CHECK_THROWS_AS(lemma1_bound(problem(1, 1, 1, 0, 1)), InvalidParameter);
    CHECK_THROWS_AS(lemma1_bound(problem(1, 2, 5, 0, 1)), InvalidParameter);
    CHECK_THROWS_AS(lemma1_bound(problem(1, 2, 1, -1, 1)), InvalidParameter);
    CHECK_THROWS_AS(lemma1_bound(problem(1, 2, 1, 0, 0)), InvalidParameter);
}

TEST_CASE("unforced decay from y = 5") {
    auto p = problem(1, 2, 1, 5, 1, 3);
    const auto rep = verify_lemma1(p, constant_h(0.0), {}, 4000);
    CHECK(rep.max_y == 5.0);
    CHECK(rep.max_g_window == 0.0);
    CHECK(rep.slack_y == doctest::Approx(1.0));
}

TEST_CASE("unforced RK4 trajectory follows 5 / (1 + 5 t)") {
    for (double T : {0.5, 1.0, 3.0}) {
        auto p = problem(1, 2, 0.25, 5, 1, T);
        const auto rep = verify_lemma1(p, constant_h(0.0), {}, 4000);
        CHECK(rep.y_end == doctest::Approx(5.0 / (1.0 + 5.0 * T)).epsilon(1e-9));
        CHECK(rep.y_end <= rep.bound.y_bound);
    }
}

TEST_CASE("constant forcing approaches its equilibrium from below") {
    const double a = 2.0, gamma = 2.0, tau = 1.0, b = 3.0;
    auto p = problem(a, gamma, tau, 0, b, 20);
    const auto rep = verify_lemma1(p, constant_h(b / tau), {}, 8000);
    const double eq = std::pow(b / (a * tau), 1.0 / gamma);
    CHECK(rep.max_y <= eq * (1 + 1e-12));
    CHECK(rep.max_y >= 0.999 * eq);
    CHECK(rep.max_y <= rep.bound.y_bound);
    CHECK(rep.max_h_window == doctest::Approx(b));
}

TEST_CASE("absorbed terms stay within the window bound") {
    auto p = problem(1.5, 2.5, 0.5, 3, 2, 5);
    for (auto kind : {DampingSpec::Kind::constant, DampingSpec::Kind::fraction_of_h,
                      DampingSpec::Kind::feedback}) {
        DampingSpec g{kind, 0.5};
        if (kind == DampingSpec::Kind::constant) g.value = 0.1;
        const auto rep = verify_lemma1(p, constant_h(4.0), g, 4000);
        CHECK(rep.max_g_window > 0.0);
        CHECK(rep.slack_g >= 0.0);
        CHECK(rep.slack_y >= 0.0);
    }
}

TEST_CASE("random admissible cases never violate the bounds") {
    Rng rng(2024);
    int kinds[4] = {0, 0, 0, 0};
    for (int k = 0; k < 100; ++k) {
        const auto c = random_admissible_case(rng);
        ++kinds[static_cast<int>(c.g.kind)];
        CHECK(c.problem.y_start >= 0.0);
        LemmaReport rep;
        REQUIRE_NOTHROW(rep = verify_lemma1(c.problem, c.h, c.g, 4000));
        CHECK(rep.max_h_window <= c.problem.b * (1 + 1e-12));
        CHECK(rep.slack_y >= -rep.eps_int);
        CHECK(rep.slack_g >= -rep.eps_int);
    }
    CHECK(kinds[0] > 0);
    CHECK(kinds[2] > 0);
    CHECK(kinds[3] > 0);
}

TEST_CASE("inadmissible forcing is rejected, not reported as a violation") {
    auto p = problem(1, 2, 1, 0, 1, 4);
    CHECK_THROWS_AS(verify_lemma1(p, constant_h(1.5), {}, 1000), MalformedCase);
    CHECK_THROWS_AS(verify_lemma1(p, constant_h(-0.1), {}, 1000), MalformedCase);
    // A large constant g drives y negative.
    CHECK_THROWS_AS(verify_lemma1(p, constant_h(0.5), {DampingSpec::Kind::constant, 5.0}, 1000),
                    MalformedCase);
}

TEST_CASE("window integral of piecewise-constant forcing") {
    auto p = problem(1, 2, 1, 0, 10, 4);
    ForcingSpec h;
    h.kind = ForcingSpec::Kind::piecewise_constant;
    h.piece_width = 0.5;
    h.pieces = {1, 3, 2, 0, 0, 4, 4, 0};
    CHECK(max_window_integral(h, p) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(h(0.75, 0.0) == 3.0);
    CHECK(h(-0.1, 0.0) == 0.0);
    CHECK(h(10.0, 0.0) == 0.0);
}
