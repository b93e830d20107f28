#pragma once

#include "kss/field.hpp"

namespace kss {

/// Unknowns at one time level: cell density n, signal c, face velocity u and
/// mean-zero pressure p.
struct SimState {
    double t = 0.0;
    ScalarField n;
    ScalarField c;
    VectorField u;
    ScalarField p;

    SimState() = default;
    explicit SimState(const Grid& g)
        : n(g), c(g), u(g, VectorBc::dirichlet_zero), p(g) {}

    const Grid& grid() const { return n.grid(); }
};

}  // namespace kss
