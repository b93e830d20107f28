#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>

#include "kss/field.hpp"
#include "kss/rng.hpp"

namespace kss::test {

inline ScalarField random_scalar(const Grid& g, std::uint64_t seed, double lo = -1.0,
                                 double hi = 1.0, ScalarBc bc = ScalarBc::neumann_zero) {
    Rng rng(seed);
    ScalarField s(g, bc);
    for (auto& v : s.values()) v = rng.uniform(lo, hi);
    return s;
}

// Random values on interior faces, zero boundary normals.
inline VectorField random_vector(const Grid& g, std::uint64_t seed,
                                 VectorBc bc = VectorBc::dirichlet_zero) {
    Rng rng(seed);
    return VectorField::sample_interior(
        g, [&](int, double, double, double) { return rng.uniform(-1.0, 1.0); }, bc);
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
    return max_abs_diff(a.values(), b.values());
}

inline double max_abs_diff(const VectorField& a, const VectorField& b) {
    double m = 0.0;
    for (int d = 0; d < 3; ++d) m = std::max(m, max_abs_diff(a.component(d), b.component(d)));
    return m;
}

}  // namespace kss::test
