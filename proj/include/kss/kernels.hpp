#pragma once

// Structured-grid kernels in two flavours with identical signatures:
//
//   kss::kernels::serial  plain single-threaded reference that realizes the
//                         boundary conditions through a ghost-padded copy;
//   kss::kernels::omp     OpenMP data-parallel version used by the library,
//                         boundary handling inlined into the sweeps.
//
// Tests compare the two and the benchmark target times them. Reductions in
// the omp flavour sum fixed-size blocks in parallel and then combine the block
// partials in order, so results do not depend on the thread count.

#include <array>
#include <span>

#include "kss/field.hpp"
#include "kss/grid.hpp"
#include "kss/sensitivity.hpp"

namespace kss::kernels {

using Faces = std::array<std::span<double>, 3>;
using ConstFaces = std::array<std::span<const double>, 3>;

#define KSS_DECLARE_KERNELS                                                                    \
    /* Face differences; boundary faces follow `bc` through the ghost rule. */                 \
    void gradient(const Grid& g, std::span<const double> s, ScalarBc bc, Faces out);           \
    void divergence(const Grid& g, ConstFaces v, std::span<double> out);                       \
    /* Composition divergence(gradient(s)), evaluated in one sweep. */                         \
    void laplacian(const Grid& g, std::span<const double> s, ScalarBc bc,                      \
                   std::span<double> out);                                                     \
    /* Componentwise Laplacian on interior faces; boundary-normal faces are set to 0. */       \
    void vector_laplacian(const Grid& g, ConstFaces u, VectorBc bc, Faces out);                \
    /* Total face flux of the cell density: -grad n + n_upwind (S(n_face) grad c + u). */      \
    /* Empty velocity spans mean u = 0. Boundary faces carry zero flux. */                     \
    void density_flux(const Grid& g, std::span<const double> n, std::span<const double> c,    \
                      ConstFaces u, const SensitivityLaw& law, Faces out);                            \
    /* Upwinded advective flux q_upwind * u on interior faces, zero on the boundary. */        \
    void advective_flux(const Grid& g, std::span<const double> q, ConstFaces u, Faces out);    \
    /* Largest |S(n_face) dc/dx + u| over interior faces. */                                   \
    double max_face_speed(const Grid& g, std::span<const double> n, std::span<const double> c, \
                          ConstFaces u, const SensitivityLaw& law);                                   \
    double sum(std::span<const double> x);                                                     \
    double dot(std::span<const double> x, std::span<const double> y);                          \
    double max_abs(std::span<const double> x);

namespace serial {
KSS_DECLARE_KERNELS
}
namespace omp {
KSS_DECLARE_KERNELS
}

#undef KSS_DECLARE_KERNELS

inline Faces faces(VectorField& v) {
    return {v.component(0), v.component(1), v.component(2)};
}
inline ConstFaces faces(const VectorField& v) {
    return {v.component(0), v.component(1), v.component(2)};
}

}  // namespace kss::kernels
