#pragma once

#include <limits>

#include "kss/field.hpp"

namespace kss {

/// Marker for the sup norm in lp_norm.
inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// Face differences (s[i] - s[i-1]) / h. Boundary faces follow s.bc():
/// zero for neumann_zero, the negated-ghost difference for dirichlet_zero.
VectorField gradient(const ScalarField& s);

/// Cell-centered sum of face differences; the negative adjoint of gradient.
ScalarField divergence(const VectorField& v);

/// Second-order Laplacian, bitwise equal to divergence(gradient(s)).
ScalarField laplacian(const ScalarField& s);

/// Componentwise Laplacian of a face field with ghost rule from v.bc().
VectorField vector_laplacian(const VectorField& v);

/// Midpoint rule: sum of values times cell volume.
double integrate(const ScalarField& s);

/// (integral |s|^p)^(1/p), or max |s| when p is kInfNorm. Throws
/// InvalidParameter for p < 1.
double lp_norm(const ScalarField& s, double p);

/// Face-weighted inner product sum_d sum_faces a_d b_d times cell volume.
double inner(const VectorField& a, const VectorField& b);

/// Cell-weighted inner product.
double inner(const ScalarField& a, const ScalarField& b);

/// Arithmetic average of the two adjacent cells on interior faces, zero on
/// boundary-normal faces.
VectorField interpolate_to_faces(const ScalarField& s);

/// |grad s| at cell centers, each component averaged from the interior faces
/// bounding the cell (a single face next to the wall).
ScalarField gradient_magnitude(const ScalarField& s);

/// Largest |divergence(v)| over cells.
double max_abs_divergence(const VectorField& v);

/// Square root of inner(v, v).
double l2_norm(const VectorField& v);

}  // namespace kss
