#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "kss/kernels.hpp"

namespace kss::kernels::omp {
namespace {

// Below this many entries the parallel region costs more than it saves.
constexpr std::ptrdiff_t kParallelMin = 2048;
constexpr std::size_t kBlock = 1024;

struct Strides {
    std::array<std::ptrdiff_t, 3> s;
};

Strides strides_of(std::array<int, 3> shape) {
    return {{static_cast<std::ptrdiff_t>(shape[1]) * shape[2], shape[2], 1}};
}

std::array<int, 3> cells_of(const Grid& g) { return g.cells(); }

/// Deterministic blocked reduction: block partials in parallel, combined in order.
template <class Fn>
double blocked_sum(std::size_t count, Fn&& term) {
    const std::size_t nblocks = (count + kBlock - 1) / kBlock;
    std::vector<double> partial(nblocks, 0.0);
    const auto nb = static_cast<std::ptrdiff_t>(nblocks);
#pragma omp parallel for schedule(static) if (static_cast<std::ptrdiff_t>(count) >= kParallelMin)
    for (std::ptrdiff_t b = 0; b < nb; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
        const std::size_t hi = std::min(count, lo + kBlock);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[b] = s;
    }
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

}  // namespace

void gradient(const Grid& g, std::span<const double> s, ScalarBc bc, Faces out) {
    const auto nc = cells_of(g);
    const auto cs = strides_of(nc);
    const bool neumann = bc == ScalarBc::neumann_zero;
    for (int d = 0; d < g.dim(); ++d) {
        const auto shape = g.face_shape(d);
        const double h = g.spacing(d);
        const int last = nc[d];
        double* o = out[d].data();
        const std::ptrdiff_t n0 = shape[0];
#pragma omp parallel for schedule(static) if (static_cast<std::ptrdiff_t>(g.face_count(d)) >= kParallelMin)
        for (std::ptrdiff_t i = 0; i < n0; ++i)
            for (int j = 0; j < shape[1]; ++j)
                for (int k = 0; k < shape[2]; ++k) {
                    const int along = d == 0 ? static_cast<int>(i) : d == 1 ? j : k;
                    const std::size_t f = g.face_index(d, static_cast<int>(i), j, k);
                    if (along == 0) {
                        const double c = s[g.index(static_cast<int>(i), j, k)];
                        o[f] = neumann ? 0.0 : (c - (-c)) / h;
                    } else if (along == last) {
                        const std::ptrdiff_t lo =
                            static_cast<std::ptrdiff_t>(g.index(static_cast<int>(i) - (d == 0),
                                                                j - (d == 1), k - (d == 2)));
                        const double c = s[lo];
                        o[f] = neumann ? 0.0 : ((-c) - c) / h;
                    } else {
                        const std::size_t hi = g.index(static_cast<int>(i), j, k);
                        o[f] = (s[hi] - s[hi - cs.s[d]]) / h;
                    }
                }
    }
}

void divergence(const Grid& g, ConstFaces v, std::span<double> out) {
    const auto nc = cells_of(g);
    const int dim = g.dim();
    std::array<Strides, 3> fs;
    for (int d = 0; d < dim; ++d) fs[d] = strides_of(g.face_shape(d));
    const std::ptrdiff_t n0 = nc[0];
#pragma omp parallel for schedule(static) if (static_cast<std::ptrdiff_t>(g.cell_count()) >= kParallelMin)
    for (std::ptrdiff_t i = 0; i < n0; ++i)
        for (int j = 0; j < nc[1]; ++j)
            for (int k = 0; k < nc[2]; ++k) {
                double acc = 0.0;
                for (int d = 0; d < dim; ++d) {
                    const std::size_t lo = g.face_index(d, static_cast<int>(i), j, k);
                    acc += (v[d][lo + fs[d].s[d]] - v[d][lo]) / g.spacing(d);
                }
                out[g.index(static_cast<int>(i), j, k)] = acc;
            }
}

void laplacian(const Grid& g, std::span<const double> s, ScalarBc bc, std::span<double> out) {
    const auto nc = cells_of(g);
    const auto cs = strides_of(nc);
    const int dim = g.dim();
    const double sign = bc == ScalarBc::neumann_zero ? 1.0 : -1.0;
    const std::ptrdiff_t n0 = nc[0];
#pragma omp parallel for schedule(static) if (static_cast<std::ptrdiff_t>(g.cell_count()) >= kParallelMin)
    for (std::ptrdiff_t i = 0; i < n0; ++i)
        for (int j = 0; j < nc[1]; ++j)
            for (int k = 0; k < nc[2]; ++k) {
                const std::array<int, 3> at{static_cast<int>(i), j, k};
                const std::size_t c = g.index(at[0], j, k);
                const double sc = s[c];
                double acc = 0.0;
                for (int d = 0; d < dim; ++d) {
                    const double h = g.spacing(d);
                    const double hi = at[d] + 1 < nc[d] ? s[c + cs.s[d]] : sign * sc;
                    const double lo = at[d] > 0 ? s[c - cs.s[d]] : sign * sc;
                    const double up = (hi - sc) / h;
                    const double dn = (sc - lo) / h;
                    acc += (up - dn) / h;
                }
                out[c] = acc;
            }
}

void vector_laplacian(const Grid& g, ConstFaces u, VectorBc bc, Faces out) {
    const auto nc = cells_of(g);
    const int dim = g.dim();
    const double ghost_sign = bc == VectorBc::dirichlet_zero ? -1.0 : 1.0;
    for (int d = 0; d < dim; ++d) {
        const auto shape = g.face_shape(d);
        const auto fs = strides_of(shape);
        const double* src = u[d].data();
        double* o = out[d].data();
        const std::ptrdiff_t n0 = shape[0];
#pragma omp parallel for schedule(static) if (static_cast<std::ptrdiff_t>(g.face_count(d)) >= kParallelMin)
        for (std::ptrdiff_t i = 0; i < n0; ++i)
            for (int j = 0; j < shape[1]; ++j)
                for (int k = 0; k < shape[2]; ++k) {
                    const std::array<int, 3> at{static_cast<int>(i), j, k};
                    const std::size_t f = g.face_index(d, at[0], j, k);
                    if (at[d] == 0 || at[d] == nc[d]) {
                        o[f] = 0.0;
                        continue;
                    }
                    const double c = src[f];
                    double acc = 0.0;
                    for (int e = 0; e < dim; ++e) {
                        const double h = g.spacing(e);
                        double hi, lo;
                        if (e == d) {
                            hi = src[f + fs.s[e]];
                            lo = src[f - fs.s[e]];
                        } else {
                            hi = at[e] + 1 < nc[e] ? src[f + fs.s[e]] : ghost_sign * c;
                            lo = at[e] > 0 ? src[f - fs.s[e]] : ghost_sign * c;
                        }
                        const double up = (hi - c) / h;
                        const double dn = (c - lo) / h;
                        acc += (up - dn) / h;
                    }
                    o[f] = acc;
                }
    }
}

void density_flux(const Grid& g, std::span<const double> n, std::span<const double> c,
                  ConstFaces u, const SensitivityLaw& law, Faces out) {
    const auto nc = cells_of(g);
    const auto cs = strides_of(nc);
    for (int d = 0; d < g.dim(); ++d) {
        const auto shape = g.face_shape(d);
        const double h = g.spacing(d);
        const double* vel = u[d].empty() ? nullptr : u[d].data();
        double* o = out[d].data();
        const std::ptrdiff_t n0 = shape[0];
#pragma omp parallel for schedule(static) if (static_cast<std::ptrdiff_t>(g.face_count(d)) >= kParallelMin)
        for (std::ptrdiff_t i = 0; i < n0; ++i)
            for (int j = 0; j < shape[1]; ++j)
                for (int k = 0; k < shape[2]; ++k) {
                    const std::array<int, 3> at{static_cast<int>(i), j, k};
                    const std::size_t f = g.face_index(d, at[0], j, k);
                    if (at[d] == 0 || at[d] == nc[d]) {
                        o[f] = 0.0;
                        continue;
                    }
                    const std::size_t hi = g.index(at[0], j, k);
                    const std::size_t lo = hi - cs.s[d];
                    const double v = law(0.5 * (n[lo] + n[hi])) * ((c[hi] - c[lo]) / h) +
                                     (vel ? vel[f] : 0.0);
                    const double upwind = v > 0.0 ? n[lo] : n[hi];
                    o[f] = -((n[hi] - n[lo]) / h) + v * upwind;
                }
    }
}

void advective_flux(const Grid& g, std::span<const double> q, ConstFaces u, Faces out) {
    const auto nc = cells_of(g);
    const auto cs = strides_of(nc);
    for (int d = 0; d < g.dim(); ++d) {
        const auto shape = g.face_shape(d);
        const double* vel = u[d].empty() ? nullptr : u[d].data();
        double* o = out[d].data();
        const std::ptrdiff_t n0 = shape[0];
#pragma omp parallel for schedule(static) if (static_cast<std::ptrdiff_t>(g.face_count(d)) >= kParallelMin)
        for (std::ptrdiff_t i = 0; i < n0; ++i)
            for (int j = 0; j < shape[1]; ++j)
                for (int k = 0; k < shape[2]; ++k) {
                    const std::array<int, 3> at{static_cast<int>(i), j, k};
                    const std::size_t f = g.face_index(d, at[0], j, k);
                    if (!vel || at[d] == 0 || at[d] == nc[d]) {
                        o[f] = 0.0;
                        continue;
                    }
                    const std::size_t hi = g.index(at[0], j, k);
                    const double v = vel[f];
                    o[f] = v * (v > 0.0 ? q[hi - cs.s[d]] : q[hi]);
                }
    }
}

double max_face_speed(const Grid& g, std::span<const double> n, std::span<const double> c,
                      ConstFaces u, const SensitivityLaw& law) {
    const auto nc = cells_of(g);
    const auto cs = strides_of(nc);
    double m = 0.0;
    for (int d = 0; d < g.dim(); ++d) {
        const auto shape = g.face_shape(d);
        const double h = g.spacing(d);
        const double* vel = u[d].empty() ? nullptr : u[d].data();
        const std::ptrdiff_t n0 = shape[0];
#pragma omp parallel for schedule(static) reduction(max : m) if (static_cast<std::ptrdiff_t>(g.face_count(d)) >= kParallelMin)
        for (std::ptrdiff_t i = 0; i < n0; ++i)
            for (int j = 0; j < shape[1]; ++j)
                for (int k = 0; k < shape[2]; ++k) {
                    const std::array<int, 3> at{static_cast<int>(i), j, k};
                    if (at[d] == 0 || at[d] == nc[d]) continue;
                    const std::size_t f = g.face_index(d, at[0], j, k);
                    const std::size_t hi = g.index(at[0], j, k);
                    const std::size_t lo = hi - cs.s[d];
                    const double v = law(0.5 * (n[lo] + n[hi])) * ((c[hi] - c[lo]) / h) +
                                     (vel ? vel[f] : 0.0);
                    m = std::max(m, std::abs(v));
                }
    }
    return m;
}

double sum(std::span<const double> x) {
    return blocked_sum(x.size(), [&](std::size_t i) { return x[i]; });
}

double dot(std::span<const double> x, std::span<const double> y) {
    return blocked_sum(x.size(), [&](std::size_t i) { return x[i] * y[i]; });
}

double max_abs(std::span<const double> x) {
    double m = 0.0;
    const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) reduction(max : m) if (n >= kParallelMin)
    for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
    return m;
}

}  // namespace kss::kernels::omp
