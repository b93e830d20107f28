// Reference kernels: straightforward loops over a ghost-padded copy of the
// input. Kept simple on purpose; the omp flavour must agree with these.

#include <algorithm>
#include <cmath>
#include <vector>

#include "kss/kernels.hpp"

namespace kss::kernels::serial {
namespace {

/// Cell array with one ghost layer on every active axis.
class Padded {
public:
    Padded(const Grid& g, std::span<const double> s, ScalarBc bc) : g_(g) {
        for (int d = 0; d < 3; ++d) ext_[d] = g.cells(d) + (d < g.dim() ? 2 : 0);
        off_ = {1, 1, g.dim() == 3 ? 1 : 0};
        data_.assign(static_cast<std::size_t>(ext_[0]) * ext_[1] * ext_[2], 0.0);
        for (int i = 0; i < g.cells(0); ++i)
            for (int j = 0; j < g.cells(1); ++j)
                for (int k = 0; k < g.cells(2); ++k) ref(i, j, k) = s[g.index(i, j, k)];
        const double sign = bc == ScalarBc::neumann_zero ? 1.0 : -1.0;
        for (int d = 0; d < g.dim(); ++d) fill_ghosts(d, sign);
    }

    double operator()(int i, int j, int k) const {
        return data_[((static_cast<std::size_t>(i + off_[0])) * ext_[1] + (j + off_[1])) *
                         ext_[2] +
                     (k + off_[2])];
    }

private:
    double& ref(int i, int j, int k) {
        return data_[((static_cast<std::size_t>(i + off_[0])) * ext_[1] + (j + off_[1])) *
                         ext_[2] +
                     (k + off_[2])];
    }

    void fill_ghosts(int d, double sign) {
        const int n = g_.cells(d);
        std::array<int, 3> lo{0, 0, 0}, hi{g_.cells(0), g_.cells(1), g_.cells(2)};
        for (int e = 0; e < g_.dim(); ++e)
            if (e != d) lo[e] = -1, hi[e] = g_.cells(e) + 1;
        for (int a = lo[0]; a < hi[0]; ++a)
            for (int b = lo[1]; b < hi[1]; ++b)
                for (int c = lo[2]; c < hi[2]; ++c) {
                    std::array<int, 3> idx{a, b, c};
                    if (idx[d] != 0) continue;
                    auto in_lo = idx, g_lo = idx, in_hi = idx, g_hi = idx;
                    g_lo[d] = -1;
                    in_hi[d] = n - 1;
                    g_hi[d] = n;
                    ref(g_lo[0], g_lo[1], g_lo[2]) = sign * (*this)(in_lo[0], in_lo[1], in_lo[2]);
                    ref(g_hi[0], g_hi[1], g_hi[2]) = sign * (*this)(in_hi[0], in_hi[1], in_hi[2]);
                }
    }

    Grid g_;
    std::array<int, 3> ext_{};
    std::array<int, 3> off_{};
    std::vector<double> data_;
};

std::array<int, 3> unit(int d) {
    std::array<int, 3> e{0, 0, 0};
    e[d] = 1;
    return e;
}

}  // namespace

void gradient(const Grid& g, std::span<const double> s, ScalarBc bc, Faces out) {
    const Padded p(g, s, bc);
    for (int d = 0; d < g.dim(); ++d) {
        const auto e = unit(d);
        const auto shape = g.face_shape(d);
        const double h = g.spacing(d);
        for (int i = 0; i < shape[0]; ++i)
            for (int j = 0; j < shape[1]; ++j)
                for (int k = 0; k < shape[2]; ++k)
                    out[d][g.face_index(d, i, j, k)] =
                        (p(i, j, k) - p(i - e[0], j - e[1], k - e[2])) / h;
    }
}

void divergence(const Grid& g, ConstFaces v, std::span<double> out) {
    for (int i = 0; i < g.cells(0); ++i)
        for (int j = 0; j < g.cells(1); ++j)
            for (int k = 0; k < g.cells(2); ++k) {
                double acc = 0.0;
                for (int d = 0; d < g.dim(); ++d) {
                    const auto e = unit(d);
                    const double hi = v[d][g.face_index(d, i + e[0], j + e[1], k + e[2])];
                    const double lo = v[d][g.face_index(d, i, j, k)];
                    acc += (hi - lo) / g.spacing(d);
                }
                out[g.index(i, j, k)] = acc;
            }
}

void laplacian(const Grid& g, std::span<const double> s, ScalarBc bc, std::span<double> out) {
    const Padded p(g, s, bc);
    for (int i = 0; i < g.cells(0); ++i)
        for (int j = 0; j < g.cells(1); ++j)
            for (int k = 0; k < g.cells(2); ++k) {
                double acc = 0.0;
                for (int d = 0; d < g.dim(); ++d) {
                    const auto e = unit(d);
                    const double h = g.spacing(d);
                    const double c = p(i, j, k);
                    const double up = (p(i + e[0], j + e[1], k + e[2]) - c) / h;
                    const double dn = (c - p(i - e[0], j - e[1], k - e[2])) / h;
                    acc += (up - dn) / h;
                }
                out[g.index(i, j, k)] = acc;
            }
}

void vector_laplacian(const Grid& g, ConstFaces u, VectorBc bc, Faces out) {
    const double ghost_sign = bc == VectorBc::dirichlet_zero ? -1.0 : 1.0;
    for (int d = 0; d < g.dim(); ++d) {
        const auto shape = g.face_shape(d);
        auto val = [&](std::array<int, 3> idx, std::array<int, 3> at) {
            // Tangential neighbours outside the box come from the ghost rule.
            for (int e = 0; e < g.dim(); ++e) {
                if (e == d) continue;
                if (idx[e] < 0 || idx[e] >= g.cells(e)) {
                    return ghost_sign * u[d][g.face_index(d, at[0], at[1], at[2])];
                }
            }
            return u[d][g.face_index(d, idx[0], idx[1], idx[2])];
        };
        for (int i = 0; i < shape[0]; ++i)
            for (int j = 0; j < shape[1]; ++j)
                for (int k = 0; k < shape[2]; ++k) {
                    const std::array<int, 3> at{i, j, k};
                    const std::size_t f = g.face_index(d, i, j, k);
                    if (at[d] == 0 || at[d] == g.cells(d)) {
                        out[d][f] = 0.0;
                        continue;
                    }
                    double acc = 0.0;
                    const double c = u[d][f];
                    for (int e = 0; e < g.dim(); ++e) {
                        auto up_idx = at, dn_idx = at;
                        ++up_idx[e];
                        --dn_idx[e];
                        const double h = g.spacing(e);
                        const double up = (val(up_idx, at) - c) / h;
                        const double dn = (c - val(dn_idx, at)) / h;
                        acc += (up - dn) / h;
                    }
                    out[d][f] = acc;
                }
    }
}

void density_flux(const Grid& g, std::span<const double> n, std::span<const double> c,
                  ConstFaces u, const SensitivityLaw& law, Faces out) {
    for (int d = 0; d < g.dim(); ++d) {
        const auto e = unit(d);
        const auto shape = g.face_shape(d);
        const double h = g.spacing(d);
        const bool has_u = !u[d].empty();
        for (int i = 0; i < shape[0]; ++i)
            for (int j = 0; j < shape[1]; ++j)
                for (int k = 0; k < shape[2]; ++k) {
                    const std::array<int, 3> at{i, j, k};
                    const std::size_t f = g.face_index(d, i, j, k);
                    if (at[d] == 0 || at[d] == g.cells(d)) {
                        out[d][f] = 0.0;
                        continue;
                    }
                    const std::size_t hi = g.index(i, j, k);
                    const std::size_t lo = g.index(i - e[0], j - e[1], k - e[2]);
                    const double v =
                        law(0.5 * (n[lo] + n[hi])) * ((c[hi] - c[lo]) / h) + (has_u ? u[d][f] : 0.0);
                    const double upwind = v > 0.0 ? n[lo] : n[hi];
                    out[d][f] = -((n[hi] - n[lo]) / h) + v * upwind;
                }
    }
}

void advective_flux(const Grid& g, std::span<const double> q, ConstFaces u, Faces out) {
    for (int d = 0; d < g.dim(); ++d) {
        const auto e = unit(d);
        const auto shape = g.face_shape(d);
        for (int i = 0; i < shape[0]; ++i)
            for (int j = 0; j < shape[1]; ++j)
                for (int k = 0; k < shape[2]; ++k) {
                    const std::array<int, 3> at{i, j, k};
                    const std::size_t f = g.face_index(d, i, j, k);
                    if (at[d] == 0 || at[d] == g.cells(d) || u[d].empty()) {
                        out[d][f] = 0.0;
                        continue;
                    }
                    const double v = u[d][f];
                    const double upwind =
                        v > 0.0 ? q[g.index(i - e[0], j - e[1], k - e[2])] : q[g.index(i, j, k)];
                    out[d][f] = v * upwind;
                }
    }
}

double max_face_speed(const Grid& g, std::span<const double> n, std::span<const double> c,
                      ConstFaces u, const SensitivityLaw& law) {
    double m = 0.0;
    for (int d = 0; d < g.dim(); ++d) {
        const auto e = unit(d);
        const auto shape = g.face_shape(d);
        const double h = g.spacing(d);
        for (int i = 0; i < shape[0]; ++i)
            for (int j = 0; j < shape[1]; ++j)
                for (int k = 0; k < shape[2]; ++k) {
                    const std::array<int, 3> at{i, j, k};
                    if (at[d] == 0 || at[d] == g.cells(d)) continue;
                    const std::size_t f = g.face_index(d, i, j, k);
                    const std::size_t hi = g.index(i, j, k);
                    const std::size_t lo = g.index(i - e[0], j - e[1], k - e[2]);
                    const double v = law(0.5 * (n[lo] + n[hi])) * ((c[hi] - c[lo]) / h) +
                                     (u[d].empty() ? 0.0 : u[d][f]);
                    m = std::max(m, std::abs(v));
                }
    }
    return m;
}

double sum(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace kss::kernels::serial
