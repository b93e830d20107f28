#include "kss/operators.hpp"

#include <cmath>

#include "kss/error.hpp"
#include "kss/kernels.hpp"

namespace kss {

namespace k = kernels::omp;

VectorField gradient(const ScalarField& s) {
    VectorField out(s.grid(), VectorBc::flux_zero);
    k::gradient(s.grid(), s.values(), s.bc(), kernels::faces(out));
    return out;
}

ScalarField divergence(const VectorField& v) {
    ScalarField out(v.grid());
    k::divergence(v.grid(), kernels::faces(v), out.values());
    return out;
}

ScalarField laplacian(const ScalarField& s) {
    ScalarField out(s.grid(), s.bc());
    k::laplacian(s.grid(), s.values(), s.bc(), out.values());
    return out;
}

VectorField vector_laplacian(const VectorField& v) {
    VectorField out(v.grid(), v.bc());
    k::vector_laplacian(v.grid(), kernels::faces(v), v.bc(), kernels::faces(out));
    return out;
}

double integrate(const ScalarField& s) { return k::sum(s.values()) * s.grid().cell_volume(); }

double lp_norm(const ScalarField& s, double p) {
    if (!(p >= 1.0)) throw InvalidParameter("lp_norm requires p >= 1");
    if (std::isinf(p)) return k::max_abs(s.values());
    const auto vals = s.values();
    std::vector<double> powed(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
        powed[i] = p == 2.0 ? vals[i] * vals[i] : std::pow(std::abs(vals[i]), p);
    const double integral = k::sum(powed) * s.grid().cell_volume();
    return p == 2.0 ? std::sqrt(integral) : std::pow(integral, 1.0 / p);
}

double inner(const VectorField& a, const VectorField& b) {
    double acc = 0.0;
    for (int d = 0; d < a.grid().dim(); ++d) acc += k::dot(a.component(d), b.component(d));
    return acc * a.grid().cell_volume();
}

double inner(const ScalarField& a, const ScalarField& b) {
    return k::dot(a.values(), b.values()) * a.grid().cell_volume();
}

VectorField interpolate_to_faces(const ScalarField& s) {
    const Grid& g = s.grid();
    VectorField out(g, VectorBc::dirichlet_zero);
    for (int d = 0; d < g.dim(); ++d) {
        const auto shape = g.face_shape(d);
        for (int i = 0; i < shape[0]; ++i)
            for (int j = 0; j < shape[1]; ++j)
                for (int kk = 0; kk < shape[2]; ++kk) {
                    const int along = d == 0 ? i : d == 1 ? j : kk;
                    if (along == 0 || along == g.cells(d)) continue;
                    const double hi = s.at(i, j, kk);
                    const double lo = s.at(i - (d == 0), j - (d == 1), kk - (d == 2));
                    out.at(d, i, j, kk) = 0.5 * (lo + hi);
                }
    }
    return out;
}

ScalarField gradient_magnitude(const ScalarField& s) {
    const Grid& g = s.grid();
    const VectorField grad = gradient(s);
    ScalarField out(g);
    for (int i = 0; i < g.cells(0); ++i)
        for (int j = 0; j < g.cells(1); ++j)
            for (int kk = 0; kk < g.cells(2); ++kk) {
                const std::array<int, 3> at{i, j, kk};
                double sq = 0.0;
                for (int d = 0; d < g.dim(); ++d) {
                    const bool has_lo = at[d] > 0;
                    const bool has_hi = at[d] + 1 < g.cells(d);
                    const double lo = grad.at(d, i, j, kk);
                    const double hi = grad.at(d, i + (d == 0), j + (d == 1), kk + (d == 2));
                    const double comp = has_lo && has_hi ? 0.5 * (lo + hi) : has_lo ? lo : hi;
                    sq += comp * comp;
                }
                out.at(i, j, kk) = std::sqrt(sq);
            }
    return out;
}

double max_abs_divergence(const VectorField& v) { return k::max_abs(divergence(v).values()); }

double l2_norm(const VectorField& v) { return std::sqrt(inner(v, v)); }

}  // namespace kss
