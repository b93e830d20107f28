#pragma once

#include <array>
#include <span>
#include <vector>

#include "kss/grid.hpp"

namespace kss {

enum class ScalarBc { neumann_zero, dirichlet_zero };

/// Boundary treatment for face-centered vectors. Both tags pin the
/// boundary-normal component to zero; they differ in the tangential ghost
/// value used by the vector Laplacian (negated for no-slip, mirrored for
/// flux_zero).
enum class VectorBc { dirichlet_zero, flux_zero };

/// Cell-centered scalar.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid& grid, ScalarBc bc = ScalarBc::neumann_zero, double value = 0.0)
        : grid_(grid), bc_(bc), values_(grid.cell_count(), value) {}

    const Grid& grid() const { return grid_; }
    ScalarBc bc() const { return bc_; }
    void set_bc(ScalarBc bc) { bc_ = bc; }

    std::size_t size() const { return values_.size(); }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    double& operator[](std::size_t c) { return values_[c]; }
    double operator[](std::size_t c) const { return values_[c]; }
    double& at(int i, int j, int k = 0) { return values_[grid_.index(i, j, k)]; }
    double at(int i, int j, int k = 0) const { return values_[grid_.index(i, j, k)]; }

    /// Samples `fn(x, y, z)` at cell centers.
    template <class Fn>
    static ScalarField sample(const Grid& grid, Fn&& fn, ScalarBc bc = ScalarBc::neumann_zero) {
        ScalarField s(grid, bc);
        for (int i = 0; i < grid.cells(0); ++i)
            for (int j = 0; j < grid.cells(1); ++j)
                for (int k = 0; k < grid.cells(2); ++k) {
                    auto x = grid.cell_center(i, j, k);
                    s.at(i, j, k) = fn(x[0], x[1], x[2]);
                }
        return s;
    }

    bool all_finite() const;
    double min() const;
    double max() const;

    friend bool operator==(const ScalarField&, const ScalarField&) = default;

private:
    Grid grid_;
    ScalarBc bc_ = ScalarBc::neumann_zero;
    std::vector<double> values_;
};

/// Face-centered (MAC) vector: component d lives on faces normal to axis d.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(const Grid& grid, VectorBc bc = VectorBc::dirichlet_zero);

    const Grid& grid() const { return grid_; }
    VectorBc bc() const { return bc_; }
    void set_bc(VectorBc bc) { bc_ = bc; }

    std::span<double> component(int axis) { return comps_[axis]; }
    std::span<const double> component(int axis) const { return comps_[axis]; }

    double& at(int axis, int i, int j, int k = 0) {
        return comps_[axis][grid_.face_index(axis, i, j, k)];
    }
    double at(int axis, int i, int j, int k = 0) const {
        return comps_[axis][grid_.face_index(axis, i, j, k)];
    }

    /// Samples `fn(axis, x, y, z)` at every face of every active axis.
    /// Boundary-normal faces are left at zero.
    template <class Fn>
    static VectorField sample_interior(const Grid& grid, Fn&& fn,
                                       VectorBc bc = VectorBc::dirichlet_zero) {
        VectorField v(grid, bc);
        for (int d = 0; d < grid.dim(); ++d) {
            auto s = grid.face_shape(d);
            for (int i = 0; i < s[0]; ++i)
                for (int j = 0; j < s[1]; ++j)
                    for (int k = 0; k < s[2]; ++k) {
                        const int along = d == 0 ? i : d == 1 ? j : k;
                        if (along == 0 || along == grid.cells(d)) continue;
                        auto x = grid.face_center(d, i, j, k);
                        v.at(d, i, j, k) = fn(d, x[0], x[1], x[2]);
                    }
        }
        return v;
    }

    /// Zeroes every boundary-normal face value.
    void clear_boundary_normals();
    bool all_finite() const;
    /// Largest |value| over all components.
    double max_abs() const;

    friend bool operator==(const VectorField&, const VectorField&) = default;

private:
    Grid grid_;
    VectorBc bc_ = VectorBc::dirichlet_zero;
    std::array<std::vector<double>, 3> comps_;
};

}  // namespace kss
