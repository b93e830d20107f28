#pragma once

#include <array>
#include <cstddef>

namespace kss {

/// Uniform Cartesian box [0, L_0] x ... x [0, L_{dim-1}] split into cells.
///
/// Storage is row-major with the last axis fastest. In 2D the third axis is
/// inactive and carries a single cell so that every kernel can loop over three
/// indices uniformly.
class Grid {
public:
    Grid() = default;
    /// Throws InvalidParameter unless dim is 2 or 3, every active axis has at
    /// least 4 cells and every length is positive.
    Grid(int dim, std::array<int, 3> cells, std::array<double, 3> lengths);

    static Grid square(int cells, double length = 1.0) {
        return Grid(2, {cells, cells, 1}, {length, length, 1.0});
    }
    static Grid cube(int cells, double length = 1.0) {
        return Grid(3, {cells, cells, cells}, {length, length, length});
    }

    int dim() const { return dim_; }
    int cells(int axis) const { return cells_[axis]; }
    const std::array<int, 3>& cells() const { return cells_; }
    double length(int axis) const { return lengths_[axis]; }
    const std::array<double, 3>& lengths() const { return lengths_; }
    double spacing(int axis) const { return spacing_[axis]; }
    double min_spacing() const;

    std::size_t cell_count() const {
        return static_cast<std::size_t>(cells_[0]) * cells_[1] * cells_[2];
    }
    /// Product of the active spacings.
    double cell_volume() const;
    double volume() const;

    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * cells_[1] + j) * cells_[2] + k;
    }

    /// Shape of the face-centered array for component `axis`: one extra entry
    /// along that axis.
    std::array<int, 3> face_shape(int axis) const {
        auto s = cells_;
        s[axis] += 1;
        return s;
    }
    std::size_t face_count(int axis) const {
        auto s = face_shape(axis);
        return static_cast<std::size_t>(s[0]) * s[1] * s[2];
    }
    std::size_t face_index(int axis, int i, int j, int k) const {
        auto s = face_shape(axis);
        return (static_cast<std::size_t>(i) * s[1] + j) * s[2] + k;
    }

    std::array<double, 3> cell_center(int i, int j, int k) const {
        return {(i + 0.5) * spacing_[0], (j + 0.5) * spacing_[1], (k + 0.5) * spacing_[2]};
    }
    std::array<double, 3> face_center(int axis, int i, int j, int k) const {
        auto x = cell_center(i, j, k);
        x[axis] -= 0.5 * spacing_[axis];
        return x;
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int dim_ = 2;
    std::array<int, 3> cells_{4, 4, 1};
    std::array<double, 3> lengths_{1.0, 1.0, 1.0};
    std::array<double, 3> spacing_{0.25, 0.25, 1.0};
};

}  // namespace kss
