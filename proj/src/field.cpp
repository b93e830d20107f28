#include "kss/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kss {

bool ScalarField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::min() const {
    return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

double ScalarField::max() const {
    return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

VectorField::VectorField(const Grid& grid, VectorBc bc) : grid_(grid), bc_(bc) {
    for (int d = 0; d < grid.dim(); ++d) comps_[d].assign(grid.face_count(d), 0.0);
}

void VectorField::clear_boundary_normals() {
    for (int d = 0; d < grid_.dim(); ++d) {
        auto s = grid_.face_shape(d);
        const int last = grid_.cells(d);
        for (int i = 0; i < s[0]; ++i)
            for (int j = 0; j < s[1]; ++j)
                for (int k = 0; k < s[2]; ++k) {
                    const int along = d == 0 ? i : d == 1 ? j : k;
                    if (along == 0 || along == last) at(d, i, j, k) = 0.0;
                }
    }
}

bool VectorField::all_finite() const {
    for (int d = 0; d < grid_.dim(); ++d)
        for (double v : comps_[d])
            if (!std::isfinite(v)) return false;
    return true;
}

double VectorField::max_abs() const {
    double m = 0.0;
    for (int d = 0; d < grid_.dim(); ++d)
        for (double v : comps_[d]) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace kss
