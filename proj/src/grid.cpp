#include "kss/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kss/error.hpp"

namespace kss {

Grid::Grid(int dim, std::array<int, 3> cells, std::array<double, 3> lengths)
    : dim_(dim), cells_(cells), lengths_(lengths) {
    if (dim != 2 && dim != 3) throw InvalidParameter("grid dimension must be 2 or 3");
    if (dim == 2) {
        cells_[2] = 1;
        lengths_[2] = 1.0;
    }
    for (int d = 0; d < dim; ++d) {
        if (cells_[d] < 4)
            throw InvalidParameter("grid needs at least 4 cells per axis (axis " +
                                   std::to_string(d) + ")");
        if (!(lengths_[d] > 0.0) || !std::isfinite(lengths_[d]))
            throw InvalidParameter("grid length must be positive (axis " + std::to_string(d) +
                                   ")");
    }
    for (int d = 0; d < 3; ++d) spacing_[d] = lengths_[d] / cells_[d];
}

double Grid::min_spacing() const {
    double h = spacing_[0];
    for (int d = 1; d < dim_; ++d) h = std::min(h, spacing_[d]);
    return h;
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dim_; ++d) v *= spacing_[d];
    return v;
}

double Grid::volume() const {
    double v = 1.0;
    for (int d = 0; d < dim_; ++d) v *= lengths_[d];
    return v;
}

}  // namespace kss
