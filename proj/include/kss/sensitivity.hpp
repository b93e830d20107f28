#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace kss {

/// Saturated chemotactic sensitivity S(n) = kappa (n + 1)^(-alpha).
///
/// A tabulated law can replace the prototype: `table` holds (n, S) knots with
/// increasing n, evaluated by linear interpolation and held constant outside
/// the knot range.
struct SensitivityLaw {
    double kappa = 1.0;
    double alpha = 0.0;
    std::vector<std::pair<double, double>> table;

    double operator()(double n) const {
        if (!table.empty()) return tabulated(n);
        if (alpha == 0.0) return kappa;
        return kappa * std::pow(n + 1.0, -alpha);
    }

private:
    double tabulated(double n) const {
        if (n <= table.front().first) return table.front().second;
        if (n >= table.back().first) return table.back().second;
        std::size_t hi = 1;
        while (table[hi].first < n) ++hi;
        const auto [n0, s0] = table[hi - 1];
        const auto [n1, s1] = table[hi];
        return s0 + (s1 - s0) * (n - n0) / (n1 - n0);
    }
};

}  // namespace kss
