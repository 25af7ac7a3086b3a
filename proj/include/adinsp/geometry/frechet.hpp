#ifndef ADINSP_GEOMETRY_FRECHET_HPP_
#define ADINSP_GEOMETRY_FRECHET_HPP_

#include <algorithm>
#include <vector>

#include "adinsp/geometry/types.hpp"

namespace adinsp {

/// Discrete Frechet distance between two point sequences via the O(|a||b|) coupling table.
inline double discrete_frechet(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    if (a.empty() || b.empty()) throw GeometryError("discrete_frechet: empty path");
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    // Rolling rows: prev[j] holds the coupling value for (i-1, j).
    std::vector<double> prev(m), cur(m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double d = (a[i] - b[j]).norm();
            double reach;
            if (i == 0 && j == 0)
                reach = d;
            else if (i == 0)
                reach = std::max(cur[j - 1], d);
            else if (j == 0)
                reach = std::max(prev[0], d);
            else
                reach = std::max(std::min({prev[j], prev[j - 1], cur[j - 1]}), d);
            cur[j] = reach;
        }
        std::swap(prev, cur);
    }
    return prev[m - 1];
}

/// Positions only; yaw does not participate.
inline double discrete_frechet(const PathSegment& a, const PathSegment& b) {
    return discrete_frechet(positions(a), positions(b));
}

}  // namespace adinsp

#endif  // ADINSP_GEOMETRY_FRECHET_HPP_
