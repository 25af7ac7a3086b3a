#ifndef ADINSP_GEOMETRY_NEAREST_HPP_
#define ADINSP_GEOMETRY_NEAREST_HPP_

#include <limits>

#include "adinsp/geometry/types.hpp"

namespace adinsp {

struct NearestResult {
    Vec3 point;
    double distance{0.0};
    std::size_t index{0};
};

/// Closest cloud point to q; ties go to the lowest index. Empty cloud means no surface observed.
inline NearestResult nearest_point(const PointCloud& cloud, const Vec3& q) {
    if (cloud.empty()) throw GeometryError("nearest_point: empty cloud");
    std::size_t best = 0;
    double best_sq = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const double d = (cloud.points[i] - q).squaredNorm();
        if (d < best_sq) {
            best_sq = d;
            best = i;
        }
    }
    return {cloud.points[best], std::sqrt(best_sq), best};
}

}  // namespace adinsp

#endif  // ADINSP_GEOMETRY_NEAREST_HPP_
