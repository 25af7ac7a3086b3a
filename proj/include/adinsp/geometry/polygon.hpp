#ifndef ADINSP_GEOMETRY_POLYGON_HPP_
#define ADINSP_GEOMETRY_POLYGON_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/SVD>

#include "adinsp/geometry/types.hpp"

namespace adinsp {

inline constexpr double kPlaneTolerance = 1e-6;

/// Simple flat 3D polygon marking the region to inspect.
class PolygonROI {
public:
    PolygonROI() = default;

    /// Throws GeometryError unless the vertices form a simple planar polygon.
    explicit PolygonROI(std::vector<Vec3> vertices, double tol_plane = kPlaneTolerance)
        : vertices_(std::move(vertices)), tol_plane_(tol_plane) {
        validate();
    }

    const std::vector<Vec3>& vertices() const { return vertices_; }
    double tol_plane() const { return tol_plane_; }

    /// Unit normal oriented by vertex winding (right-hand rule).
    const Vec3& normal() const { return normal_; }
    const Vec3& centroid() const { return centroid_; }

    double signed_distance(const Vec3& p) const { return normal_.dot(p - centroid_); }

    /// Projects p onto the polygon plane.
    Vec3 project(const Vec3& p) const { return p - signed_distance(p) * normal_; }

private:
    void validate();

    std::vector<Vec3> vertices_;
    double tol_plane_{kPlaneTolerance};
    Vec3 normal_{Vec3::UnitZ()};
    Vec3 centroid_{Vec3::Zero()};
};

namespace detail {

// Newell's method: area-weighted normal consistent with the winding.
inline Vec3 newell_normal(const std::vector<Vec3>& v) {
    Vec3 n = Vec3::Zero();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec3& a = v[i];
        const Vec3& b = v[(i + 1) % v.size()];
        n.x() += (a.y() - b.y()) * (a.z() + b.z());
        n.y() += (a.z() - b.z()) * (a.x() + b.x());
        n.z() += (a.x() - b.x()) * (a.y() + b.y());
    }
    return n;
}

inline double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

inline bool on_segment2(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b, double eps) {
    const Eigen::Vector2d ab = b - a;
    const double len = ab.norm();
    if (len < eps) return (p - a).norm() <= eps;
    if (std::abs(cross2(ab, p - a)) / len > eps) return false;
    const double t = ab.dot(p - a) / (len * len);
    return t >= -eps / len && t <= 1.0 + eps / len;
}

inline bool segments_intersect2(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2, const Eigen::Vector2d& q1,
                                const Eigen::Vector2d& q2, double eps) {
    const double d1 = cross2(q2 - q1, p1 - q1);
    const double d2 = cross2(q2 - q1, p2 - q1);
    const double d3 = cross2(p2 - p1, q1 - p1);
    const double d4 = cross2(p2 - p1, q2 - p1);
    if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)))
        return true;
    return on_segment2(p1, q1, q2, eps) || on_segment2(p2, q1, q2, eps) || on_segment2(q1, p1, p2, eps) ||
           on_segment2(q2, p1, p2, eps);
}

}  // namespace detail

/// In-plane orthonormal frame of a polygon: `horizontal` is world-horizontal projected into the plane
/// (falls back to the principal vertex axis for horizontal polygons), `vertical` completes it upward.
struct PlaneFrame {
    Vec3 origin;
    Vec3 horizontal;
    Vec3 vertical;
    Vec3 normal;

    Eigen::Vector2d to_plane(const Vec3& p) const {
        const Vec3 d = p - origin;
        return {d.dot(horizontal), d.dot(vertical)};
    }
    Vec3 to_world(const Eigen::Vector2d& uv) const { return origin + uv.x() * horizontal + uv.y() * vertical; }
};

inline PlaneFrame plane_frame(const PolygonROI& roi) {
    const Vec3 up = Vec3::UnitZ();
    const Vec3& n = roi.normal();
    PlaneFrame f{roi.centroid(), Vec3::Zero(), Vec3::Zero(), n};
    const Vec3 h = n.cross(up);
    if (h.norm() > 1e-6) {
        f.horizontal = h.normalized();
        f.vertical = n.cross(f.horizontal).normalized();
        if (f.vertical.dot(up) < 0.0) f.vertical = -f.vertical;
        return f;
    }
    // Horizontal polygon: principal axes of the vertex set.
    Eigen::MatrixXd pts(roi.vertices().size(), 3);
    for (std::size_t i = 0; i < roi.vertices().size(); ++i) pts.row(i) = (roi.vertices()[i] - roi.centroid()).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(pts, Eigen::ComputeThinV);
    Vec3 major = svd.matrixV().col(0);
    major = (major - major.dot(n) * n).normalized();
    if (major.x() + 1e-12 < 0.0 || (std::abs(major.x()) <= 1e-12 && major.y() < 0.0)) major = -major;
    f.horizontal = major;
    f.vertical = n.cross(major).normalized();
    return f;
}

inline void PolygonROI::validate() {
    if (vertices_.size() < 3) throw GeometryError("polygon needs at least 3 vertices");
    for (const auto& v : vertices_)
        if (!is_finite(v)) throw GeometryError("polygon vertex is not finite");
    const Vec3 n = detail::newell_normal(vertices_);
    double scale = 0.0;
    for (const auto& v : vertices_) scale = std::max(scale, (v - vertices_.front()).norm());
    if (n.norm() <= 1e-12 * std::max(1.0, scale * scale)) throw GeometryError("degenerate polygon (collinear vertices)");
    normal_ = n.normalized();
    centroid_ = Vec3::Zero();
    for (const auto& v : vertices_) centroid_ += v;
    centroid_ /= static_cast<double>(vertices_.size());
    for (const auto& v : vertices_)
        if (std::abs(normal_.dot(v - centroid_)) > tol_plane_) throw GeometryError("polygon vertices are not coplanar");

    const PlaneFrame f = plane_frame(*this);
    std::vector<Eigen::Vector2d> uv;
    uv.reserve(vertices_.size());
    for (const auto& v : vertices_) uv.push_back(f.to_plane(v));
    const std::size_t m = uv.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == m - 1);
            if (adjacent) continue;
            if (detail::segments_intersect2(uv[i], uv[(i + 1) % m], uv[j], uv[(j + 1) % m], 1e-12))
                throw GeometryError("polygon is self-intersecting");
        }
    }
}

inline Vec3 polygon_normal(const PolygonROI& roi) { return roi.normal(); }

/// Boundary points count as inside. The query must lie on the polygon plane.
inline bool point_in_polygon(const PolygonROI& roi, const Vec3& p) {
    if (std::abs(roi.signed_distance(p)) > roi.tol_plane()) throw GeometryError("query point is off the polygon plane");
    const PlaneFrame f = plane_frame(roi);
    const Eigen::Vector2d q = f.to_plane(p);
    const auto& vs = roi.vertices();
    const std::size_t m = vs.size();
    constexpr double eps = 1e-9;
    bool inside = false;
    for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
        const Eigen::Vector2d a = f.to_plane(vs[i]);
        const Eigen::Vector2d b = f.to_plane(vs[j]);
        if (detail::on_segment2(q, a, b, eps)) return true;
        if ((a.y() > q.y()) != (b.y() > q.y())) {
            const double x_cross = a.x() + (q.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
            if (q.x() < x_cross) inside = !inside;
        }
    }
    return inside;
}

}  // namespace adinsp

#endif  // ADINSP_GEOMETRY_POLYGON_HPP_
