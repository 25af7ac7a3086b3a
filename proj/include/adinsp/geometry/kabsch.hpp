#ifndef ADINSP_GEOMETRY_KABSCH_HPP_
#define ADINSP_GEOMETRY_KABSCH_HPP_

#include <cmath>
#include <vector>

#include <Eigen/SVD>

#include "adinsp/geometry/types.hpp"

namespace adinsp {

struct KabschResult {
    RigidTransform transform;
    // Covariance rank < 2 (all points coincident or collinear): the rotation is one valid minimizer
    // among many.
    bool degenerate{false};
};

namespace detail {

// Smallest rotation taking unit vector a onto unit vector b.
inline Mat3 minimal_rotation(const Vec3& a, const Vec3& b) {
    const Vec3 axis = a.cross(b);
    const double s = axis.norm();
    const double c = a.dot(b);
    if (s < 1e-12) {
        if (c > 0.0) return Mat3::Identity();
        // Antiparallel: half turn about any axis orthogonal to a, preferring world z.
        Vec3 ortho = Vec3::UnitZ() - a.dot(Vec3::UnitZ()) * a;
        if (ortho.norm() < 1e-6) ortho = Vec3::UnitX() - a.dot(Vec3::UnitX()) * a;
        return Eigen::AngleAxisd(std::numbers::pi, ortho.normalized()).toRotationMatrix();
    }
    return Eigen::AngleAxisd(std::atan2(s, c), axis / s).toRotationMatrix();
}

}  // namespace detail

/// Least-squares rigid transform taking source[i] onto target[i] (index-wise correspondence).
///
/// Centered cross-covariance H = sum (s_i - s_c)(t_i - t_c)^T, H = U S V^T, R = V diag(1, 1, d) U^T with
/// d = sign(det(V U^T)) so that det(R) = +1 even for mirrored inputs. When H has rank < 2 the rotation is
/// only pinned along the dominant direction; we return the smallest rotation aligning the principal
/// directions and flag the result as degenerate.
inline KabschResult kabsch_align(const std::vector<Vec3>& source, const std::vector<Vec3>& target) {
    if (source.size() != target.size()) throw GeometryError("kabsch_align: length mismatch");
    if (source.size() < 3) throw GeometryError("kabsch_align: needs at least 3 correspondences");

    const double n = static_cast<double>(source.size());
    Vec3 cs = Vec3::Zero(), ct = Vec3::Zero();
    for (std::size_t i = 0; i < source.size(); ++i) {
        cs += source[i];
        ct += target[i];
    }
    cs /= n;
    ct /= n;

    Mat3 h = Mat3::Zero();
    double spread = 0.0;
    for (std::size_t i = 0; i < source.size(); ++i) {
        const Vec3 s = source[i] - cs;
        const Vec3 t = target[i] - ct;
        h += s * t.transpose();
        spread += s.squaredNorm() + t.squaredNorm();
    }

    Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec3 sigma = svd.singularValues();
    const double tol = 1e-12 * std::max(spread, 1e-300);

    KabschResult out;
    if (sigma(0) <= tol) {
        out.degenerate = true;  // coincident points: translation only
    } else if (sigma(1) <= 1e-9 * sigma(0)) {
        out.degenerate = true;
        out.transform.rotation = detail::minimal_rotation(svd.matrixU().col(0), svd.matrixV().col(0));
    } else {
        const Mat3& u = svd.matrixU();
        const Mat3& v = svd.matrixV();
        Mat3 d = Mat3::Identity();
        d(2, 2) = (v * u.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
        out.transform.rotation = v * d * u.transpose();
    }
    out.transform.translation = ct - out.transform.rotation * cs;
    return out;
}

inline KabschResult kabsch_align(const PathSegment& source, const PathSegment& target) {
    return kabsch_align(positions(source), positions(target));
}

/// Positions map through the transform; yaw turns by the transform's heading change.
inline PathSegment apply_transform(const RigidTransform& t, const PathSegment& path) {
    PathSegment out;
    out.reserve(path.size());
    const double dyaw = t.yaw_angle();
    for (const auto& p : path) out.push_back(ViewPose4::from(t.apply(p.position()), p.psi + dyaw));
    return out;
}

}  // namespace adinsp

#endif  // ADINSP_GEOMETRY_KABSCH_HPP_
