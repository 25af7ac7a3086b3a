#ifndef ADINSP_ENV_VOXEL_MAP_HPP_
#define ADINSP_ENV_VOXEL_MAP_HPP_

#include <algorithm>
#include <array>
#include <compare>
#include <cmath>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "adinsp/geometry/io.hpp"
#include "adinsp/geometry/types.hpp"

namespace adinsp {

struct VoxelKey {
    int x{0}, y{0}, z{0};

    int& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }
    int operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }

    friend auto operator<=>(const VoxelKey&, const VoxelKey&) = default;
};

/// Axis-aligned box in world coordinates.
struct AxisBox {
    Vec3 min{Vec3::Zero()};
    Vec3 max{Vec3::Zero()};

    bool contains(const Vec3& p, double eps = 1e-9) const {
        return (p.array() >= min.array() - eps).all() && (p.array() <= max.array() + eps).all();
    }
    /// Euclidean distance from p to the closed box (0 inside).
    double distance(const Vec3& p) const {
        const Vec3 d = (min - p).cwiseMax(p - max).cwiseMax(Vec3::Zero());
        return d.norm();
    }
};

/// Occupancy voxel map. Immutable after construction: a sorted key list plus a dense lookup grid over
/// the occupied bounds.
class VoxelMap {
public:
    static constexpr double kDefaultVoxelSize = 0.1;

    explicit VoxelMap(double voxel_size = kDefaultVoxelSize, Vec3 origin = Vec3::Zero())
        : voxel_size_(voxel_size), origin_(std::move(origin)) {
        if (!(voxel_size_ > 0.0)) throw GeometryError("voxel_size must be positive");
    }

    static VoxelMap from_keys(std::vector<VoxelKey> keys, double voxel_size = kDefaultVoxelSize,
                              Vec3 origin = Vec3::Zero()) {
        VoxelMap m(voxel_size, std::move(origin));
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        m.keys_ = std::move(keys);
        m.build_grid();
        return m;
    }

    static VoxelMap from_points(const std::vector<Vec3>& points, double voxel_size = kDefaultVoxelSize,
                                Vec3 origin = Vec3::Zero()) {
        VoxelMap probe(voxel_size, origin);
        std::vector<VoxelKey> keys;
        keys.reserve(points.size());
        for (const auto& p : points) keys.push_back(probe.key_of(p));
        return from_keys(std::move(keys), voxel_size, std::move(origin));
    }

    double voxel_size() const { return voxel_size_; }
    const Vec3& origin() const { return origin_; }
    const std::vector<VoxelKey>& keys() const { return keys_; }
    std::size_t size() const { return keys_.size(); }
    bool empty() const { return keys_.empty(); }

    /// Points exactly on a voxel face belong to the upper voxel (a 1e-9 voxel nudge absorbs rounding).
    VoxelKey key_of(const Vec3& p) const {
        const Vec3 r = (p - origin_) / voxel_size_;
        return {static_cast<int>(std::floor(r.x() + 1e-9)), static_cast<int>(std::floor(r.y() + 1e-9)),
                static_cast<int>(std::floor(r.z() + 1e-9))};
    }
    Vec3 box_min(const VoxelKey& k) const { return origin_ + voxel_size_ * Vec3(k.x, k.y, k.z); }
    Vec3 box_max(const VoxelKey& k) const { return origin_ + voxel_size_ * Vec3(k.x + 1, k.y + 1, k.z + 1); }
    Vec3 center(const VoxelKey& k) const {
        return origin_ + voxel_size_ * Vec3(k.x + 0.5, k.y + 0.5, k.z + 0.5);
    }
    AxisBox voxel_box(const VoxelKey& k) const { return {box_min(k), box_max(k)}; }

    bool occupied(const VoxelKey& k) const {
        if (keys_.empty()) return false;
        if (k.x < lo_.x || k.y < lo_.y || k.z < lo_.z || k.x > hi_.x || k.y > hi_.y || k.z > hi_.z) return false;
        return grid_[index(k)] != 0;
    }
    bool occupied_at(const Vec3& p) const { return occupied(key_of(p)); }

    /// Inclusive key bounds of the occupied set (meaningless when empty).
    const VoxelKey& key_min() const { return lo_; }
    const VoxelKey& key_max() const { return hi_; }
    AxisBox bounds() const { return {box_min(lo_), box_max(hi_)}; }

    std::vector<Vec3> centers() const {
        std::vector<Vec3> out;
        out.reserve(keys_.size());
        for (const auto& k : keys_) out.push_back(center(k));
        return out;
    }

    friend bool operator==(const VoxelMap& a, const VoxelMap& b) {
        return a.voxel_size_ == b.voxel_size_ && a.origin_ == b.origin_ && a.keys_ == b.keys_;
    }

private:
    std::size_t index(const VoxelKey& k) const {
        return (static_cast<std::size_t>(k.z - lo_.z) * dims_[1] + static_cast<std::size_t>(k.y - lo_.y)) * dims_[0] +
               static_cast<std::size_t>(k.x - lo_.x);
    }

    void build_grid() {
        grid_.clear();
        if (keys_.empty()) return;
        lo_ = hi_ = keys_.front();
        for (const auto& k : keys_) {
            for (int a = 0; a < 3; ++a) {
                lo_[a] = std::min(lo_[a], k[a]);
                hi_[a] = std::max(hi_[a], k[a]);
            }
        }
        for (int a = 0; a < 3; ++a) dims_[a] = static_cast<std::size_t>(hi_[a] - lo_[a] + 1);
        grid_.assign(dims_[0] * dims_[1] * dims_[2], 0);
        for (const auto& k : keys_) grid_[index(k)] = 1;
    }

    double voxel_size_;
    Vec3 origin_;
    std::vector<VoxelKey> keys_;
    VoxelKey lo_{}, hi_{};
    std::array<std::size_t, 3> dims_{0, 0, 0};
    std::vector<std::uint8_t> grid_;
};

/// Voxelizes an xyz file. Parse failures carry the offending line number.
inline VoxelMap load_map(const std::string& path, double voxel_size = VoxelMap::kDefaultVoxelSize,
                         const Vec3& origin = Vec3::Zero()) {
    return VoxelMap::from_points(read_xyz_file(path).points, voxel_size, origin);
}

/// Voxel keys whose centers fall inside the box.
inline std::vector<VoxelKey> keys_in_box(const VoxelMap& frame, const AxisBox& box) {
    std::vector<VoxelKey> out;
    const VoxelKey lo = frame.key_of(box.min - Vec3::Constant(frame.voxel_size()));
    const VoxelKey hi = frame.key_of(box.max + Vec3::Constant(frame.voxel_size()));
    for (int z = lo.z; z <= hi.z; ++z)
        for (int y = lo.y; y <= hi.y; ++y)
            for (int x = lo.x; x <= hi.x; ++x) {
                const VoxelKey k{x, y, z};
                if (box.contains(frame.center(k))) out.push_back(k);
            }
    return out;
}

/// Centers of occupied voxels with at least one free face neighbour.
inline std::vector<Vec3> surface_points(const VoxelMap& map) {
    static constexpr int kOffsets[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    std::vector<Vec3> out;
    for (const auto& k : map.keys()) {
        for (const auto& o : kOffsets) {
            if (!map.occupied({k.x + o[0], k.y + o[1], k.z + o[2]})) {
                out.push_back(map.center(k));
                break;
            }
        }
    }
    return out;
}

}  // namespace adinsp

#endif  // ADINSP_ENV_VOXEL_MAP_HPP_
