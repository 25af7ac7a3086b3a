#ifndef ADINSP_GLOBAL_TSP_HPP_
#define ADINSP_GLOBAL_TSP_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "adinsp/global/viewpoints.hpp"

namespace adinsp {

struct SaTspOptions {
    double cooling{0.995};
    int iterations_per_node{200};
    bool record_trace{false};
};

/// Ordered visit of a plan's valid viewpoints: an open path from the start position (no return leg).
struct Tour {
    std::vector<std::size_t> order;  // indices into ViewPlan::viewpoints
    double length{0.0};
    double initial_length{0.0};      // nearest-neighbour construction
    std::vector<double> best_trace;  // best-so-far cost per annealing iteration

    std::size_t size() const { return order.size(); }
};

namespace detail {

inline double open_path_cost(const Vec3& start, const std::vector<Vec3>& pts, const std::vector<std::size_t>& perm) {
    if (perm.empty()) return 0.0;
    double c = (pts[perm.front()] - start).norm();
    for (std::size_t i = 1; i < perm.size(); ++i) c += (pts[perm[i]] - pts[perm[i - 1]]).norm();
    return c;
}

inline std::vector<std::size_t> nearest_neighbour_order(const Vec3& start, const std::vector<Vec3>& pts) {
    std::vector<std::size_t> order;
    std::vector<bool> used(pts.size(), false);
    Vec3 at = start;
    for (std::size_t step = 0; step < pts.size(); ++step) {
        std::size_t best = pts.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (used[i]) continue;
            const double d = (pts[i] - at).norm();
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        used[best] = true;
        order.push_back(best);
        at = pts[best];
    }
    return order;
}

}  // namespace detail

/// Open-path TSP over `points` from `start` by simulated annealing.
///
/// Starts from the nearest-neighbour order, T0 = mean pairwise distance, geometric cooling, 200 n
/// iterations of 2-opt reversals or single-point moves with Metropolis acceptance. Returns the best
/// order seen, so the result is never worse than the initial construction. Fully determined by `seed`.
inline Tour solve_open_tsp(const std::vector<Vec3>& points, const Vec3& start, std::uint64_t seed,
                           const SaTspOptions& opts = {}) {
    Tour tour;
    const std::size_t n = points.size();
    if (n == 0) return tour;
    std::vector<std::size_t> cur = detail::nearest_neighbour_order(start, points);
    double cur_cost = detail::open_path_cost(start, points, cur);
    tour.initial_length = cur_cost;
    std::vector<std::size_t> best = cur;
    double best_cost = cur_cost;

    if (n >= 2) {
        double mean_pair = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j, ++pairs) mean_pair += (points[i] - points[j]).norm();
        double temperature = mean_pair / static_cast<double>(pairs);

        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        const long iterations = static_cast<long>(opts.iterations_per_node) * static_cast<long>(n);
        std::vector<std::size_t> cand;
        for (long it = 0; it < iterations; ++it) {
            std::size_t i = pick(rng), j = pick(rng);
            while (j == i) j = pick(rng);
            cand = cur;
            if (unit(rng) < 0.5) {
                if (i > j) std::swap(i, j);
                std::reverse(cand.begin() + static_cast<long>(i), cand.begin() + static_cast<long>(j) + 1);
            } else {
                const std::size_t moved = cand[i];
                cand.erase(cand.begin() + static_cast<long>(i));
                cand.insert(cand.begin() + static_cast<long>(j), moved);
            }
            const double cand_cost = detail::open_path_cost(start, points, cand);
            const double delta = cand_cost - cur_cost;
            if (delta <= 0.0 || (temperature > 0.0 && unit(rng) < std::exp(-delta / temperature))) {
                cur.swap(cand);
                cur_cost = cand_cost;
                if (cur_cost < best_cost) {
                    best = cur;
                    best_cost = cur_cost;
                }
            }
            temperature *= opts.cooling;
            if (opts.record_trace) tour.best_trace.push_back(best_cost);
        }
    }
    tour.order = std::move(best);
    tour.length = best_cost;
    return tour;
}

/// Tour over the plan's valid viewpoints; `order` indexes the plan.
inline Tour solve_tour_sa_tsp(const ViewPlan& plan, const Vec3& start, std::uint64_t seed,
                              const SaTspOptions& opts = {}) {
    const std::vector<std::size_t> valid = plan.valid_indices();
    if (valid.empty()) throw TaskUnreachable("task " + plan.task_id + ": no valid viewpoint to tour");
    std::vector<Vec3> pts;
    pts.reserve(valid.size());
    for (std::size_t i : valid) pts.push_back(plan.viewpoints[i].position());
    Tour t = solve_open_tsp(pts, start, seed, opts);
    for (auto& idx : t.order) idx = valid[idx];
    return t;
}

/// Tour poses in visiting order.
inline PathSegment tour_poses(const Tour& tour, const ViewPlan& plan) {
    PathSegment out;
    out.reserve(tour.order.size());
    for (std::size_t i : tour.order) out.push_back(plan.viewpoints[i]);
    return out;
}

}  // namespace adinsp

#endif  // ADINSP_GLOBAL_TSP_HPP_
