#pragma once

#include <stdexcept>
#include <vector>

#include "vlnav/grid.hpp"

namespace vlnav {

/// Merged obstacle cloud in world coordinates. Construction rejects
/// non-finite points.
class PointCloud {
public:
    PointCloud() = default;
    explicit PointCloud(std::vector<Vec2> points) : points_(std::move(points)) {
        for (const Vec2& p : points_)
            if (!std::isfinite(p.x) || !std::isfinite(p.y))
                throw std::invalid_argument("PointCloud: non-finite point");
    }

    const std::vector<Vec2>& points() const { return points_; }
    bool empty() const { return points_.empty(); }
    size_t size() const { return points_.size(); }

private:
    std::vector<Vec2> points_;
};

struct SensorParams {
    double hfov = 2.0943951023931953;  // 120 deg
    double range = 5.0;
    double inflation_radius = 0.1;
    int n_rays = 0;  // 0 = derive from resolution (adjacent ray tips <= 1 cell apart)

    int effective_rays(double resolution) const {
        if (n_rays > 0) return n_rays;
        return static_cast<int>(std::ceil(hfov / (resolution / range)));
    }
};

/// True when the cell center (or any world point) lies in the forward wedge:
/// |angle offset from heading| <= hfov/2 and distance <= range.
inline bool in_wedge(const Vec2& p, const Pose& pose, const SensorParams& sp) {
    const double dx = p.x - pose.x;
    const double dy = p.y - pose.y;
    if (std::hypot(dx, dy) > sp.range) return false;
    const double off = normalize_angle(std::atan2(dy, dx) - pose.theta);
    return std::abs(off) <= sp.hfov / 2.0;
}

// Occupancy update steps, applied in this order by update():
//   1. expand_if_needed   2. clear_stale_obstacles_fov
//   3. mark_new_obstacles 4. perform_raycasting

/// Grows the grid (in whole chunks per side) until every cloud point and the
/// pose are inside. Existing cells are preserved at their world positions.
void expand_if_needed(OccupancyGrid& grid, const PointCloud& cloud, const Pose& pose,
                      int chunk = 32);

/// Re-labels occupied wedge cells as free when no cloud point maps to them.
/// Returns the number of cells changed.
int clear_stale_obstacles_fov(OccupancyGrid& grid, const PointCloud& cloud, const Pose& pose,
                              const SensorParams& sp);

/// Marks the cell of each in-range cloud point occupied, along with every
/// cell whose center is within inflation_radius of that cell's center.
/// Returns the number of cells changed.
int mark_new_obstacles(OccupancyGrid& grid, const PointCloud& cloud, const Pose& pose,
                       const SensorParams& sp);

/// Casts rays across the forward wedge, marking traversed unknown cells free.
/// A ray stops at the first occupied cell. Only cells whose centers satisfy
/// the wedge predicate are modified. Returns the number of cells changed.
int perform_raycasting(OccupancyGrid& grid, const Pose& pose, const SensorParams& sp);

/// Full occupancy update: expand, clear stale, mark obstacles, raycast.
void update(OccupancyGrid& grid, const PointCloud& cloud, const Pose& pose,
            const SensorParams& sp, int chunk = 32);

}  // namespace vlnav
