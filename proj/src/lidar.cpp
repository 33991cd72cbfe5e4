#include "vlnav/lidar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vlnav {

PointCloud simulate_lidar(const World& world, const Pose& pose, const SensorParams& sp,
                          double resolution) {
    const int rays = std::max(2, sp.effective_rays(resolution));
    const double half = sp.hfov / 2.0;
    std::vector<Vec2> points;
    points.reserve(static_cast<size_t>(rays));

    for (int i = 0; i < rays; ++i) {
        const double angle =
            pose.theta - half + sp.hfov * static_cast<double>(i) / static_cast<double>(rays - 1);
        const Vec2 dir{std::cos(angle), std::sin(angle)};
        double nearest = std::numeric_limits<double>::infinity();
        for (const Segment& wall : world.walls)
            nearest = std::min(nearest, ray_segment_hit(pose.position(), dir, wall));
        for (const SimObject& obj : world.objects)
            nearest =
                std::min(nearest, ray_circle_hit(pose.position(), dir, obj.position, obj.extent));
        if (nearest <= sp.range)
            points.push_back(pose.position() + dir * nearest);
    }
    return PointCloud(std::move(points));
}

}  // namespace vlnav
