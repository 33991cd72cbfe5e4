#pragma once

#include "vlnav/mapping.hpp"
#include "vlnav/world.hpp"

namespace vlnav {

/// Casts effective_rays(resolution) rays across the forward wedge against
/// ground-truth wall segments and object footprints; every hit within range
/// yields one cloud point at the hit location. resolution only sets the ray
/// count when sp.n_rays == 0.
PointCloud simulate_lidar(const World& world, const Pose& pose, const SensorParams& sp,
                          double resolution);

}  // namespace vlnav
