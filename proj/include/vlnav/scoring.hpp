#pragma once

#include <string>
#include <vector>

#include "vlnav/detector.hpp"
#include "vlnav/grid.hpp"
#include "vlnav/targets.hpp"

namespace vlnav {

struct ScoreWeights {
    double w_dist = 0.3;
    double w_vl = 0.7;
    double k_unknown = 2.0;
    double unknown_bfs_radius = 2.5;  // meters
};

struct ScoreBreakdown {
    double s_vl = 0.0;
    double s_dist = 0.0;
    double ratio = 0.0;
    double s_unknown = 0.0;
    double s_cvl = 0.0;
    bool in_grid = true;
};

/// Bearing of the goal relative to the robot heading, in (-pi, pi].
/// A goal coincident with the robot position yields 0.
double angular_offset(const Vec2& goal, const Pose& pose);

/// cos^2 falloff over the field of view; 0 outside |offset| <= theta_fov/2.
double view_confidence(double delta_theta, double theta_fov);

/// Gaussian-mixture score of a bearing against the detection regions,
/// damped by view confidence.
double vl_score(double delta_theta, const std::vector<DetectionRegion>& regions,
                double theta_fov);

/// 1 / (1 + d): nearer goals score slightly higher.
double distance_score(double d);

/// Fraction of unknown cells among the cells reachable from the goal by a
/// BFS over non-occupied cells (8-connectivity) within the given metric
/// radius. An occupied or out-of-grid goal cell yields 0.
double unknown_ratio(const OccupancyGrid& grid, const Vec2& goal, double radius);

/// 1 - exp(-k * ratio): exponential mapping of the unknown ratio.
double unknown_score(double ratio, double k);

/// Combined score: w_dist * s_dist + w_vl * s_vl * s_unknown.
double cvl_score(double s_vl, double s_dist, double s_unknown, const ScoreWeights& w);

/// Full breakdown for a frontier target: stored vl score, fresh distance and
/// unknown-area terms, combined score. Out-of-grid targets score 0 with
/// in_grid = false.
ScoreBreakdown score_frontier_target(const TargetPoint& target, const OccupancyGrid& grid,
                                     const Pose& pose, const ScoreWeights& w);

/// Renders the per-cell vision-language score (clamped to [0,1]) as a PGM
/// alongside the occupancy export.
void export_value_map(const OccupancyGrid& grid, const Pose& pose,
                      const std::vector<DetectionRegion>& regions, double theta_fov,
                      const std::string& path);

}  // namespace vlnav
