#pragma once

#include <optional>
#include <vector>

#include "vlnav/grid.hpp"

namespace vlnav {

/// 8-connected grid path; waypoints are cell centers, cost in meters under
/// the unknown-penalty model.
struct Path {
    std::vector<Vec2> waypoints;
    double cost = 0.0;
};

/// A* over the grid: free cells cost their Euclidean step, unknown cells cost
/// step * unknown_penalty, occupied cells are impassable. An occupied goal
/// cell snaps to the nearest non-occupied cell within 3 cells; an off-grid
/// goal is first clamped to the grid border. Returns nullopt when no path
/// exists (or the start cell is occupied / off-grid).
std::optional<Path> plan_path(const OccupancyGrid& grid, const Vec2& start, const Vec2& goal,
                              double unknown_penalty);

/// Advances the pose step_len meters of arc length along the path polyline
/// (from the projection of the pose onto it). Heading follows the direction
/// of motion.
Pose step_local(const Path& path, const Pose& pose, double step_len);

/// True when net displacement across the most recent `window` pose samples
/// falls below min_progress. Needs at least `window` samples.
bool detect_stuck(const std::vector<Pose>& history, int window, double min_progress);

}  // namespace vlnav
