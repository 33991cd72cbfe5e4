#pragma once

#include <optional>
#include <vector>

#include "vlnav/detector.hpp"
#include "vlnav/mapping.hpp"
#include "vlnav/targets.hpp"

namespace vlnav {

struct FrontierCell {
    GridIndex index;
    Vec2 world;  // cell center
};

struct FrontierCluster {
    std::vector<FrontierCell> cells;
    std::vector<Vec2> representatives;
};

/// Frontier predicate: free cell with at least one unknown 8-neighbor.
bool is_frontier_cell(const OccupancyGrid& grid, int col, int row);

/// Frontier cells inside the forward wedge (cell centers tested against the
/// angle and range bounds). Row-major order.
std::vector<FrontierCell> detect_frontier_cells(const OccupancyGrid& grid, const Pose& pose,
                                                const SensorParams& sp);

/// Groups frontier cells into 8-connected components via BFS. Clusters of at
/// most small_threshold cells get a single representative (centroid snapped
/// to the nearest member cell center); larger clusters get additional
/// members sampled at least sample_spacing apart.
std::vector<FrontierCluster> cluster_frontiers(const std::vector<FrontierCell>& cells,
                                               int small_threshold, double sample_spacing);

/// One frontier target per cluster representative, skipping representatives
/// within dedup_radius (one cell) of an existing live frontier target. The
/// stored vl_score is the detection-mixture score at creation time; fixed_vl
/// overrides it (used by the scalar-score and no-vision baselines).
std::vector<TargetPoint> make_frontier_targets(const std::vector<FrontierCluster>& clusters,
                                               const std::vector<DetectionRegion>& regions,
                                               const Pose& pose, const SensorParams& sp,
                                               const TargetPool& pool, double dedup_radius,
                                               int tick,
                                               std::optional<double> fixed_vl = std::nullopt);

/// Drops live frontier targets whose cell lies in the current wedge but no
/// longer satisfies the frontier predicate. Targets outside the wedge are
/// left untouched. Returns the number of targets removed.
int prune_stale_frontier_targets(TargetPool& pool, const OccupancyGrid& grid, const Pose& pose,
                                 const SensorParams& sp);

}  // namespace vlnav
