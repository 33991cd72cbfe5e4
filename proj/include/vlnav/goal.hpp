#pragma once

#include <optional>
#include <vector>

#include "vlnav/scoring.hpp"
#include "vlnav/targets.hpp"

namespace vlnav {

enum class GoalSource { Instance, Frontier, None };

struct GoalDecision {
    std::optional<Vec2> goal;
    GoalSource source = GoalSource::None;
    double score = 0.0;
    int tick = 0;
    ScoreBreakdown breakdown;  // zeros for instance goals (trace output)
};

/// Instance-first goal selection. Instances farther than delta_reached are
/// ranked by stored vl score; only when none qualifies are frontiers ranked
/// by combined score. Ties break nearest-to-robot, then oldest. Returns a
/// None decision when every candidate is within delta_reached.
GoalDecision select_goal(const std::vector<TargetPoint>& instances,
                         const std::vector<std::pair<TargetPoint, ScoreBreakdown>>& frontiers,
                         const Pose& pose, double delta_reached, int tick);

/// Removes live targets within delta_reached of the pose and returns them;
/// the caller verifies reached instance targets against ground truth.
std::vector<TargetPoint> mark_reached(TargetPool& pool, const Pose& pose, double delta_reached);

}  // namespace vlnav
