#include "vlnav/goal.hpp"

#include <algorithm>

namespace vlnav {

namespace {

/// Total order for score ties: nearest to the robot first, oldest second.
bool beats_tie(const TargetPoint& cand, const TargetPoint& best, const Pose& pose) {
    const double dc = distance(cand.world, pose.position());
    const double db = distance(best.world, pose.position());
    if (dc != db) return dc < db;
    return cand.created_tick < best.created_tick;
}

}  // namespace

GoalDecision select_goal(const std::vector<TargetPoint>& instances,
                         const std::vector<std::pair<TargetPoint, ScoreBreakdown>>& frontiers,
                         const Pose& pose, double delta_reached, int tick) {
    GoalDecision decision;
    decision.tick = tick;

    const TargetPoint* best = nullptr;
    double best_score = 0.0;

    // Instances farther than delta_reached, ranked by stored vl score.
    for (const TargetPoint& t : instances) {
        if (distance(t.world, pose.position()) <= delta_reached) continue;
        if (!best || t.vl_score > best_score ||
            (t.vl_score == best_score && beats_tie(t, *best, pose))) {
            best = &t;
            best_score = t.vl_score;
        }
    }
    if (best) {
        decision.goal = best->world;
        decision.source = GoalSource::Instance;
        decision.score = best_score;
        return decision;
    }

    // Frontiers are consulted only when no instance qualified.
    const ScoreBreakdown* best_breakdown = nullptr;
    for (const auto& [t, breakdown] : frontiers) {
        if (distance(t.world, pose.position()) <= delta_reached) continue;
        if (!best || breakdown.s_cvl > best_score ||
            (breakdown.s_cvl == best_score && beats_tie(t, *best, pose))) {
            best = &t;
            best_score = breakdown.s_cvl;
            best_breakdown = &breakdown;
        }
    }
    if (best) {
        decision.goal = best->world;
        decision.source = GoalSource::Frontier;
        decision.score = best_score;
        decision.breakdown = *best_breakdown;
    }
    return decision;
}

std::vector<TargetPoint> mark_reached(TargetPool& pool, const Pose& pose, double delta_reached) {
    std::vector<TargetPoint> reached;
    auto it = pool.live.begin();
    while (it != pool.live.end()) {
        if (distance(it->world, pose.position()) <= delta_reached) {
            reached.push_back(*it);
            it = pool.live.erase(it);
        } else {
            ++it;
        }
    }
    return reached;
}

}  // namespace vlnav
