#pragma once

#include <vector>

#include "vlnav/geometry.hpp"

namespace vlnav {

enum class TargetKind { Frontier, Instance };

/// A candidate goal. The vision-language score is assigned once, when the
/// point is created; curiosity terms are evaluated later, at selection time.
struct TargetPoint {
    Vec2 world;
    TargetKind kind = TargetKind::Frontier;
    double vl_score = 0.0;
    double confidence = 0.0;  // instance points only
    int created_tick = 0;
};

/// Live candidate pool plus tombstones for refuted instance detections.
/// Single-writer: mutated only inside the sequential pipeline tick.
struct TargetPool {
    std::vector<TargetPoint> live;
    std::vector<Vec2> tombstones;

    bool near_tombstone(const Vec2& p, double radius) const {
        for (const Vec2& t : tombstones)
            if (distance(t, p) <= radius) return true;
        return false;
    }
};

}  // namespace vlnav
