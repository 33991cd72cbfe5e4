#include "vlnav/detector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "vlnav/world.hpp"

namespace vlnav {

namespace {

bool line_of_sight(const World& world, const Vec2& from, const Vec2& to) {
    for (const Segment& wall : world.walls)
        if (segments_intersect(from, to, wall)) return false;
    return true;
}

}  // namespace

DetectorOutput synthetic_detect(const World& world, const Pose& pose, const SensorParams& sp,
                                const DetectorParams& dp, const std::string& prompt_label,
                                Rng& rng) {
    DetectorOutput out;
    for (const SimObject& obj : world.objects) {
        if (obj.label != prompt_label) continue;

        const double dx = obj.position.x - pose.x;
        const double dy = obj.position.y - pose.y;
        const double d = std::hypot(dx, dy);
        if (d > dp.range) continue;
        const double offset = normalize_angle(std::atan2(dy, dx) - pose.theta);
        if (std::abs(offset) > sp.hfov / 2.0) continue;
        if (!line_of_sight(world, pose.position(), obj.position)) continue;

        const double angle_falloff = std::pow(std::cos(offset * M_PI / sp.hfov), 2.0);
        const double dist_falloff = std::max(0.0, 1.0 - d / dp.dmax);
        double conf = obj.base_conf * angle_falloff * dist_falloff;
        conf += rng.normal(0.0, dp.sigma_conf);
        conf = std::clamp(conf, 0.0, 1.0);

        out.regions.push_back({offset, dp.sigma_det, conf});
        InstanceCandidate cand;
        cand.qx = obj.position.x + rng.normal(0.0, dp.sigma_pos);
        cand.qy = obj.position.y + rng.normal(0.0, dp.sigma_pos);
        cand.confidence = conf;
        out.candidates.push_back(cand);
        if (obj.is_target) out.saw_target = true;
    }
    return out;
}

std::vector<InstanceCandidate> gate_candidates(const std::vector<InstanceCandidate>& cands,
                                               double tau_det) {
    std::vector<InstanceCandidate> kept;
    for (const InstanceCandidate& c : cands)
        if (c.confidence > tau_det) kept.push_back(c);
    return kept;
}

std::vector<InstanceCandidate> voxel_downsample(const std::vector<InstanceCandidate>& cands,
                                                double voxel) {
    // Bin key anchored at the world origin; first-seen order is preserved so
    // equal-confidence ties keep the earliest candidate.
    std::unordered_map<std::int64_t, std::size_t> bin_winner;
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        const auto bx = static_cast<std::int64_t>(std::floor(cands[i].qx / voxel));
        const auto by = static_cast<std::int64_t>(std::floor(cands[i].qy / voxel));
        const std::int64_t key = (by << 32) ^ (bx & 0xffffffffLL);
        auto it = bin_winner.find(key);
        if (it == bin_winner.end()) {
            bin_winner.emplace(key, i);
            order.push_back(i);
        } else if (cands[i].confidence > cands[it->second].confidence) {
            // Replace in place: output order stays that of the bin's first entry.
            for (std::size_t& slot : order)
                if (slot == it->second) slot = i;
            it->second = i;
        }
    }
    std::vector<InstanceCandidate> kept;
    kept.reserve(order.size());
    for (std::size_t i : order) kept.push_back(cands[i]);
    return kept;
}

std::vector<TargetPoint> make_instance_targets(const std::vector<InstanceCandidate>& cands,
                                               const TargetPool& pool, double dedup_radius,
                                               int tick) {
    std::vector<TargetPoint> out;
    for (const InstanceCandidate& c : cands) {
        const Vec2 p{c.qx, c.qy};
        if (pool.near_tombstone(p, dedup_radius)) continue;
        bool duplicate = false;
        for (const TargetPoint& t : pool.live) {
            if (t.kind != TargetKind::Instance) continue;
            if (distance(t.world, p) <= dedup_radius) {
                duplicate = true;
                break;
            }
        }
        for (const TargetPoint& t : out) {
            if (duplicate) break;
            if (distance(t.world, p) <= dedup_radius) duplicate = true;
        }
        if (duplicate) continue;
        TargetPoint tp;
        tp.world = p;
        tp.kind = TargetKind::Instance;
        tp.vl_score = c.confidence;
        tp.confidence = c.confidence;
        tp.created_tick = tick;
        out.push_back(tp);
    }
    return out;
}

}  // namespace vlnav
