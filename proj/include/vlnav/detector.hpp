#pragma once

#include <string>
#include <vector>

#include "vlnav/mapping.hpp"
#include "vlnav/rng.hpp"
#include "vlnav/targets.hpp"

namespace vlnav {

struct World;  // world.hpp

/// One component of the angular detection mixture: mean offset within the
/// FOV, angular spread, and a confidence weight.
struct DetectionRegion {
    double mu = 0.0;
    double sigma = 0.1;
    double alpha = 0.0;
};

/// A detector report: estimated global position plus confidence.
struct InstanceCandidate {
    double qx = 0.0;
    double qy = 0.0;
    double confidence = 0.0;
};

struct DetectorParams {
    double tau_det = 0.5;       // gate: keep candidates with confidence strictly above
    double sigma_det = 0.1;     // angular spread of every detection region
    double sigma_pos = 0.1;     // position noise on candidate centers (meters)
    double sigma_conf = 0.02;   // confidence noise
    double range = 10.0;        // hard detection range (wedge gate)
    double dmax = 20.0;         // falloff scale: confidence fades linearly toward d_max
};

struct DetectorOutput {
    std::vector<DetectionRegion> regions;
    std::vector<InstanceCandidate> candidates;
    bool saw_target = false;  // a detection of the ground-truth target was emitted
};

/// Synthetic prompt-conditioned detector over ground-truth objects. An object
/// is reported when its label matches the prompt, it lies inside the forward
/// wedge within detection range, and no wall blocks the line of sight.
/// Confidence = base_conf * cos^2(offset*pi/hfov) * max(0, 1 - d/d_max),
/// plus noise, clamped to [0,1].
DetectorOutput synthetic_detect(const World& world, const Pose& pose, const SensorParams& sp,
                                const DetectorParams& dp, const std::string& prompt_label,
                                Rng& rng);

/// Keeps candidates with confidence strictly above tau_det, preserving order.
std::vector<InstanceCandidate> gate_candidates(const std::vector<InstanceCandidate>& cands,
                                               double tau_det);

/// Voxel-grid filter: bins anchored at the world origin; per non-empty bin
/// the highest-confidence candidate survives (ties keep the earliest).
std::vector<InstanceCandidate> voxel_downsample(const std::vector<InstanceCandidate>& cands,
                                                double voxel);

/// One instance target per candidate (vl_score = confidence), skipping
/// candidates within dedup_radius of a live instance target or a tombstone.
std::vector<TargetPoint> make_instance_targets(const std::vector<InstanceCandidate>& cands,
                                               const TargetPool& pool, double dedup_radius,
                                               int tick);

}  // namespace vlnav
