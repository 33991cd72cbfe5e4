#pragma once

#include <stdexcept>
#include <string>

#include "vlnav/detector.hpp"
#include "vlnav/mapping.hpp"
#include "vlnav/scoring.hpp"

namespace vlnav {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every tunable in one place. Defaults are the documented values; a JSON
/// config file may override any subset and unknown keys are rejected.
struct RunConfig {
    // occupancy map + sensor
    double resolution = 0.1;
    double hfov = 2.0943951023931953;  // 120 deg
    double range = 5.0;
    int n_rays = 0;  // 0 = derived from resolution
    double inflation_radius = 0.1;
    int chunk = 32;

    // frontier detection
    int small_threshold = 20;
    double sample_spacing = 1.0;

    // detector / instance targets
    double tau_det = 0.5;
    double sigma_det = 0.1;
    double sigma_pos = 0.1;
    double sigma_conf = 0.02;
    double detection_range = 10.0;
    double falloff_dmax = 20.0;
    double voxel = 0.5;
    double dedup_radius = 0.5;

    // scoring
    double w_dist = 0.3;
    double w_vl = 0.7;
    double k_unknown = 2.0;
    double unknown_bfs_radius = 2.5;

    // goal selection
    double delta_reached = 0.5;

    // planner / motion
    double unknown_penalty = 1.5;
    double step_len = 0.1;
    double rot_step = 0.2;  // rad/tick turned in place while goal-less
    int stuck_window = 30;
    double min_progress = 0.05;

    // episode
    double success_radius = 1.0;
    double path_budget_factor = 6.0;
    int tick_budget = 10000;

    SensorParams sensor_params() const {
        SensorParams sp;
        sp.hfov = hfov;
        sp.range = range;
        sp.inflation_radius = inflation_radius;
        sp.n_rays = n_rays;
        return sp;
    }
    DetectorParams detector_params() const {
        DetectorParams dp;
        dp.tau_det = tau_det;
        dp.sigma_det = sigma_det;
        dp.sigma_pos = sigma_pos;
        dp.sigma_conf = sigma_conf;
        dp.range = detection_range;
        dp.dmax = falloff_dmax;
        return dp;
    }
    ScoreWeights score_weights() const {
        ScoreWeights w;
        w.w_dist = w_dist;
        w.w_vl = w_vl;
        w.k_unknown = k_unknown;
        w.unknown_bfs_radius = unknown_bfs_radius;
        return w;
    }
};

/// Loads overrides from a JSON file onto the defaults. Throws ConfigError
/// naming the offending key for unknown keys, wrong types, or bad values.
RunConfig load_config(const std::string& path);
RunConfig config_from_json_text(const std::string& text, const std::string& origin_name);

/// All keys with their current values, one "key = value" line each.
std::string describe_config(const RunConfig& cfg);

}  // namespace vlnav
