#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vlnav/config.hpp"
#include "vlnav/goal.hpp"
#include "vlnav/world.hpp"

namespace vlnav {

/// The five navigation policies benchmarked against each other. Full runs
/// the complete pipeline; the others disable one capability each:
/// NoInstance drops instance targets, NoCuriosity drops the distance and
/// unknown-area terms, FrontierOnly ranks frontiers nearest-first with no
/// vision input, ImageLevel replaces the angular mixture with one scalar
/// confidence per observation (and has no instance targets).
enum class PolicyId { Full, NoInstance, NoCuriosity, FrontierOnly, ImageLevel };

const char* policy_name(PolicyId p);
bool policy_from_name(const std::string& name, PolicyId& out);
std::vector<PolicyId> all_policies();

struct EpisodeResult {
    bool success = false;
    double path_length = 0.0;
    double shortest_path = 0.0;
    int ticks = 0;
    int first_detection_tick = -1;
    std::vector<Pose> trajectory;
    std::vector<GoalDecision> decision_log;

    double spl() const {
        if (!success || shortest_path <= 0.0) return 0.0;
        return shortest_path / std::max(shortest_path, path_length);
    }
};

/// Hooks for the command-line run: dump occupancy/value PGM pairs every N
/// ticks into out_dir.
struct EpisodeTrace {
    std::string out_dir;
    int dump_maps_every = 0;  // 0 = never
};

/// Geodesic start-to-target-surroundings distance on the fully observed
/// ground-truth grid (success_radius defines the goal region). Returns 0
/// when no route exists.
double ground_truth_shortest_path(const World& world, const RunConfig& cfg);

/// Runs one episode: per tick, lidar -> occupancy update -> detection ->
/// target maintenance -> scoring -> goal selection -> plan -> step. Ends on
/// success (within success_radius of the target after at least one
/// detection), on the path budget (path_budget_factor x shortest), on the
/// tick budget, or when a full turn in place yields no goal.
EpisodeResult run_episode(const World& world, PolicyId policy, const RunConfig& cfg,
                          uint64_t seed, const EpisodeTrace* trace = nullptr);

struct Metrics {
    double sr = 0.0;   // percent
    double spl = 0.0;  // [0,1]
};

/// SR = 100 * successes / N; SPL = mean of per-episode success-weighted
/// shortest/max(shortest, actual). Throws std::invalid_argument on empty
/// input.
Metrics compute_metrics(const std::vector<EpisodeResult>& results);

}  // namespace vlnav
