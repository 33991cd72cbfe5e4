#include "vlnav/episode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "vlnav/detector.hpp"
#include "vlnav/frontier.hpp"
#include "vlnav/lidar.hpp"
#include "vlnav/planner.hpp"
#include "vlnav/rng.hpp"
#include "vlnav/scoring.hpp"

namespace vlnav {

const char* policy_name(PolicyId p) {
    switch (p) {
        case PolicyId::Full: return "full";
        case PolicyId::NoInstance: return "no_instance";
        case PolicyId::NoCuriosity: return "no_curiosity";
        case PolicyId::FrontierOnly: return "frontier_only";
        case PolicyId::ImageLevel: return "image_level";
    }
    return "?";
}

bool policy_from_name(const std::string& name, PolicyId& out) {
    for (PolicyId p : all_policies()) {
        if (name == policy_name(p)) {
            out = p;
            return true;
        }
    }
    return false;
}

std::vector<PolicyId> all_policies() {
    return {PolicyId::Full, PolicyId::NoInstance, PolicyId::NoCuriosity, PolicyId::FrontierOnly,
            PolicyId::ImageLevel};
}

namespace {

struct DijkstraNode {
    double d;
    int flat;
    bool operator>(const DijkstraNode& o) const {
        if (d != o.d) return d > o.d;
        return flat > o.flat;
    }
};

constexpr double kSqrt2 = 1.4142135623730951;

}  // namespace

double ground_truth_shortest_path(const World& world, const RunConfig& cfg) {
    OccupancyGrid grid =
        build_ground_truth_grid(world, cfg.resolution, cfg.inflation_radius);
    auto start = grid.world_to_grid(world.start.position());
    if (!start || grid.at(*start) == CellState::Occupied) return 0.0;

    const int w = grid.width();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(grid.size(), inf);
    std::priority_queue<DijkstraNode, std::vector<DijkstraNode>, std::greater<>> open;
    const int start_flat = start->row * w + start->col;
    dist[start_flat] = 0.0;
    open.push({0.0, start_flat});

    const Vec2 target = world.target().position;
    double best = inf;
    while (!open.empty()) {
        const auto [d, flat] = open.top();
        open.pop();
        if (d > dist[flat]) continue;
        const int col = flat % w, row = flat / w;
        if (distance(grid.cell_center(col, row), target) <= cfg.success_radius) {
            best = d;
            break;  // Dijkstra pops in nondecreasing order
        }
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                if (dr == 0 && dc == 0) continue;
                const int nc = col + dc, nr = row + dr;
                if (!grid.in_bounds(nc, nr)) continue;
                if (grid.at(nc, nr) == CellState::Occupied) continue;
                const double step = cfg.resolution * ((dr != 0 && dc != 0) ? kSqrt2 : 1.0);
                const int nflat = nr * w + nc;
                if (d + step < dist[nflat]) {
                    dist[nflat] = d + step;
                    open.push({d + step, nflat});
                }
            }
        }
    }
    return std::isfinite(best) ? best : 0.0;
}

namespace {

/// Per-policy frontier breakdown. Full/NoInstance/ImageLevel use the whole
/// score; NoCuriosity keeps only the vision term; FrontierOnly ranks by
/// distance alone.
ScoreBreakdown policy_breakdown(PolicyId policy, const TargetPoint& t, const OccupancyGrid& grid,
                                const Pose& pose, const ScoreWeights& weights) {
    switch (policy) {
        case PolicyId::Full:
        case PolicyId::NoInstance:
        case PolicyId::ImageLevel:
            return score_frontier_target(t, grid, pose, weights);
        case PolicyId::NoCuriosity: {
            ScoreBreakdown b;
            b.s_vl = t.vl_score;
            b.s_unknown = 1.0;
            b.s_cvl = weights.w_vl * t.vl_score;
            return b;
        }
        case PolicyId::FrontierOnly: {
            ScoreBreakdown b;
            b.s_dist = distance_score(distance(t.world, pose.position()));
            b.s_cvl = b.s_dist;
            return b;
        }
    }
    return {};
}

bool uses_instance_targets(PolicyId policy) {
    return policy == PolicyId::Full || policy == PolicyId::NoCuriosity;
}

bool uses_detection_regions(PolicyId policy) {
    return policy == PolicyId::Full || policy == PolicyId::NoInstance ||
           policy == PolicyId::NoCuriosity;
}

struct ActiveGoal {
    Vec2 position;
    GoalSource source = GoalSource::None;
    std::optional<Path> route;  // cached plan; refreshed only when invalid
    double best_dist = 0.0;     // closest approach so far (progress watchdog)
    int last_improve = 0;
};

/// True when the cached route can no longer be followed: the robot drifted
/// off it (collision clamps push sideways) or the map now marks a waypoint
/// within lookahead of the robot occupied. Blockage is only checked locally
/// on purpose — distant cells flicker as viewing angles change, and a route
/// invalidated by far-away noise every tick degenerates into per-tick
/// replanning, whose start-cell flip-flops can walk the robot in place.
bool route_blocked(const OccupancyGrid& grid, const Path& route, const Vec2& pos,
                   double max_drift, double lookahead) {
    size_t k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < route.waypoints.size(); ++i) {
        const double d = distance(route.waypoints[i], pos);
        if (d < best) {
            best = d;
            k = i;
        }
    }
    if (best > max_drift) return true;
    double along = 0.0;
    for (size_t i = k; i < route.waypoints.size() && along <= lookahead; ++i) {
        if (i > k) along += distance(route.waypoints[i - 1], route.waypoints[i]);
        const auto idx = grid.world_to_grid(route.waypoints[i]);
        if (!idx || grid.at(*idx) == CellState::Occupied) return true;
    }
    return false;
}

/// Drops the pool entry backing the goal; instance goals leave a tombstone
/// so a refuted detection is not immediately re-created.
void invalidate_goal(TargetPool& pool, const ActiveGoal& goal) {
    for (auto it = pool.live.begin(); it != pool.live.end(); ++it) {
        if (it->world == goal.position) {
            if (it->kind == TargetKind::Instance) pool.tombstones.push_back(it->world);
            pool.live.erase(it);
            return;
        }
    }
    // Entry already gone (e.g. pruned as stale); still tombstone instances.
    if (goal.source == GoalSource::Instance) pool.tombstones.push_back(goal.position);
}

/// A committed goal stays backed while any live target of its kind remains
/// within tol of it. Frontier representatives drift cell-by-cell as the map
/// evolves; requiring an exact pool match would break commitment every tick.
/// When the area is finally observed, all nearby entries vanish and the goal
/// expires naturally.
bool goal_backed(const TargetPool& pool, const ActiveGoal& goal, double tol) {
    const TargetKind want =
        goal.source == GoalSource::Instance ? TargetKind::Instance : TargetKind::Frontier;
    for (const TargetPoint& t : pool.live)
        if (t.kind == want && distance(t.world, goal.position) <= tol) return true;
    return false;
}

/// Clamps a motion segment against ground-truth geometry: the robot stops
/// just short of the first wall or object footprint it would cross. The map
/// can be locally wrong (stale-clearing can punch holes in observed walls);
/// physics is not.
Vec2 clamp_motion(const World& world, const Vec2& from, const Vec2& to) {
    const Vec2 d = to - from;
    const double len = std::sqrt(d.norm_sq());
    if (len == 0.0) return to;

    double best_t = 1.0;
    for (const Segment& wall : world.walls) {
        const Vec2 e = wall.b - wall.a;
        const double denom = d.x * e.y - d.y * e.x;
        if (denom == 0.0) continue;
        const Vec2 w = wall.a - from;
        const double t = (w.x * e.y - w.y * e.x) / denom;
        const double u = (w.x * d.y - w.y * d.x) / denom;
        if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) continue;
        best_t = std::min(best_t, t);
    }
    for (const SimObject& obj : world.objects) {
        const Vec2 m = from - obj.position;
        const double mm = m.norm_sq();
        if (mm <= obj.extent * obj.extent) continue;  // already inside: let it leave
        const double a = d.norm_sq();
        const double b = 2.0 * m.dot(d);
        const double c = mm - obj.extent * obj.extent;
        const double disc = b * b - 4.0 * a * c;
        if (disc < 0.0) continue;
        const double t = (-b - std::sqrt(disc)) / (2.0 * a);
        if (t >= 0.0 && t <= 1.0) best_t = std::min(best_t, t);
    }
    if (best_t >= 1.0) return to;
    const double pulled = std::max(0.0, best_t - 0.01 / len);  // 1 cm standoff
    return from + d * pulled;
}

}  // namespace

EpisodeResult run_episode(const World& world, PolicyId policy, const RunConfig& cfg,
                          uint64_t seed, const EpisodeTrace* trace) {
    auto violations = validate_world(world);
    if (!violations.empty())
        throw WorldError("run_episode: invalid world: " + violations.front());

    const SensorParams sp = cfg.sensor_params();
    const DetectorParams dp = cfg.detector_params();
    const ScoreWeights weights = cfg.score_weights();
    Rng rng(Rng::derive(seed, 0x515c0de));

    EpisodeResult result;
    result.shortest_path = ground_truth_shortest_path(world, cfg);
    const double path_budget = result.shortest_path > 0.0
                                   ? cfg.path_budget_factor * result.shortest_path
                                   : cfg.path_budget_factor * (world.width + world.height);

    // Initial grid covers a small patch around the start; expansion follows
    // the sensor.
    const Vec2 start_pos = world.start.position();
    OccupancyGrid grid(cfg.resolution,
                       {start_pos.x - 2.0, start_pos.y - 2.0},
                       static_cast<int>(std::lround(4.0 / cfg.resolution)),
                       static_cast<int>(std::lround(4.0 / cfg.resolution)));

    Pose pose = world.start;
    TargetPool pool;
    std::optional<ActiveGoal> active;
    std::vector<Pose> history{pose};
    const Vec2 target_pos = world.target().position;
    const int max_no_move_ticks =
        static_cast<int>(std::ceil(2.0 * M_PI / cfg.rot_step)) + cfg.stuck_window;
    int no_move_ticks = 0;

    // Goals the planner could not serve (no path, or no progress toward
    // them). Pruning the pool entry is not enough: frontier targets are
    // re-created from their clusters on the very next tick and would win
    // selection again, so failed spots are vetoed for a while. Entries
    // expire so a spot blocked by a transient obstacle ring gets retried.
    struct RefutedSpot {
        Vec2 position;
        int tick;
    };
    std::vector<RefutedSpot> refuted;
    const int refuted_ttl = 4 * cfg.stuck_window;
    auto is_refuted = [&](const Vec2& p, int now) {
        for (const RefutedSpot& r : refuted)
            if (now - r.tick <= refuted_ttl && distance(r.position, p) <= cfg.dedup_radius)
                return true;
        return false;
    };

    result.trajectory.push_back(pose);

    for (int tick = 0; tick < cfg.tick_budget; ++tick) {
        result.ticks = tick + 1;
        if (!refuted.empty() && tick % cfg.stuck_window == 0)
            std::erase_if(refuted,
                          [&](const RefutedSpot& r) { return tick - r.tick > refuted_ttl; });

        // Sense and fold the scan into the rolling map. A scan proves free
        // space out to its range even along rays that return nothing, but
        // expansion only tracks returned points — in open terrain the grid
        // would never grow and rays would die at its edge, leaving no
        // frontier to chase. Grow to the sensing disc first.
        const PointCloud cloud = simulate_lidar(world, pose, sp, cfg.resolution);
        const double reach = sp.range + cfg.resolution;
        expand_if_needed(grid,
                         PointCloud({{pose.x - reach, pose.y - reach},
                                     {pose.x + reach, pose.y + reach}}),
                         pose, cfg.chunk);
        update(grid, cloud, pose, sp, cfg.chunk);

        // The robot's own cell is traversable — it is standing there — but
        // inflation around nearby hits can claim it, which would poison every
        // plan (planning needs a non-occupied start). Restore it.
        if (auto own = grid.world_to_grid(pose.position());
            own && grid.at(*own) == CellState::Occupied)
            grid.set(own->col, own->row, CellState::Free);

        // Detection runs for every policy: success requires having seen the
        // target at least once, whether or not the policy uses detections.
        const DetectorOutput det = synthetic_detect(world, pose, sp, dp, world.prompt_label, rng);
        if (det.saw_target && result.first_detection_tick < 0)
            result.first_detection_tick = tick;

        // Target maintenance.
        prune_stale_frontier_targets(pool, grid, pose, sp);
        const auto reached = mark_reached(pool, pose, cfg.delta_reached);
        for (const TargetPoint& t : reached) {
            if (t.kind != TargetKind::Instance) continue;
            // Arrived at a claimed instance: if the real target is not
            // actually here, remember the spot as refuted.
            if (distance(t.world, target_pos) > cfg.dedup_radius)
                pool.tombstones.push_back(t.world);
        }

        if (uses_instance_targets(policy)) {
            const auto gated = gate_candidates(det.candidates, dp.tau_det);
            const auto slim = voxel_downsample(gated, cfg.voxel);
            for (TargetPoint& t : make_instance_targets(slim, pool, cfg.dedup_radius, tick))
                pool.live.push_back(std::move(t));
        }

        {
            const auto cells = detect_frontier_cells(grid, pose, sp);
            const auto clusters =
                cluster_frontiers(cells, cfg.small_threshold, cfg.sample_spacing);
            std::optional<double> fixed_vl;
            if (policy == PolicyId::FrontierOnly) {
                fixed_vl = 0.0;
            } else if (policy == PolicyId::ImageLevel) {
                double scalar = 0.0;
                for (const InstanceCandidate& c : det.candidates)
                    scalar = std::max(scalar, c.confidence);
                fixed_vl = scalar;
            }
            const std::vector<DetectionRegion> no_regions;
            const auto& regions = uses_detection_regions(policy) ? det.regions : no_regions;
            for (TargetPoint& t : make_frontier_targets(clusters, regions, pose, sp, pool,
                                                        cfg.resolution, tick, fixed_vl))
                pool.live.push_back(std::move(t));
        }

        // Score frontiers, split the pool, and select. Vetoed spots are
        // invisible to selection until their entry expires. Frontier points
        // outside the world footprint or pressed against a physical wall are
        // mapping artifacts (stale-clearing frees inflated cells around wall
        // hits, leaving thin free strips whose unknown side is wall-backed);
        // nothing explorable is behind them, so the harness drops them.
        const double wall_hug = sp.inflation_radius + 0.75 * cfg.resolution;
        auto artifact_frontier = [&](const Vec2& p) {
            if (p.x < 0.0 || p.x > world.width || p.y < 0.0 || p.y > world.height) return true;
            for (const Segment& wall : world.walls)
                if (point_segment_distance(p, wall) <= wall_hug) return true;
            // Object interiors are never observed, so a free ring around a
            // footprint borders permanent unknown — same artifact, round.
            for (const SimObject& obj : world.objects)
                if (distance(p, obj.position) <= obj.extent + wall_hug) return true;
            return false;
        };
        std::vector<TargetPoint> instances;
        std::vector<std::pair<TargetPoint, ScoreBreakdown>> frontiers;
        for (const TargetPoint& t : pool.live) {
            if (t.kind == TargetKind::Frontier && artifact_frontier(t.world)) continue;
            if (is_refuted(t.world, tick)) continue;
            if (t.kind == TargetKind::Instance)
                instances.push_back(t);
            else
                frontiers.emplace_back(t, policy_breakdown(policy, t, grid, pose, weights));
        }
        const GoalDecision decision =
            select_goal(instances, frontiers, pose, cfg.delta_reached, tick);

        // Commit to the active goal until it is reached, pruned, or vetoed;
        // chasing every per-tick argmax flip makes the robot shuffle between
        // near-equal frontiers without ever clearing the space behind them.
        // A fresh instance sighting still preempts a frontier goal.
        if (active && distance(pose.position(), active->position) <= cfg.delta_reached)
            active.reset();  // consumed: the viewpoint was reached
        const double backing_tol = active && active->source == GoalSource::Instance
                                       ? cfg.dedup_radius
                                       : cfg.sample_spacing;
        if (active && !goal_backed(pool, *active, backing_tol)) active.reset();
        if (active && is_refuted(active->position, tick)) active.reset();
        if (decision.goal) {
            const bool preempt = active && active->source != GoalSource::Instance &&
                                 decision.source == GoalSource::Instance;
            if (!active || preempt) {
                active = ActiveGoal{*decision.goal, decision.source, std::nullopt,
                                    distance(pose.position(), *decision.goal), tick};
                result.decision_log.push_back(decision);
            }
        }

        // Plan and move. The route is planned once per commitment and
        // followed; replanning every tick lets A* flip between near-equal
        // routes as the start cell changes, walking the robot in place.
        bool moved = false;
        if (active) {
            if (active->route && route_blocked(grid, *active->route, pose.position(),
                                               cfg.delta_reached, 20.0 * cfg.resolution))
                active->route.reset();
            if (!active->route) {
                auto path = plan_path(grid, pose.position(), active->position,
                                      cfg.unknown_penalty);
                if (!path && active->source == GoalSource::Instance) {
                    // A detected object sits inside its own inflated
                    // footprint, which can exceed the planner's goal snap.
                    // Aim at a standoff point on the near side instead;
                    // success distance is judged against the object, not the
                    // goal point.
                    const Vec2 d = active->position - pose.position();
                    const double dist = std::sqrt(d.norm_sq());
                    const double standoff = cfg.delta_reached + cfg.resolution;
                    if (dist > standoff) {
                        const Vec2 near_side = active->position - d * (standoff / dist);
                        path = plan_path(grid, pose.position(), near_side, cfg.unknown_penalty);
                    }
                }
                if (!path) {
                    // Unreachable on the current map: veto the spot and let
                    // selection move on. The pool entry stays — the veto
                    // expiring is what re-enables it.
                    refuted.push_back({active->position, tick});
                    active.reset();
                } else {
                    active->route = std::move(*path);
                }
            }
            if (active) {
                const Pose next = step_local(*active->route, pose, cfg.step_len);
                const Vec2 landed = clamp_motion(world, pose.position(), next.position());
                if (distance(landed, next.position()) > 1e-9) {
                    // The step hit something the map does not show (stale
                    // clearing can punch holes in observed walls). A bump is
                    // an observation: mark the contact cell occupied and
                    // replan around it instead of abandoning the goal.
                    const Vec2 dir = next.position() - pose.position();
                    const double len = std::sqrt(dir.norm_sq());
                    const Vec2 probe = landed + dir * (0.6 * cfg.resolution / len);
                    const auto idx = grid.world_to_grid(probe);
                    const auto own = grid.world_to_grid(pose.position());
                    if (idx && !(own && *idx == *own)) grid.set(*idx, CellState::Occupied);
                    active->route.reset();
                }
                result.path_length += distance(pose.position(), landed);
                pose = Pose{landed.x, landed.y, next.theta};
                moved = true;
            }
        }
        if (!moved) {
            // No goal (or an unreachable one): turn in place to sweep the
            // wedge across unseen bearings.
            pose.set_theta(pose.theta + cfg.rot_step);
        }
        no_move_ticks = moved ? 0 : no_move_ticks + 1;

        result.trajectory.push_back(pose);
        history.push_back(pose);

        // Stall watchdogs. detect_stuck catches a robot that stops moving;
        // the progress rule catches one that keeps moving without ever
        // getting closer (wall-flicker replans can settle into a closed
        // orbit that displacement alone never flags). Either way the goal is
        // invalidated (frontier pruned, instance tombstoned), the spot is
        // vetoed, and selection starts over. The longer progress window
        // tolerates legitimate detours around walls.
        bool stalled = active && detect_stuck(history, cfg.stuck_window, cfg.min_progress);
        if (active && !stalled) {
            const double d = distance(pose.position(), active->position);
            if (d + cfg.min_progress < active->best_dist) {
                active->best_dist = d;
                active->last_improve = tick;
            } else if (tick - active->last_improve > 2 * cfg.stuck_window) {
                stalled = true;
            }
        }
        if (stalled) {
            refuted.push_back({active->position, tick});
            invalidate_goal(pool, *active);
            active.reset();
            history.clear();
            history.push_back(pose);
        }

        if (trace && trace->dump_maps_every > 0 && tick % trace->dump_maps_every == 0) {
            const std::string base = trace->out_dir + "/tick_" + std::to_string(tick);
            save_pgm(grid, base + "_occupancy.pgm");
            export_value_map(grid, pose, det.regions, sp.hfov, base + "_value.pgm");
        }

        // Success: close to the real target after having detected it.
        if (result.first_detection_tick >= 0 &&
            distance(pose.position(), target_pos) <= cfg.success_radius) {
            result.success = true;
            break;
        }
        if (result.path_length > path_budget) break;
        // Position-locked through a full in-place sweep plus the stall
        // window: nothing reachable is left to try.
        if (no_move_ticks > max_no_move_ticks) break;
    }
    return result;
}

Metrics compute_metrics(const std::vector<EpisodeResult>& results) {
    if (results.empty())
        throw std::invalid_argument("compute_metrics: empty result list");
    Metrics m;
    double spl_sum = 0.0;
    int successes = 0;
    for (const EpisodeResult& r : results) {
        if (r.success) ++successes;
        spl_sum += r.spl();
    }
    m.sr = 100.0 * static_cast<double>(successes) / static_cast<double>(results.size());
    m.spl = spl_sum / static_cast<double>(results.size());
    return m;
}

}  // namespace vlnav
