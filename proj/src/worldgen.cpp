#include "vlnav/worldgen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "vlnav/rng.hpp"

namespace vlnav {

namespace {

void add_perimeter(World& w) {
    w.walls.push_back({{0.0, 0.0}, {w.width, 0.0}});
    w.walls.push_back({{w.width, 0.0}, {w.width, w.height}});
    w.walls.push_back({{w.width, w.height}, {0.0, w.height}});
    w.walls.push_back({{0.0, w.height}, {0.0, 0.0}});
}

/// Horizontal or vertical wall with door gaps carved out.
void add_wall_with_doors(World& w, bool horizontal, double fixed, double from, double to,
                         const std::vector<double>& door_centers, double door_width) {
    std::vector<std::pair<double, double>> spans{{from, to}};
    for (double c : door_centers) {
        std::vector<std::pair<double, double>> next;
        for (auto [a, b] : spans) {
            const double lo = c - door_width / 2.0, hi = c + door_width / 2.0;
            if (hi <= a || lo >= b) {
                next.emplace_back(a, b);
                continue;
            }
            if (lo > a) next.emplace_back(a, lo);
            if (hi < b) next.emplace_back(hi, b);
        }
        spans = std::move(next);
    }
    for (auto [a, b] : spans) {
        if (b - a < 1e-6) continue;
        if (horizontal)
            w.walls.push_back({{a, fixed}, {b, fixed}});
        else
            w.walls.push_back({{fixed, a}, {fixed, b}});
    }
}

double clearance_to_walls(const World& w, const Vec2& p) {
    double best = std::numeric_limits<double>::infinity();
    for (const Segment& s : w.walls) best = std::min(best, point_segment_distance(p, s));
    return best;
}

/// Draws a position with comfortable clearance from walls, existing objects,
/// and the start pose. Gives up (returns false) after bounded attempts so the
/// caller can regenerate the whole world.
bool place_object(World& w, Rng& rng, const Vec2& lo, const Vec2& hi, double extent,
                  double wall_clearance, Vec2& out) {
    for (int attempt = 0; attempt < 60; ++attempt) {
        Vec2 p{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
        if (clearance_to_walls(w, p) < extent + wall_clearance) continue;
        bool crowded = distance(p, w.start.position()) < 1.5;
        for (const SimObject& o : w.objects) {
            if (distance(p, o.position) < extent + o.extent + 0.8) {
                crowded = true;
                break;
            }
        }
        if (crowded) continue;
        out = p;
        return true;
    }
    return false;
}

void add_object(World& w, const Vec2& p, const std::string& label, double extent,
                double base_conf, bool is_target) {
    SimObject o;
    o.position = p;
    o.label = label;
    o.extent = extent;
    o.base_conf = base_conf;
    o.is_target = is_target;
    if (is_target) w.target_index = static_cast<int>(w.objects.size());
    w.objects.push_back(std::move(o));
}

/// Ground-truth reachability from start to the target's surroundings on the
/// inflated grid (8-connected BFS over free cells).
bool target_reachable(const World& w, double resolution, double inflation, double reach_radius) {
    OccupancyGrid grid = build_ground_truth_grid(w, resolution, inflation);
    auto start = grid.world_to_grid(w.start.position());
    if (!start || grid.at(*start) == CellState::Occupied) return false;

    const Vec2 target = w.target().position;
    std::vector<char> visited(grid.size(), 0);
    auto flat = [&grid](int c, int r) { return static_cast<size_t>(r) * grid.width() + c; };
    std::deque<GridIndex> queue{*start};
    visited[flat(start->col, start->row)] = 1;
    while (!queue.empty()) {
        GridIndex cur = queue.front();
        queue.pop_front();
        if (distance(grid.cell_center(cur), target) <= reach_radius) return true;
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                if (dr == 0 && dc == 0) continue;
                const int nc = cur.col + dc, nr = cur.row + dr;
                if (!grid.in_bounds(nc, nr) || visited[flat(nc, nr)]) continue;
                if (grid.at(nc, nr) == CellState::Occupied) continue;
                visited[flat(nc, nr)] = 1;
                queue.push_back({nc, nr});
            }
        }
    }
    return false;
}

// --- family builders (return false to request a retry with a fresh stream) ---

bool build_hallway(World& w, Rng& rng) {
    w.width = 36.0;
    w.height = 7.0;
    w.prompt_label = "gray door";
    add_perimeter(w);

    // Main corridor between y=2 and y=5; alternating side pockets open off it.
    std::vector<double> lower_doors, upper_doors;
    const int pockets = 4;
    for (int i = 0; i < pockets; ++i) {
        const double cx = 6.0 + 7.0 * i + rng.uniform(-0.8, 0.8);
        const bool up = (i % 2 == 1);
        (up ? upper_doors : lower_doors).push_back(cx);
        // Pocket side walls, leaving the corridor wall gap as the entrance.
        const double hw = 1.4;
        if (up) {
            w.walls.push_back({{cx - hw, 5.0}, {cx - hw, 7.0}});
            w.walls.push_back({{cx + hw, 5.0}, {cx + hw, 7.0}});
        } else {
            w.walls.push_back({{cx - hw, 0.0}, {cx - hw, 2.0}});
            w.walls.push_back({{cx + hw, 0.0}, {cx + hw, 2.0}});
        }
    }
    add_wall_with_doors(w, true, 2.0, 0.0, 36.0, lower_doors, 1.6);
    add_wall_with_doors(w, true, 5.0, 0.0, 36.0, upper_doors, 1.6);

    w.start = Pose(rng.uniform(1.2, 2.2), rng.uniform(3.0, 4.0), 0.0);

    Vec2 p;
    if (!place_object(w, rng, {26.0, 2.8}, {34.5, 4.2}, 0.25, 0.4, p)) return false;
    add_object(w, p, w.prompt_label, 0.25, rng.uniform(0.92, 0.98), true);
    // One same-label distractor in a mid pocket, weaker return.
    if (!place_object(w, rng, {11.0, 0.8}, {14.0, 1.6}, 0.25, 0.3, p)) return false;
    add_object(w, p, w.prompt_label, 0.25, rng.uniform(0.42, 0.55), false);
    // A couple of unrelated obstacles along the corridor.
    for (int i = 0; i < 2; ++i) {
        if (!place_object(w, rng, {8.0, 2.6}, {24.0, 4.4}, 0.3, 0.5, p)) return false;
        add_object(w, p, "crate", 0.3, 0.5, false);
    }
    return true;
}

bool build_office(World& w, Rng& rng) {
    w.width = 20.0;
    w.height = 16.0;
    w.prompt_label = "red chair";
    add_perimeter(w);

    // Two rows of rooms off a central corridor (y in [7,9]); each room opens
    // onto the corridor through its own door.
    std::vector<double> lower_doors, upper_doors;
    for (int i = 0; i < 4; ++i) {
        lower_doors.push_back(2.5 + 5.0 * i + rng.uniform(-0.6, 0.6));
        upper_doors.push_back(2.5 + 5.0 * i + rng.uniform(-0.6, 0.6));
    }
    add_wall_with_doors(w, true, 7.0, 0.0, 20.0, lower_doors, 1.4);
    add_wall_with_doors(w, true, 9.0, 0.0, 20.0, upper_doors, 1.4);
    for (int i = 1; i < 4; ++i) {
        add_wall_with_doors(w, false, 5.0 * i, 0.0, 7.0, {}, 0.0);
        add_wall_with_doors(w, false, 5.0 * i, 9.0, 16.0, {}, 0.0);
    }

    w.start = Pose(rng.uniform(1.0, 2.0), rng.uniform(7.6, 8.4), 0.0);

    // Target in one of the two far upper rooms.
    const int room = rng.uniform_int(2, 3);
    Vec2 p;
    if (!place_object(w, rng, {5.0 * room + 1.0, 10.5}, {5.0 * room + 4.0, 15.0}, 0.25, 0.4, p))
        return false;
    add_object(w, p, w.prompt_label, 0.25, rng.uniform(0.9, 0.97), true);

    // Many same-label distractors spread over the remaining rooms.
    const int distractors = rng.uniform_int(6, 8);
    for (int i = 0; i < distractors; ++i) {
        if (!place_object(w, rng, {0.8, 0.8}, {19.2, 15.2}, 0.25, 0.35, p)) return false;
        add_object(w, p, w.prompt_label, 0.25, rng.uniform(0.4, 0.6), false);
    }
    for (int i = 0; i < 3; ++i) {
        if (!place_object(w, rng, {0.8, 0.8}, {19.2, 6.2}, 0.3, 0.35, p)) return false;
        add_object(w, p, "shelf", 0.3, 0.5, false);
    }
    return true;
}

bool build_apartment(World& w, Rng& rng) {
    w.width = 12.0;
    w.height = 10.0;
    w.prompt_label = "potted plant";
    add_perimeter(w);

    // Four rooms: one vertical and one horizontal divider, doors jittered.
    const double vx = 6.0 + rng.uniform(-0.5, 0.5);
    const double hy = 5.0 + rng.uniform(-0.5, 0.5);
    add_wall_with_doors(w, false, vx, 0.0, 10.0,
                        {rng.uniform(1.5, 3.5), rng.uniform(6.5, 8.5)}, 1.2);
    add_wall_with_doors(w, true, hy, 0.0, 12.0,
                        {rng.uniform(1.5, 4.0), rng.uniform(8.0, 10.5)}, 1.2);

    w.start = Pose(rng.uniform(1.0, 1.8), rng.uniform(1.0, 1.8), rng.uniform(0.0, 1.2));

    // Target in the far room (across both dividers).
    Vec2 p;
    if (!place_object(w, rng, {vx + 0.8, hy + 0.8}, {11.2, 9.2}, 0.22, 0.35, p)) return false;
    add_object(w, p, w.prompt_label, 0.22, rng.uniform(0.9, 0.97), true);

    const int distractors = rng.uniform_int(3, 4);
    for (int i = 0; i < distractors; ++i) {
        if (!place_object(w, rng, {0.8, 0.8}, {11.2, 9.2}, 0.22, 0.3, p)) return false;
        add_object(w, p, w.prompt_label, 0.22, rng.uniform(0.4, 0.6), false);
    }
    for (int i = 0; i < 3; ++i) {
        if (!place_object(w, rng, {0.8, 0.8}, {11.2, 9.2}, 0.28, 0.3, p)) return false;
        add_object(w, p, "sofa", 0.28, 0.5, false);
    }
    return true;
}

bool build_outdoor(World& w, Rng& rng) {
    w.width = 32.0;
    w.height = 26.0;
    w.prompt_label = "picnic table";
    add_perimeter(w);

    w.start = Pose(rng.uniform(1.5, 3.0), rng.uniform(1.5, 3.0), rng.uniform(0.3, 1.0));

    // Target in the far corner region.
    Vec2 p;
    if (!place_object(w, rng, {23.0, 17.0}, {30.0, 24.0}, 0.35, 0.5, p)) return false;
    add_object(w, p, w.prompt_label, 0.35, rng.uniform(0.9, 0.97), true);

    const int distractors = rng.uniform_int(1, 2);
    for (int i = 0; i < distractors; ++i) {
        if (!place_object(w, rng, {4.0, 4.0}, {28.0, 22.0}, 0.35, 0.5, p)) return false;
        add_object(w, p, w.prompt_label, 0.35, rng.uniform(0.4, 0.58), false);
    }
    // Sparse scattered obstacles.
    const int trees = rng.uniform_int(8, 12);
    for (int i = 0; i < trees; ++i) {
        if (!place_object(w, rng, {3.0, 3.0}, {29.0, 23.0}, rng.uniform(0.4, 0.7), 0.5, p))
            return false;
        add_object(w, p, "tree", rng.uniform(0.4, 0.7), 0.3, false);
    }
    return true;
}

World generate_with_retries(WorldFamily family, uint64_t seed, uint64_t stream_base) {
    for (int attempt = 0; attempt < 50; ++attempt) {
        Rng rng(Rng::derive(seed, stream_base + static_cast<uint64_t>(attempt)));
        World w;
        bool built = false;
        switch (family) {
            case WorldFamily::Hallway: built = build_hallway(w, rng); break;
            case WorldFamily::Office: built = build_office(w, rng); break;
            case WorldFamily::Apartment: built = build_apartment(w, rng); break;
            case WorldFamily::Outdoor: built = build_outdoor(w, rng); break;
        }
        if (!built) continue;
        if (!validate_world(w).empty()) continue;
        if (!target_reachable(w, 0.1, 0.1, 0.8)) continue;
        return w;
    }
    throw std::runtime_error(std::string("world generation failed for family ") +
                             family_name(family));
}

}  // namespace

const char* family_name(WorldFamily f) {
    switch (f) {
        case WorldFamily::Hallway: return "hallway";
        case WorldFamily::Office: return "office";
        case WorldFamily::Apartment: return "apartment";
        case WorldFamily::Outdoor: return "outdoor";
    }
    return "?";
}

bool family_from_name(const std::string& name, WorldFamily& out) {
    for (WorldFamily f : all_families()) {
        if (name == family_name(f)) {
            out = f;
            return true;
        }
    }
    return false;
}

std::vector<WorldFamily> all_families() {
    return {WorldFamily::Hallway, WorldFamily::Office, WorldFamily::Apartment,
            WorldFamily::Outdoor};
}

World generate_world(WorldFamily family, uint64_t seed) {
    return generate_with_retries(family, seed, 1000ULL * (static_cast<uint64_t>(family) + 1));
}

std::vector<World> generate_worlds(WorldFamily family, uint64_t seed, int count) {
    std::vector<World> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        out.push_back(generate_world(family, Rng::derive(seed, static_cast<uint64_t>(i))));
    return out;
}

World make_cue_corridor(uint64_t seed) {
    for (int attempt = 0; attempt < 50; ++attempt) {
        Rng rng(Rng::derive(seed, 777000ULL + static_cast<uint64_t>(attempt)));
        World w;
        w.width = 30.0;
        w.height = 6.0;
        w.prompt_label = "gray door";
        add_perimeter(w);

        // Exploration mass to the left: three side rooms off the left half of the
        // corridor; the right half is a plain straight run.
        std::vector<double> lower_doors;
        for (int i = 0; i < 3; ++i) {
            const double cx = 2.5 + 3.2 * i + rng.uniform(-0.4, 0.4);
            lower_doors.push_back(cx);
            w.walls.push_back({{cx - 1.3, 0.0}, {cx - 1.3, 2.0}});
            w.walls.push_back({{cx + 1.3, 0.0}, {cx + 1.3, 2.0}});
        }
        add_wall_with_doors(w, true, 2.0, 0.0, 12.0, lower_doors, 1.5);

        w.start = Pose(rng.uniform(11.5, 12.5), rng.uniform(3.4, 4.4), 0.0);

        // The cue: a strong-return target to the right, inside detection
        // range of the start.
        Vec2 p{w.start.x + rng.uniform(7.0, 9.0), rng.uniform(3.2, 4.6)};
        if (clearance_to_walls(w, p) < 0.6) continue;
        World candidate = w;
        add_object(candidate, p, candidate.prompt_label, 0.25, rng.uniform(0.92, 0.98), true);
        if (!validate_world(candidate).empty()) continue;
        if (!target_reachable(candidate, 0.1, 0.1, 0.8)) continue;
        return candidate;
    }
    throw std::runtime_error("world generation failed for the cue corridor");
}

}  // namespace vlnav
