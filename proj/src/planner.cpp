#include "vlnav/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace vlnav {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

struct OpenNode {
    double f;
    double g;
    int flat;
};

struct OpenOrder {
    bool operator()(const OpenNode& a, const OpenNode& b) const {
        if (a.f != b.f) return a.f > b.f;
        if (a.g != b.g) return a.g < b.g;  // prefer deeper nodes on equal f
        return a.flat > b.flat;            // deterministic final tie-break
    }
};

/// Clamps an arbitrary world point to the nearest point inside the grid
/// footprint (used for goals beyond the mapped area).
Vec2 clamp_to_grid(const OccupancyGrid& grid, const Vec2& p) {
    const double eps = grid.resolution() * 1e-6;
    const Vec2 o = grid.origin();
    const double max_x = o.x + grid.width() * grid.resolution() - eps;
    const double max_y = o.y + grid.height() * grid.resolution() - eps;
    return {std::clamp(p.x, o.x, max_x), std::clamp(p.y, o.y, max_y)};
}

/// Nearest non-occupied cell within `ring` cells (Chebyshev), ties broken by
/// Euclidean cell distance then (row, col). Returns nullopt when the whole
/// neighborhood is occupied.
std::optional<GridIndex> snap_goal(const OccupancyGrid& grid, const GridIndex& goal, int ring) {
    if (grid.at(goal) != CellState::Occupied) return goal;
    std::optional<GridIndex> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (int dr = -ring; dr <= ring; ++dr) {
        for (int dc = -ring; dc <= ring; ++dc) {
            const int nc = goal.col + dc, nr = goal.row + dr;
            if (!grid.in_bounds(nc, nr)) continue;
            if (grid.at(nc, nr) == CellState::Occupied) continue;
            const double d = std::sqrt(static_cast<double>(dc * dc + dr * dr));
            if (d < best_d) {
                best_d = d;
                best = GridIndex{nc, nr};
            }
        }
    }
    return best;
}

}  // namespace

std::optional<Path> plan_path(const OccupancyGrid& grid, const Vec2& start, const Vec2& goal,
                              double unknown_penalty) {
    const auto start_idx = grid.world_to_grid(start);
    if (!start_idx || grid.at(*start_idx) == CellState::Occupied) return std::nullopt;

    auto goal_idx = grid.world_to_grid(goal);
    if (!goal_idx) goal_idx = grid.world_to_grid(clamp_to_grid(grid, goal));
    if (!goal_idx) return std::nullopt;
    const auto snapped = snap_goal(grid, *goal_idx, 3);
    if (!snapped) return std::nullopt;
    goal_idx = *snapped;

    const int w = grid.width(), h = grid.height();
    const double res = grid.resolution();
    const int goal_flat = goal_idx->row * w + goal_idx->col;
    const int start_flat = start_idx->row * w + start_idx->col;

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> g(static_cast<size_t>(w) * h, inf);
    std::vector<int> parent(static_cast<size_t>(w) * h, -1);
    std::vector<char> closed(static_cast<size_t>(w) * h, 0);

    auto heuristic = [&](int flat) {
        const int col = flat % w, row = flat / w;
        const double dc = static_cast<double>(col - goal_idx->col);
        const double dr = static_cast<double>(row - goal_idx->row);
        return res * std::sqrt(dc * dc + dr * dr);
    };

    std::priority_queue<OpenNode, std::vector<OpenNode>, OpenOrder> open;
    g[start_flat] = 0.0;
    open.push({heuristic(start_flat), 0.0, start_flat});

    while (!open.empty()) {
        const OpenNode node = open.top();
        open.pop();
        if (closed[node.flat]) continue;
        closed[node.flat] = 1;
        if (node.flat == goal_flat) break;

        const int col = node.flat % w, row = node.flat / w;
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                if (dr == 0 && dc == 0) continue;
                const int nc = col + dc, nr = row + dr;
                if (!grid.in_bounds(nc, nr)) continue;
                const CellState s = grid.at(nc, nr);
                if (s == CellState::Occupied) continue;
                const int nflat = nr * w + nc;
                if (closed[nflat]) continue;
                const double step = res * ((dr != 0 && dc != 0) ? kSqrt2 : 1.0);
                const double cost = step * (s == CellState::Unknown ? unknown_penalty : 1.0);
                const double ng = g[node.flat] + cost;
                if (ng < g[nflat]) {
                    g[nflat] = ng;
                    parent[nflat] = node.flat;
                    open.push({ng + heuristic(nflat), ng, nflat});
                }
            }
        }
    }

    if (g[goal_flat] == inf) return std::nullopt;

    Path path;
    path.cost = g[goal_flat];
    std::vector<int> chain;
    for (int cur = goal_flat; cur != -1; cur = parent[cur]) chain.push_back(cur);
    std::reverse(chain.begin(), chain.end());
    path.waypoints.reserve(chain.size());
    for (int flat : chain) path.waypoints.push_back(grid.cell_center(flat % w, flat / w));
    return path;
}

Pose step_local(const Path& path, const Pose& pose, double step_len) {
    const auto& wp = path.waypoints;
    if (wp.empty()) return pose;
    if (wp.size() == 1) {
        const Vec2 d = wp[0] - pose.position();
        const double theta = (d.x == 0.0 && d.y == 0.0) ? pose.theta : std::atan2(d.y, d.x);
        return Pose{wp[0].x, wp[0].y, theta};
    }

    // Project the pose onto the polyline (nearest point, earliest segment on
    // ties), then advance by arc length.
    size_t seg = 0;
    double seg_t = 0.0;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < wp.size(); ++i) {
        const Vec2 ab = wp[i + 1] - wp[i];
        const double len_sq = ab.norm_sq();
        double t = len_sq > 0.0 ? (pose.position() - wp[i]).dot(ab) / len_sq : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const double d = distance(pose.position(), wp[i] + ab * t);
        if (d < best_d) {
            best_d = d;
            seg = i;
            seg_t = t;
        }
    }

    double remaining = step_len;
    Vec2 cur = wp[seg] + (wp[seg + 1] - wp[seg]) * seg_t;
    double heading = pose.theta;
    for (size_t i = seg; i + 1 < wp.size(); ++i) {
        const Vec2 end = wp[i + 1];
        const Vec2 d = end - cur;
        const double len = d.norm();
        if (len > 0.0) heading = std::atan2(d.y, d.x);
        if (remaining < len) {
            cur = cur + d * (remaining / len);
            return Pose{cur.x, cur.y, heading};
        }
        remaining -= len;
        cur = end;
    }
    return Pose{cur.x, cur.y, heading};  // step exhausted the path
}

bool detect_stuck(const std::vector<Pose>& history, int window, double min_progress) {
    if (static_cast<int>(history.size()) < window) return false;
    const Pose& oldest = history[history.size() - static_cast<size_t>(window)];
    const Pose& newest = history.back();
    return distance(oldest.position(), newest.position()) < min_progress;
}

}  // namespace vlnav
