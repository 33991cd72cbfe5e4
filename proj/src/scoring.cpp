#include "vlnav/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>

namespace vlnav {

double angular_offset(const Vec2& goal, const Pose& pose) {
    const double dx = goal.x - pose.x;
    const double dy = goal.y - pose.y;
    if (dx == 0.0 && dy == 0.0) return 0.0;
    return normalize_angle(std::atan2(dy, dx) - pose.theta);
}

double view_confidence(double delta_theta, double theta_fov) {
    const double half = theta_fov / 2.0;
    if (std::abs(delta_theta) > half) return 0.0;
    const double c = std::cos((delta_theta / half) * (M_PI / 2.0));
    return c * c;
}

double vl_score(double delta_theta, const std::vector<DetectionRegion>& regions,
                double theta_fov) {
    if (regions.empty()) return 0.0;
    const double c = view_confidence(delta_theta, theta_fov);
    if (c == 0.0) return 0.0;
    double sum = 0.0;
    for (const DetectionRegion& r : regions) {
        const double z = (delta_theta - r.mu) / r.sigma;
        sum += r.alpha * std::exp(-0.5 * z * z);
    }
    return sum * c;
}

double distance_score(double d) { return 1.0 / (1.0 + d); }

double unknown_ratio(const OccupancyGrid& grid, const Vec2& goal, double radius) {
    auto start = grid.world_to_grid(goal);
    if (!start || grid.at(*start) == CellState::Occupied) return 0.0;

    // BFS over non-occupied cells, radius measured between cell centers
    // through integer offsets so the boundary is resolution-exact.
    const double res = grid.resolution();
    auto within = [&](int col, int row) {
        const double dc = static_cast<double>(col - start->col);
        const double dr = static_cast<double>(row - start->row);
        return res * std::sqrt(dc * dc + dr * dr) <= radius;
    };

    // Scratch visit stamps survive across calls (this runs once per live
    // target per tick); bumping the epoch replaces a full-grid clear.
    thread_local std::vector<uint32_t> stamp;
    thread_local uint32_t epoch = 0;
    if (stamp.size() < grid.size()) stamp.assign(grid.size(), 0);
    if (++epoch == 0) {
        std::fill(stamp.begin(), stamp.end(), 0);
        epoch = 1;
    }
    auto flat = [&grid](int col, int row) {
        return static_cast<size_t>(row) * grid.width() + col;
    };
    auto visited = [&](size_t i) { return stamp[i] == epoch; };
    std::deque<GridIndex> queue{*start};
    stamp[flat(start->col, start->row)] = epoch;
    int total = 0, unknown = 0;
    while (!queue.empty()) {
        GridIndex cur = queue.front();
        queue.pop_front();
        ++total;
        if (grid.at(cur) == CellState::Unknown) ++unknown;
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                if (dr == 0 && dc == 0) continue;
                const int nc = cur.col + dc, nr = cur.row + dr;
                if (!grid.in_bounds(nc, nr) || visited(flat(nc, nr))) continue;
                if (grid.at(nc, nr) == CellState::Occupied) continue;
                if (!within(nc, nr)) continue;
                stamp[flat(nc, nr)] = epoch;
                queue.push_back({nc, nr});
            }
        }
    }
    return static_cast<double>(unknown) / static_cast<double>(total);
}

double unknown_score(double ratio, double k) { return 1.0 - std::exp(-k * ratio); }

double cvl_score(double s_vl, double s_dist, double s_unknown, const ScoreWeights& w) {
    return w.w_dist * s_dist + w.w_vl * s_vl * s_unknown;
}

ScoreBreakdown score_frontier_target(const TargetPoint& target, const OccupancyGrid& grid,
                                     const Pose& pose, const ScoreWeights& w) {
    ScoreBreakdown b;
    b.s_vl = target.vl_score;
    if (!grid.world_to_grid(target.world)) {
        b.in_grid = false;
        return b;  // all-zero score with the diagnostic flag
    }
    b.s_dist = distance_score(distance(target.world, pose.position()));
    b.ratio = unknown_ratio(grid, target.world, w.unknown_bfs_radius);
    b.s_unknown = unknown_score(b.ratio, w.k_unknown);
    b.s_cvl = cvl_score(b.s_vl, b.s_dist, b.s_unknown, w);
    return b;
}

void export_value_map(const OccupancyGrid& grid, const Pose& pose,
                      const std::vector<DetectionRegion>& regions, double theta_fov,
                      const std::string& path) {
    std::vector<uint8_t> bytes(grid.size(), 0);
    for (int r = 0; r < grid.height(); ++r) {
        for (int c = 0; c < grid.width(); ++c) {
            const double s =
                vl_score(angular_offset(grid.cell_center(c, r), pose), regions, theta_fov);
            const double clamped = std::clamp(s, 0.0, 1.0);
            // Same row order as the occupancy export: top row first.
            bytes[static_cast<size_t>(grid.height() - 1 - r) * grid.width() + c] =
                static_cast<uint8_t>(std::lround(clamped * 255.0));
        }
    }
    save_pgm_field(bytes, grid.width(), grid.height(), grid.resolution(), grid.origin(), path);
}

}  // namespace vlnav
