#include "vlnav/frontier.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <unordered_map>

#include "vlnav/scoring.hpp"

namespace vlnav {

bool is_frontier_cell(const OccupancyGrid& grid, int col, int row) {
    if (grid.at(col, row) != CellState::Free) return false;
    for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            int nc = col + dc, nr = row + dr;
            if (!grid.in_bounds(nc, nr)) continue;
            if (grid.at(nc, nr) == CellState::Unknown) return true;
        }
    }
    return false;
}

std::vector<FrontierCell> detect_frontier_cells(const OccupancyGrid& grid, const Pose& pose,
                                                const SensorParams& sp) {
    std::vector<FrontierCell> out;

    // Bounding box of the sensing disc; the wedge test prunes the rest.
    GridIndex lo = grid.world_to_grid_unbounded({pose.x - sp.range, pose.y - sp.range});
    GridIndex hi = grid.world_to_grid_unbounded({pose.x + sp.range, pose.y + sp.range});
    int c0 = std::max(0, lo.col), c1 = std::min(grid.width() - 1, hi.col);
    int r0 = std::max(0, lo.row), r1 = std::min(grid.height() - 1, hi.row);

    for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) {
            Vec2 center = grid.cell_center(c, r);
            if (!in_wedge(center, pose, sp)) continue;
            if (is_frontier_cell(grid, c, r)) out.push_back({GridIndex{c, r}, center});
        }
    }
    return out;
}

std::vector<FrontierCluster> cluster_frontiers(const std::vector<FrontierCell>& cells,
                                               int small_threshold, double sample_spacing) {
    std::vector<FrontierCluster> clusters;
    if (cells.empty()) return clusters;

    // Index frontier cells for 8-connected BFS. Uses a 2^32 stride so the
    // key is collision-free regardless of grid size.
    std::unordered_map<std::int64_t, int> cell_at;
    cell_at.reserve(cells.size() * 2);
    auto key = [](int col, int row) {
        return (static_cast<std::int64_t>(row) << 32) | static_cast<std::uint32_t>(col);
    };
    for (std::size_t i = 0; i < cells.size(); ++i)
        cell_at[key(cells[i].index.col, cells[i].index.row)] = static_cast<int>(i);

    std::vector<char> visited(cells.size(), 0);
    for (std::size_t seed = 0; seed < cells.size(); ++seed) {
        if (visited[seed]) continue;
        FrontierCluster cluster;
        std::deque<int> queue{static_cast<int>(seed)};
        visited[seed] = 1;
        while (!queue.empty()) {
            int cur = queue.front();
            queue.pop_front();
            cluster.cells.push_back(cells[cur]);
            const GridIndex idx = cells[cur].index;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    auto it = cell_at.find(key(idx.col + dc, idx.row + dr));
                    if (it == cell_at.end() || visited[it->second]) continue;
                    visited[it->second] = 1;
                    queue.push_back(it->second);
                }
            }
        }

        // Deterministic processing order inside the cluster.
        std::sort(cluster.cells.begin(), cluster.cells.end(),
                  [](const FrontierCell& a, const FrontierCell& b) {
                      if (a.index.row != b.index.row) return a.index.row < b.index.row;
                      return a.index.col < b.index.col;
                  });

        // Centroid snapped to the nearest member cell, ties to lowest (row, col).
        double cx = 0.0, cy = 0.0;
        for (const FrontierCell& cell : cluster.cells) {
            cx += cell.index.col;
            cy += cell.index.row;
        }
        cx /= static_cast<double>(cluster.cells.size());
        cy /= static_cast<double>(cluster.cells.size());
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cluster.cells.size(); ++i) {
            double dc = cluster.cells[i].index.col - cx;
            double dr = cluster.cells[i].index.row - cy;
            double d = dc * dc + dr * dr;
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        cluster.representatives.push_back(cluster.cells[best].world);

        // Large clusters get extra members, greedily kept whenever at least
        // sample_spacing away from every representative so far.
        if (static_cast<int>(cluster.cells.size()) > small_threshold) {
            for (const FrontierCell& cell : cluster.cells) {
                bool spaced = true;
                for (const Vec2& rep : cluster.representatives) {
                    if (distance(cell.world, rep) < sample_spacing) {
                        spaced = false;
                        break;
                    }
                }
                if (spaced) cluster.representatives.push_back(cell.world);
            }
        }
        clusters.push_back(std::move(cluster));
    }
    return clusters;
}

std::vector<TargetPoint> make_frontier_targets(const std::vector<FrontierCluster>& clusters,
                                               const std::vector<DetectionRegion>& regions,
                                               const Pose& pose, const SensorParams& sp,
                                               const TargetPool& pool, double dedup_radius,
                                               int tick, std::optional<double> fixed_vl) {
    std::vector<TargetPoint> out;
    for (const FrontierCluster& cluster : clusters) {
        for (const Vec2& rep : cluster.representatives) {
            bool duplicate = false;
            for (const TargetPoint& existing : pool.live) {
                if (existing.kind != TargetKind::Frontier) continue;
                if (distance(existing.world, rep) <= dedup_radius) {
                    duplicate = true;
                    break;
                }
            }
            for (const TargetPoint& fresh : out) {
                if (duplicate) break;
                if (distance(fresh.world, rep) <= dedup_radius) duplicate = true;
            }
            if (duplicate) continue;

            TargetPoint tp;
            tp.world = rep;
            tp.kind = TargetKind::Frontier;
            tp.vl_score =
                fixed_vl ? *fixed_vl : vl_score(angular_offset(rep, pose), regions, sp.hfov);
            tp.created_tick = tick;
            out.push_back(tp);
        }
    }
    return out;
}

int prune_stale_frontier_targets(TargetPool& pool, const OccupancyGrid& grid, const Pose& pose,
                                 const SensorParams& sp) {
    int removed = 0;
    auto it = pool.live.begin();
    while (it != pool.live.end()) {
        bool stale = false;
        if (it->kind == TargetKind::Frontier && in_wedge(it->world, pose, sp)) {
            auto idx = grid.world_to_grid(it->world);
            stale = !idx || !is_frontier_cell(grid, idx->col, idx->row);
        }
        if (stale) {
            it = pool.live.erase(it);
            ++removed;
        } else {
            ++it;
        }
    }
    return removed;
}

}  // namespace vlnav
