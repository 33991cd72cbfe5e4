#include "vlnav/mapping.hpp"

#include <algorithm>
#include <unordered_set>

namespace vlnav {

namespace {

int ceil_to_chunk(int needed, int chunk) {
    return ((needed + chunk - 1) / chunk) * chunk;
}

}  // namespace

void expand_if_needed(OccupancyGrid& grid, const PointCloud& cloud, const Pose& pose, int chunk) {
    int min_col = 0, min_row = 0;
    int max_col = grid.width() - 1, max_row = grid.height() - 1;
    auto cover = [&](const Vec2& p) {
        const GridIndex idx = grid.world_to_grid_unbounded(p);
        min_col = std::min(min_col, idx.col);
        max_col = std::max(max_col, idx.col);
        min_row = std::min(min_row, idx.row);
        max_row = std::max(max_row, idx.row);
    };
    cover(pose.position());
    for (const Vec2& p : cloud.points()) cover(p);

    const int left = min_col < 0 ? ceil_to_chunk(-min_col, chunk) : 0;
    const int bottom = min_row < 0 ? ceil_to_chunk(-min_row, chunk) : 0;
    const int right = max_col >= grid.width() ? ceil_to_chunk(max_col - grid.width() + 1, chunk) : 0;
    const int top = max_row >= grid.height() ? ceil_to_chunk(max_row - grid.height() + 1, chunk) : 0;
    grid.grow(left, right, bottom, top);
}

int clear_stale_obstacles_fov(OccupancyGrid& grid, const PointCloud& cloud, const Pose& pose,
                              const SensorParams& sp) {
    // A cell is supported while at least one cloud point maps to it.
    std::unordered_set<int64_t> supported;
    supported.reserve(cloud.size() * 2);
    for (const Vec2& p : cloud.points()) {
        if (auto idx = grid.world_to_grid(p))
            supported.insert(static_cast<int64_t>(idx->row) * grid.width() + idx->col);
    }

    const double res = grid.resolution();
    const int r_cells = static_cast<int>(std::ceil(sp.range / res)) + 1;
    const GridIndex center = grid.world_to_grid_unbounded(pose.position());
    const int c0 = std::max(0, center.col - r_cells), c1 = std::min(grid.width() - 1, center.col + r_cells);
    const int r0 = std::max(0, center.row - r_cells), r1 = std::min(grid.height() - 1, center.row + r_cells);

    int changed = 0;
    for (int row = r0; row <= r1; ++row) {
        for (int col = c0; col <= c1; ++col) {
            if (grid.at(col, row) != CellState::Occupied) continue;
            if (!in_wedge(grid.cell_center(col, row), pose, sp)) continue;
            if (supported.count(static_cast<int64_t>(row) * grid.width() + col)) continue;
            grid.set(col, row, CellState::Free);
            ++changed;
        }
    }
    return changed;
}

int mark_new_obstacles(OccupancyGrid& grid, const PointCloud& cloud, const Pose& pose,
                       const SensorParams& sp) {
    const double res = grid.resolution();
    // Inflation offsets: integer cell offsets whose center distance (in
    // meters) is within inflation_radius.
    std::vector<GridIndex> offsets;
    const int r_cells = static_cast<int>(std::floor(sp.inflation_radius / res + 1e-9));
    for (int dr = -r_cells; dr <= r_cells; ++dr)
        for (int dc = -r_cells; dc <= r_cells; ++dc)
            if (res * std::hypot(dc, dr) <= sp.inflation_radius) offsets.push_back({dc, dr});

    int changed = 0;
    for (const Vec2& p : cloud.points()) {
        if (distance(p, pose.position()) > sp.range) continue;
        const auto idx = grid.world_to_grid(p);
        if (!idx) continue;
        for (const GridIndex& off : offsets) {
            const int col = idx->col + off.col;
            const int row = idx->row + off.row;
            if (!grid.in_bounds(col, row)) continue;
            if (grid.at(col, row) != CellState::Occupied) {
                grid.set(col, row, CellState::Occupied);
                ++changed;
            }
        }
    }
    return changed;
}

int perform_raycasting(OccupancyGrid& grid, const Pose& pose, const SensorParams& sp) {
    const auto start = grid.world_to_grid(pose.position());
    if (!start) return 0;

    const double res = grid.resolution();
    const Vec2 org = grid.origin();
    const int rays = std::max(1, sp.effective_rays(res));
    const double half = sp.hfov / 2.0;
    const double inf = std::numeric_limits<double>::infinity();

    int changed = 0;
    for (int i = 0; i < rays; ++i) {
        const double frac = rays == 1 ? 0.5 : static_cast<double>(i) / (rays - 1);
        const double angle = pose.theta - half + sp.hfov * frac;
        const double dx = std::cos(angle), dy = std::sin(angle);

        // Grid DDA walk: advances one cell boundary at a time, so no cell
        // along the ray is skipped.
        int col = start->col, row = start->row;
        const int step_c = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
        const int step_r = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
        const double t_delta_c = dx != 0.0 ? res / std::abs(dx) : inf;
        const double t_delta_r = dy != 0.0 ? res / std::abs(dy) : inf;
        double t_max_c = inf, t_max_r = inf;
        if (dx > 0) t_max_c = (org.x + (col + 1) * res - pose.x) / dx;
        else if (dx < 0) t_max_c = (org.x + col * res - pose.x) / dx;
        if (dy > 0) t_max_r = (org.y + (row + 1) * res - pose.y) / dy;
        else if (dy < 0) t_max_r = (org.y + row * res - pose.y) / dy;

        while (true) {
            if (!grid.in_bounds(col, row)) break;
            const CellState s = grid.at(col, row);
            if (s == CellState::Occupied) break;  // line of sight ends here
            if (s == CellState::Unknown && in_wedge(grid.cell_center(col, row), pose, sp)) {
                grid.set(col, row, CellState::Free);
                ++changed;
            }
            double t;
            if (t_max_c < t_max_r) {
                t = t_max_c;
                col += step_c;
                t_max_c += t_delta_c;
            } else {
                t = t_max_r;
                row += step_r;
                t_max_r += t_delta_r;
            }
            if (t > sp.range) break;
        }
    }
    return changed;
}

void update(OccupancyGrid& grid, const PointCloud& cloud, const Pose& pose,
            const SensorParams& sp, int chunk) {
    expand_if_needed(grid, cloud, pose, chunk);
    clear_stale_obstacles_fov(grid, cloud, pose, sp);
    mark_new_obstacles(grid, cloud, pose, sp);
    perform_raycasting(grid, pose, sp);
}

}  // namespace vlnav
