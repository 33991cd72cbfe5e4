#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vlnav/geometry.hpp"

namespace vlnav {

/// Cell states use the serialized convention directly: free = 0,
/// unknown = -1, occupied = 100.
enum class CellState : int8_t {
    Free = 0,
    Unknown = -1,
    Occupied = 100,
};

struct GridIndex {
    int col = 0;
    int row = 0;
    bool operator==(const GridIndex& o) const { return col == o.col && row == o.row; }
};

/// Rolling 2D occupancy grid. Row-major cells, origin = world position of the
/// lower-left corner of cell (0,0). Resolution is fixed for the lifetime of
/// the grid; expansion preserves every existing cell at its world position.
class OccupancyGrid {
public:
    OccupancyGrid(double resolution, Vec2 origin, int width, int height,
                  CellState fill = CellState::Unknown)
        : resolution_(resolution),
          origin_(origin),
          width_(width),
          height_(height),
          cells_(static_cast<size_t>(width) * height, fill) {}

    double resolution() const { return resolution_; }
    Vec2 origin() const { return origin_; }
    int width() const { return width_; }
    int height() const { return height_; }
    size_t size() const { return cells_.size(); }

    bool in_bounds(int col, int row) const {
        return col >= 0 && col < width_ && row >= 0 && row < height_;
    }
    bool in_bounds(const GridIndex& idx) const { return in_bounds(idx.col, idx.row); }

    CellState at(int col, int row) const {
        return cells_[static_cast<size_t>(row) * width_ + col];
    }
    CellState at(const GridIndex& idx) const { return at(idx.col, idx.row); }
    void set(int col, int row, CellState s) {
        cells_[static_cast<size_t>(row) * width_ + col] = s;
    }
    void set(const GridIndex& idx, CellState s) { set(idx.col, idx.row, s); }

    /// Grid index of a world point, or nullopt when outside the grid.
    std::optional<GridIndex> world_to_grid(const Vec2& p) const {
        const int col = static_cast<int>(std::floor((p.x - origin_.x) / resolution_));
        const int row = static_cast<int>(std::floor((p.y - origin_.y) / resolution_));
        if (!in_bounds(col, row)) return std::nullopt;
        return GridIndex{col, row};
    }

    /// Unbounded index (may lie outside the grid); used by expansion.
    GridIndex world_to_grid_unbounded(const Vec2& p) const {
        return {static_cast<int>(std::floor((p.x - origin_.x) / resolution_)),
                static_cast<int>(std::floor((p.y - origin_.y) / resolution_))};
    }

    Vec2 cell_center(int col, int row) const {
        return {origin_.x + (col + 0.5) * resolution_, origin_.y + (row + 0.5) * resolution_};
    }
    Vec2 cell_center(const GridIndex& idx) const { return cell_center(idx.col, idx.row); }

    const std::vector<CellState>& cells() const { return cells_; }

    bool operator==(const OccupancyGrid& o) const {
        return resolution_ == o.resolution_ && origin_ == o.origin_ && width_ == o.width_ &&
               height_ == o.height_ && cells_ == o.cells_;
    }

    /// Grows the grid by whole-cell margins (left/bottom shift the origin).
    /// New cells start Unknown; existing cells keep their world position.
    void grow(int left, int right, int bottom, int top);

    int count(CellState s) const;

private:
    double resolution_;
    Vec2 origin_;
    int width_;
    int height_;
    std::vector<CellState> cells_;
};

/// Writes the grid as a binary PGM (free=255, unknown=127, occupied=0) plus a
/// text sidecar "<path>.txt" carrying resolution/origin/size.
void save_pgm(const OccupancyGrid& grid, const std::string& path);

/// Writes an arbitrary per-cell byte field with the same sidecar convention.
void save_pgm_field(const std::vector<uint8_t>& bytes, int width, int height, double resolution,
                    Vec2 origin, const std::string& path);

}  // namespace vlnav
