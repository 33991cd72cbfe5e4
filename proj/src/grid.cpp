#include "vlnav/grid.hpp"

#include <fstream>
#include <stdexcept>

namespace vlnav {

void OccupancyGrid::grow(int left, int right, int bottom, int top) {
    if (left == 0 && right == 0 && bottom == 0 && top == 0) return;
    const int new_w = width_ + left + right;
    const int new_h = height_ + bottom + top;
    std::vector<CellState> fresh(static_cast<size_t>(new_w) * new_h, CellState::Unknown);
    for (int r = 0; r < height_; ++r) {
        const size_t src = static_cast<size_t>(r) * width_;
        const size_t dst = static_cast<size_t>(r + bottom) * new_w + left;
        std::copy(cells_.begin() + src, cells_.begin() + src + width_, fresh.begin() + dst);
    }
    cells_ = std::move(fresh);
    width_ = new_w;
    height_ = new_h;
    origin_.x -= left * resolution_;
    origin_.y -= bottom * resolution_;
}

int OccupancyGrid::count(CellState s) const {
    int n = 0;
    for (CellState c : cells_)
        if (c == s) ++n;
    return n;
}

namespace {

uint8_t cell_byte(CellState s) {
    switch (s) {
        case CellState::Free: return 255;
        case CellState::Unknown: return 127;
        case CellState::Occupied: return 0;
    }
    return 127;
}

void write_sidecar(const std::string& path, double resolution, Vec2 origin, int w, int h) {
    std::ofstream meta(path);
    meta << "resolution: " << resolution << "\n"
         << "origin: " << origin.x << " " << origin.y << "\n"
         << "width: " << w << "\n"
         << "height: " << h << "\n";
}

}  // namespace

void save_pgm(const OccupancyGrid& grid, const std::string& path) {
    std::vector<uint8_t> bytes;
    bytes.reserve(grid.size());
    // PGM rows go top to bottom; grid rows go bottom to top.
    for (int r = grid.height() - 1; r >= 0; --r)
        for (int c = 0; c < grid.width(); ++c) bytes.push_back(cell_byte(grid.at(c, r)));
    save_pgm_field(bytes, grid.width(), grid.height(), grid.resolution(), grid.origin(), path);
}

void save_pgm_field(const std::vector<uint8_t>& bytes, int width, int height, double resolution,
                    Vec2 origin, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "P5\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    write_sidecar(path + ".txt", resolution, origin, width, height);
}

}  // namespace vlnav
