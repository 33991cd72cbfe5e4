#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "vlnav/geometry.hpp"
#include "vlnav/grid.hpp"

namespace vlnav {

struct SimObject {
    Vec2 position;
    std::string label;
    double extent = 0.2;     // footprint radius, meters
    double base_conf = 0.9;  // detector confidence at ideal view
    bool is_target = false;
};

/// Ground-truth scene: axis-aligned bounds [0,w] x [0,h], wall segments,
/// labeled objects, robot start, and the prompt the target answers to.
struct World {
    double width = 0.0;
    double height = 0.0;
    std::vector<Segment> walls;
    std::vector<SimObject> objects;
    Pose start;
    std::string prompt_label;
    int target_index = -1;

    const SimObject& target() const { return objects.at(target_index); }
    bool contains(const Vec2& p) const {
        return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
    }
};

class WorldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses a world JSON file (format 1). Throws WorldError naming the
/// offending key on malformed input or violated invariants.
World load_world(const std::string& path);
World world_from_json_text(const std::string& text, const std::string& origin_name);

void save_world(const World& world, const std::string& path);
std::string world_to_json_text(const World& world);

/// Checks every world invariant; returns one message per violation.
std::vector<std::string> validate_world(const World& world);

/// Fully-observed occupancy grid of the scene: wall segments and object
/// footprints inflated by inflation_radius, everything else free.
OccupancyGrid build_ground_truth_grid(const World& world, double resolution,
                                      double inflation_radius);

}  // namespace vlnav
