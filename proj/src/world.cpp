#include "vlnav/world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace vlnav {

using nlohmann::json;

namespace {

double require_number(const json& j, const std::string& key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_number())
        throw WorldError(ctx + ": missing or non-numeric key \"" + key + "\"");
    return j[key].get<double>();
}

std::string require_string(const json& j, const std::string& key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_string())
        throw WorldError(ctx + ": missing or non-string key \"" + key + "\"");
    return j[key].get<std::string>();
}

}  // namespace

World world_from_json_text(const std::string& text, const std::string& origin_name) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw WorldError(origin_name + ": JSON parse error: " + e.what());
    }

    if (!j.contains("format") || !j["format"].is_number_integer() || j["format"].get<int>() != 1)
        throw WorldError(origin_name + ": key \"format\" must be the integer 1");

    World w;
    if (!j.contains("bounds") || !j["bounds"].is_object())
        throw WorldError(origin_name + ": missing object key \"bounds\"");
    w.width = require_number(j["bounds"], "width", origin_name + ": bounds");
    w.height = require_number(j["bounds"], "height", origin_name + ": bounds");

    if (!j.contains("start") || !j["start"].is_object())
        throw WorldError(origin_name + ": missing object key \"start\"");
    w.start = Pose(require_number(j["start"], "x", origin_name + ": start"),
                   require_number(j["start"], "y", origin_name + ": start"),
                   require_number(j["start"], "theta", origin_name + ": start"));

    w.prompt_label = require_string(j, "prompt_label", origin_name);

    if (j.contains("walls")) {
        if (!j["walls"].is_array())
            throw WorldError(origin_name + ": key \"walls\" must be an array");
        for (size_t i = 0; i < j["walls"].size(); ++i) {
            const json& seg = j["walls"][i];
            if (!seg.is_array() || seg.size() != 4 ||
                !std::all_of(seg.begin(), seg.end(), [](const json& v) { return v.is_number(); }))
                throw WorldError(origin_name + ": walls[" + std::to_string(i) +
                                 "] must be [x1,y1,x2,y2]");
            w.walls.push_back({{seg[0].get<double>(), seg[1].get<double>()},
                               {seg[2].get<double>(), seg[3].get<double>()}});
        }
    }

    if (j.contains("objects")) {
        if (!j["objects"].is_array())
            throw WorldError(origin_name + ": key \"objects\" must be an array");
        for (size_t i = 0; i < j["objects"].size(); ++i) {
            const json& jo = j["objects"][i];
            const std::string ctx = origin_name + ": objects[" + std::to_string(i) + "]";
            if (!jo.is_object()) throw WorldError(ctx + " must be an object");
            if (!jo.contains("position") || !jo["position"].is_array() ||
                jo["position"].size() != 2)
                throw WorldError(ctx + ": key \"position\" must be [x,y]");
            SimObject o;
            o.position = {jo["position"][0].get<double>(), jo["position"][1].get<double>()};
            o.label = require_string(jo, "label", ctx);
            o.extent = jo.value("extent", 0.2);
            o.base_conf = jo.value("base_conf", 0.9);
            o.is_target = jo.value("is_target", false);
            if (o.is_target) {
                if (w.target_index >= 0)
                    throw WorldError(origin_name +
                                     ": more than one object has \"is_target\": true");
                w.target_index = static_cast<int>(i);
            }
            w.objects.push_back(std::move(o));
        }
    }

    auto violations = validate_world(w);
    if (!violations.empty()) throw WorldError(origin_name + ": " + violations.front());
    return w;
}

World load_world(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw WorldError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return world_from_json_text(buf.str(), path);
}

std::string world_to_json_text(const World& world) {
    json j;
    j["format"] = 1;
    j["bounds"] = {{"width", world.width}, {"height", world.height}};
    j["start"] = {{"x", world.start.x}, {"y", world.start.y}, {"theta", world.start.theta}};
    j["prompt_label"] = world.prompt_label;
    j["walls"] = json::array();
    for (const Segment& s : world.walls) j["walls"].push_back({s.a.x, s.a.y, s.b.x, s.b.y});
    j["objects"] = json::array();
    for (const SimObject& o : world.objects) {
        j["objects"].push_back({{"position", {o.position.x, o.position.y}},
                                {"label", o.label},
                                {"extent", o.extent},
                                {"base_conf", o.base_conf},
                                {"is_target", o.is_target}});
    }
    return j.dump(2) + "\n";
}

void save_world(const World& world, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw WorldError(path + ": cannot open file for writing");
    out << world_to_json_text(world);
}

std::vector<std::string> validate_world(const World& world) {
    std::vector<std::string> errs;
    if (!(world.width > 0.0) || !(world.height > 0.0))
        errs.push_back("bounds: width and height must be positive");
    if (world.prompt_label.empty()) errs.push_back("prompt_label: must be non-empty");

    int targets = 0;
    for (size_t i = 0; i < world.objects.size(); ++i) {
        const SimObject& o = world.objects[i];
        const std::string ctx = "objects[" + std::to_string(i) + "]";
        if (o.is_target) ++targets;
        if (!(o.extent > 0.0)) errs.push_back(ctx + ": extent must be positive");
        if (o.base_conf < 0.0 || o.base_conf > 1.0)
            errs.push_back(ctx + ": base_conf must be in [0,1]");
        if (!world.contains(o.position)) errs.push_back(ctx + ": position outside bounds");
    }
    if (targets != 1)
        errs.push_back("objects: exactly one object must have is_target true (found " +
                       std::to_string(targets) + ")");
    if (targets == 1) {
        int idx = world.target_index;
        if (idx < 0 || idx >= static_cast<int>(world.objects.size()) ||
            !world.objects[idx].is_target)
            errs.push_back("target index does not point at the is_target object");
        else if (world.objects[idx].label != world.prompt_label)
            errs.push_back("prompt_label: does not match the target object's label");
    }

    if (!world.contains(world.start.position()))
        errs.push_back("start: pose outside bounds");
    for (size_t i = 0; i < world.walls.size(); ++i) {
        if (point_segment_distance(world.start.position(), world.walls[i]) < 1e-9) {
            errs.push_back("start: pose lies on walls[" + std::to_string(i) + "]");
            break;
        }
    }
    return errs;
}

OccupancyGrid build_ground_truth_grid(const World& world, double resolution,
                                      double inflation_radius) {
    const int width = static_cast<int>(std::ceil(world.width / resolution));
    const int height = static_cast<int>(std::ceil(world.height / resolution));
    OccupancyGrid grid(resolution, {0.0, 0.0}, width, height, CellState::Free);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const Vec2 center = grid.cell_center(c, r);
            bool occupied = false;
            for (const Segment& wall : world.walls) {
                if (point_segment_distance(center, wall) <= inflation_radius) {
                    occupied = true;
                    break;
                }
            }
            if (!occupied) {
                for (const SimObject& o : world.objects) {
                    if (distance(center, o.position) <= o.extent + inflation_radius) {
                        occupied = true;
                        break;
                    }
                }
            }
            if (occupied) grid.set(c, r, CellState::Occupied);
        }
    }
    return grid;
}

}  // namespace vlnav
