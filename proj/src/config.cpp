#include "vlnav/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

namespace vlnav {

using nlohmann::json;

namespace {

struct KeyBinding {
    std::function<void(RunConfig&, const json&)> apply;
    std::function<std::string(const RunConfig&)> show;
};

template <typename T>
KeyBinding bind(T RunConfig::* member, const std::string& key) {
    return {
        [member, key](RunConfig& cfg, const json& v) {
            if constexpr (std::is_same_v<T, int>) {
                if (!v.is_number_integer())
                    throw ConfigError("config key \"" + key + "\" must be an integer");
            } else {
                if (!v.is_number())
                    throw ConfigError("config key \"" + key + "\" must be a number");
            }
            cfg.*member = v.get<T>();
        },
        [member](const RunConfig& cfg) {
            std::ostringstream os;
            os << cfg.*member;
            return os.str();
        },
    };
}

// std::map keeps describe_config output sorted and stable.
const std::map<std::string, KeyBinding>& bindings() {
    static const std::map<std::string, KeyBinding> table = {
        {"resolution", bind(&RunConfig::resolution, "resolution")},
        {"hfov", bind(&RunConfig::hfov, "hfov")},
        {"range", bind(&RunConfig::range, "range")},
        {"n_rays", bind(&RunConfig::n_rays, "n_rays")},
        {"inflation_radius", bind(&RunConfig::inflation_radius, "inflation_radius")},
        {"chunk", bind(&RunConfig::chunk, "chunk")},
        {"small_threshold", bind(&RunConfig::small_threshold, "small_threshold")},
        {"sample_spacing", bind(&RunConfig::sample_spacing, "sample_spacing")},
        {"tau_det", bind(&RunConfig::tau_det, "tau_det")},
        {"sigma_det", bind(&RunConfig::sigma_det, "sigma_det")},
        {"sigma_pos", bind(&RunConfig::sigma_pos, "sigma_pos")},
        {"sigma_conf", bind(&RunConfig::sigma_conf, "sigma_conf")},
        {"detection_range", bind(&RunConfig::detection_range, "detection_range")},
        {"falloff_dmax", bind(&RunConfig::falloff_dmax, "falloff_dmax")},
        {"voxel", bind(&RunConfig::voxel, "voxel")},
        {"dedup_radius", bind(&RunConfig::dedup_radius, "dedup_radius")},
        {"w_dist", bind(&RunConfig::w_dist, "w_dist")},
        {"w_vl", bind(&RunConfig::w_vl, "w_vl")},
        {"k_unknown", bind(&RunConfig::k_unknown, "k_unknown")},
        {"unknown_bfs_radius", bind(&RunConfig::unknown_bfs_radius, "unknown_bfs_radius")},
        {"delta_reached", bind(&RunConfig::delta_reached, "delta_reached")},
        {"unknown_penalty", bind(&RunConfig::unknown_penalty, "unknown_penalty")},
        {"step_len", bind(&RunConfig::step_len, "step_len")},
        {"rot_step", bind(&RunConfig::rot_step, "rot_step")},
        {"stuck_window", bind(&RunConfig::stuck_window, "stuck_window")},
        {"min_progress", bind(&RunConfig::min_progress, "min_progress")},
        {"success_radius", bind(&RunConfig::success_radius, "success_radius")},
        {"path_budget_factor", bind(&RunConfig::path_budget_factor, "path_budget_factor")},
        {"tick_budget", bind(&RunConfig::tick_budget, "tick_budget")},
    };
    return table;
}

void check_values(const RunConfig& cfg) {
    auto positive = [](double v, const char* key) {
        if (!(v > 0.0)) throw ConfigError(std::string("config key \"") + key + "\" must be > 0");
    };
    positive(cfg.resolution, "resolution");
    positive(cfg.hfov, "hfov");
    positive(cfg.range, "range");
    positive(cfg.sigma_det, "sigma_det");
    positive(cfg.falloff_dmax, "falloff_dmax");
    positive(cfg.k_unknown, "k_unknown");
    positive(cfg.unknown_bfs_radius, "unknown_bfs_radius");
    positive(cfg.step_len, "step_len");
    positive(cfg.success_radius, "success_radius");
    if (cfg.inflation_radius < 0.0)
        throw ConfigError("config key \"inflation_radius\" must be >= 0");
    if (cfg.w_dist < 0.0 || cfg.w_vl < 0.0 || cfg.w_dist + cfg.w_vl <= 0.0)
        throw ConfigError("config keys \"w_dist\"/\"w_vl\" must be >= 0 and sum > 0");
    if (cfg.unknown_penalty < 1.0)
        throw ConfigError("config key \"unknown_penalty\" must be >= 1");
    if (cfg.stuck_window < 2) throw ConfigError("config key \"stuck_window\" must be >= 2");
    if (cfg.tick_budget < 1) throw ConfigError("config key \"tick_budget\" must be >= 1");
    if (cfg.path_budget_factor < 1.0)
        throw ConfigError("config key \"path_budget_factor\" must be >= 1");
}

}  // namespace

RunConfig config_from_json_text(const std::string& text, const std::string& origin_name) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin_name + ": JSON parse error: " + e.what());
    }
    if (!j.is_object()) throw ConfigError(origin_name + ": config must be a JSON object");

    RunConfig cfg;
    const auto& table = bindings();
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto binding = table.find(it.key());
        if (binding == table.end())
            throw ConfigError(origin_name + ": unknown config key \"" + it.key() + "\"");
        binding->second.apply(cfg, it.value());
    }
    check_values(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json_text(buf.str(), path);
}

std::string describe_config(const RunConfig& cfg) {
    std::ostringstream os;
    for (const auto& [key, binding] : bindings()) os << key << " = " << binding.show(cfg) << "\n";
    return os.str();
}

}  // namespace vlnav
