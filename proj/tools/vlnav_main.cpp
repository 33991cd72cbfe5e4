#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vlnav/bench.hpp"
#include "vlnav/config.hpp"
#include "vlnav/episode.hpp"
#include "vlnav/world.hpp"
#include "vlnav/worldgen.hpp"

namespace {

using namespace vlnav;

RunConfig load_config_or_default(const std::string& path) {
    if (path.empty()) return RunConfig{};
    return load_config(path);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open file for writing");
    out << content;
}

std::string episode_csv_row(const std::string& family, PolicyId policy, uint64_t seed,
                            const EpisodeResult& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%s,%llu,%d,%.6f,%.6f,%d,%.6f\n", family.c_str(),
                  policy_name(policy), static_cast<unsigned long long>(seed),
                  r.success ? 1 : 0, r.path_length, r.shortest_path, r.ticks, r.spl());
    return buf;
}

int cmd_run(const std::string& world_file, const std::string& policy_name_arg,
            const std::string& config_file, uint64_t seed, const std::string& out_dir,
            int dump_maps_every) {
    const RunConfig cfg = load_config_or_default(config_file);
    const World world = load_world(world_file);
    PolicyId policy;
    if (!policy_from_name(policy_name_arg, policy))
        throw std::runtime_error("unknown policy \"" + policy_name_arg + "\"");

    std::filesystem::create_directories(out_dir);
    EpisodeTrace trace;
    trace.out_dir = out_dir;
    trace.dump_maps_every = dump_maps_every;

    const EpisodeResult r = run_episode(world, policy, cfg, seed,
                                        dump_maps_every > 0 ? &trace : nullptr);

    std::ostringstream csv;
    csv << "family,policy,seed,success,path_length,shortest_path,ticks,spl\n"
        << episode_csv_row(std::filesystem::path(world_file).stem().string(), policy, seed, r);
    write_file(out_dir + "/result.csv", csv.str());

    std::ostringstream traj;
    traj << "tick,x,y,theta\n";
    for (size_t i = 0; i < r.trajectory.size(); ++i) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f,%.6f\n", i, r.trajectory[i].x,
                      r.trajectory[i].y, r.trajectory[i].theta);
        traj << buf;
    }
    write_file(out_dir + "/trajectory.csv", traj.str());

    std::cout << (r.success ? "success" : "failure") << " after " << r.ticks << " ticks, path "
              << r.path_length << " m (shortest " << r.shortest_path << " m, spl " << r.spl()
              << ")\n";
    return 0;
}

std::vector<std::string> split_csv_arg(const std::string& arg) {
    std::vector<std::string> parts;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

int cmd_bench(const std::string& families_arg, const std::string& policies_arg, int count,
              uint64_t seed, const std::string& config_file, const std::string& out_dir,
              int jobs) {
    BenchSpec spec;
    spec.config = load_config_or_default(config_file);
    spec.count = count;
    spec.seed = seed;
    spec.jobs = jobs;

    if (families_arg == "all") {
        spec.families = all_families();
    } else {
        for (const std::string& name : split_csv_arg(families_arg)) {
            WorldFamily f;
            if (!family_from_name(name, f))
                throw std::runtime_error("unknown family \"" + name + "\"");
            spec.families.push_back(f);
        }
    }
    if (policies_arg == "all") {
        spec.policies = all_policies();
    } else {
        for (const std::string& name : split_csv_arg(policies_arg)) {
            PolicyId p;
            if (!policy_from_name(name, p))
                throw std::runtime_error("unknown policy \"" + name + "\"");
            spec.policies.push_back(p);
        }
    }
    if (spec.families.empty() || spec.policies.empty())
        throw std::runtime_error("bench needs at least one family and one policy");

    const BenchResult bench = run_bench(spec);

    std::filesystem::create_directories(out_dir);
    write_file(out_dir + "/episodes.csv", episodes_csv(bench));
    write_file(out_dir + "/aggregate.csv", aggregate_csv(bench));
    const std::string table = aggregate_table(bench);
    write_file(out_dir + "/table.txt", table);
    std::cout << table;
    return 0;
}

int cmd_validate(const std::string& world_file) {
    std::ifstream in(world_file);
    if (!in) {
        std::cerr << world_file << ": cannot open file\n";
        return 1;
    }
    std::ostringstream buf;
    buf << in.rdbuf();

    World w;
    try {
        w = world_from_json_text(buf.str(), world_file);
    } catch (const WorldError& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
    const auto violations = validate_world(w);
    if (violations.empty()) {
        std::cout << "OK\n";
        return 0;
    }
    for (const std::string& v : violations) std::cerr << world_file << ": " << v << '\n';
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"prompt-directed frontier navigation simulator"};
    app.require_subcommand(0, 1);

    bool print_config = false;
    app.add_flag("--print-config", print_config, "print every config key with its value");
    std::string global_config;
    app.add_option("--config", global_config, "JSON config file (overrides defaults)");

    auto* run = app.add_subcommand("run", "run one episode on a world file");
    std::string run_world, run_policy = "full", run_out = "out";
    uint64_t run_seed = 1;
    int run_dump = 0;
    run->add_option("world", run_world, "world JSON file")->required();
    run->add_option("--policy", run_policy, "full|no_instance|no_curiosity|frontier_only|image_level");
    run->add_option("--seed", run_seed, "episode seed");
    run->add_option("--out", run_out, "output directory");
    run->add_option("--dump-maps-every", run_dump, "dump occupancy/value PGMs every N ticks");

    auto* bench = app.add_subcommand("bench", "benchmark policies over generated worlds");
    std::string bench_families = "all", bench_policies = "all", bench_out = "bench_out";
    int bench_count = 20, bench_jobs = 1;
    uint64_t bench_seed = 1;
    bench->add_option("--families", bench_families, "comma list or \"all\"");
    bench->add_option("--policies", bench_policies, "comma list or \"all\"");
    bench->add_option("--count", bench_count, "worlds per family")->check(CLI::PositiveNumber);
    bench->add_option("--seed", bench_seed, "benchmark seed");
    bench->add_option("--jobs", bench_jobs, "parallel episodes")->check(CLI::PositiveNumber);
    bench->add_option("--out", bench_out, "output directory");

    auto* validate = app.add_subcommand("validate", "check a world file's invariants");
    std::string validate_world_file;
    validate->add_option("world", validate_world_file, "world JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (print_config) {
            std::cout << describe_config(load_config_or_default(global_config));
            return 0;
        }
        if (run->parsed())
            return cmd_run(run_world, run_policy, global_config, run_seed, run_out, run_dump);
        if (bench->parsed())
            return cmd_bench(bench_families, bench_policies, bench_count, bench_seed,
                             global_config, bench_out, bench_jobs);
        if (validate->parsed()) return cmd_validate(validate_world_file);
        std::cout << app.help();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
