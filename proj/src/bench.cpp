#include "vlnav/bench.hpp"

#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>

#include "vlnav/rng.hpp"

namespace vlnav {

namespace {

std::string fmt(double v, const char* spec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

Metrics metrics_over(const std::vector<EpisodeRow>& rows, const BenchSpec& spec,
                     PolicyId policy, const WorldFamily* family) {
    std::vector<EpisodeResult> selected;
    for (const EpisodeRow& row : rows) {
        if (row.policy != policy) continue;
        if (family && row.family != *family) continue;
        selected.push_back(row.result);
    }
    (void)spec;
    return compute_metrics(selected);
}

}  // namespace

Metrics BenchResult::metrics(WorldFamily family, PolicyId policy) const {
    return metrics_over(rows, spec, policy, &family);
}

Metrics BenchResult::overall(PolicyId policy) const {
    return metrics_over(rows, spec, policy, nullptr);
}

BenchResult run_bench(const BenchSpec& spec) {
    BenchResult bench;
    bench.spec = spec;

    struct Task {
        WorldFamily family;
        PolicyId policy;
        uint64_t world_seed;
        size_t world_index;
    };

    // Each world is generated once and shared by every policy, with a common
    // episode seed, so policy comparisons are like-for-like.
    std::vector<World> worlds;
    std::vector<Task> tasks;
    for (size_t fi = 0; fi < spec.families.size(); ++fi) {
        for (int i = 0; i < spec.count; ++i) {
            const uint64_t world_seed =
                Rng::derive(spec.seed, fi * 100000ULL + static_cast<uint64_t>(i));
            worlds.push_back(generate_world(spec.families[fi], world_seed));
            for (PolicyId policy : spec.policies)
                tasks.push_back({spec.families[fi], policy, world_seed, worlds.size() - 1});
        }
    }

    bench.rows.resize(tasks.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& task = tasks[i];
            EpisodeRow row;
            row.family = task.family;
            row.policy = task.policy;
            row.world_seed = task.world_seed;
            row.result =
                run_episode(worlds[task.world_index], task.policy, spec.config,
                            Rng::derive(task.world_seed, 99));
            bench.rows[i] = std::move(row);
        }
    };

    const int jobs = std::max(1, spec.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<size_t>(jobs));
        for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }
    return bench;
}

std::string episodes_csv(const BenchResult& bench) {
    std::ostringstream os;
    os << "family,policy,seed,success,path_length,shortest_path,ticks,spl\n";
    for (const EpisodeRow& row : bench.rows) {
        const EpisodeResult& r = row.result;
        os << family_name(row.family) << ',' << policy_name(row.policy) << ','
           << row.world_seed << ',' << (r.success ? 1 : 0) << ','
           << fmt(r.path_length, "%.6f") << ',' << fmt(r.shortest_path, "%.6f") << ','
           << r.ticks << ',' << fmt(r.spl(), "%.6f") << '\n';
    }
    return os.str();
}

std::string aggregate_csv(const BenchResult& bench) {
    std::ostringstream os;
    os << "family,policy,sr,spl\n";
    for (WorldFamily family : bench.spec.families) {
        for (PolicyId policy : bench.spec.policies) {
            const Metrics m = bench.metrics(family, policy);
            os << family_name(family) << ',' << policy_name(policy) << ','
               << fmt(m.sr, "%.1f") << ',' << fmt(m.spl, "%.3f") << '\n';
        }
    }
    return os.str();
}

std::string aggregate_table(const BenchResult& bench) {
    std::ostringstream os;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-14s", "policy");
    os << buf;
    for (WorldFamily family : bench.spec.families) {
        std::snprintf(buf, sizeof buf, "  %-13s", family_name(family));
        os << buf;
    }
    os << "  overall\n";
    std::snprintf(buf, sizeof buf, "%-14s", "");
    os << buf;
    for (size_t i = 0; i <= bench.spec.families.size(); ++i) {
        std::snprintf(buf, sizeof buf, "  %-5s %-7s", "SR", "SPL");
        os << buf;
    }
    os << '\n';
    for (PolicyId policy : bench.spec.policies) {
        std::snprintf(buf, sizeof buf, "%-14s", policy_name(policy));
        os << buf;
        for (WorldFamily family : bench.spec.families) {
            const Metrics m = bench.metrics(family, policy);
            std::snprintf(buf, sizeof buf, "  %5.1f %-7.3f", m.sr, m.spl);
            os << buf;
        }
        const Metrics m = bench.overall(policy);
        std::snprintf(buf, sizeof buf, "  %5.1f %-7.3f", m.sr, m.spl);
        os << buf << '\n';
    }
    return os.str();
}

}  // namespace vlnav
