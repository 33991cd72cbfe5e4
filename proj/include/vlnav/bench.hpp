#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vlnav/episode.hpp"
#include "vlnav/worldgen.hpp"

namespace vlnav {

struct BenchSpec {
    std::vector<WorldFamily> families;
    std::vector<PolicyId> policies;
    int count = 20;  // worlds per family
    uint64_t seed = 1;
    RunConfig config;
    int jobs = 1;
};

struct EpisodeRow {
    WorldFamily family;
    PolicyId policy;
    uint64_t world_seed = 0;
    EpisodeResult result;
};

struct BenchResult {
    BenchSpec spec;
    std::vector<EpisodeRow> rows;  // fixed order: family, then world, then policy

    /// Aggregate over the rows of one (family, policy) cell.
    Metrics metrics(WorldFamily family, PolicyId policy) const;
    /// Aggregate over all families for one policy.
    Metrics overall(PolicyId policy) const;
};

/// Runs count worlds per family under every policy. Worlds and episode seeds
/// are derived from spec.seed, and every policy sees the same worlds with
/// the same seeds, so results are reproducible and policy-comparable. jobs >
/// 1 runs episodes on that many threads; output order is unaffected.
BenchResult run_bench(const BenchSpec& spec);

/// Per-episode CSV: family,policy,seed,success,path_length,shortest_path,ticks,spl
std::string episodes_csv(const BenchResult& bench);

/// Aggregate CSV: family,policy,sr,spl
std::string aggregate_csv(const BenchResult& bench);

/// Aligned text table, one row per policy, SR/SPL per family plus overall.
std::string aggregate_table(const BenchResult& bench);

}  // namespace vlnav
