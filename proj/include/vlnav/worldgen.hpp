#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vlnav/world.hpp"

namespace vlnav {

/// Procedural scene families, each with its own footprint and clutter
/// profile: HALLWAY = long branched corridor, few objects; OFFICE = room
/// grid, many same-label distractors; APARTMENT = small multi-room, dense
/// objects; OUTDOOR = large sparse open area.
enum class WorldFamily { Hallway, Office, Apartment, Outdoor };

const char* family_name(WorldFamily f);
bool family_from_name(const std::string& name, WorldFamily& out);
std::vector<WorldFamily> all_families();

/// Deterministic per (family, seed): same arguments, identical worlds. Every
/// generated world validates cleanly and has a ground-truth route from start
/// to the target's surroundings.
World generate_world(WorldFamily family, uint64_t seed);
std::vector<World> generate_worlds(WorldFamily family, uint64_t seed, int count);

/// Asymmetric corridor: a high-confidence cue object sits to the right of
/// start within detection range, while the bulk of the unexplored area (side
/// rooms) lies to the left. Separates detection-guided navigation from
/// nearest-frontier sweeps.
World make_cue_corridor(uint64_t seed);

}  // namespace vlnav
