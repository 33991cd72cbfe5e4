#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "vlnav/scoring.hpp"

using namespace vlnav;

namespace {
constexpr double kTol = 1e-9;
}

TEST_CASE("angular offset") {
    CHECK(angular_offset({1.0, 1.0}, Pose{0.0, 0.0, 0.0}) ==
          doctest::Approx(M_PI / 4.0).epsilon(kTol));
    CHECK(angular_offset({-1.0, 0.0}, Pose{0.0, 0.0, 0.0}) == doctest::Approx(M_PI).epsilon(kTol));
    CHECK(angular_offset({0.0, -1.0}, Pose{0.0, 0.0, M_PI / 2.0}) ==
          doctest::Approx(M_PI).epsilon(kTol));  // wraps onto the (-pi, pi] boundary
    CHECK(angular_offset({2.0, 0.0}, Pose{1.0, 0.0, 0.3}) == doctest::Approx(-0.3).epsilon(kTol));
    CHECK(angular_offset({3.0, 4.0}, Pose{3.0, 4.0, 1.2}) == 0.0);  // coincident goal
}

TEST_CASE("view confidence falloff") {
    const double fov = M_PI;
    CHECK(view_confidence(0.0, fov) == doctest::Approx(1.0).epsilon(kTol));
    const double mid = std::cos(M_PI / 4.0) * std::cos(M_PI / 4.0);
    CHECK(view_confidence(fov / 4.0, fov) == doctest::Approx(mid).epsilon(kTol));
    CHECK(view_confidence(-fov / 4.0, fov) == doctest::Approx(mid).epsilon(kTol));
    CHECK(view_confidence(fov / 2.0, fov) == doctest::Approx(0.0).scale(1.0));
    CHECK(view_confidence(fov / 2.0 + 1e-6, fov) == 0.0);
    CHECK(view_confidence(-fov, fov) == 0.0);
}

TEST_CASE("detection mixture score") {
    const double fov = M_PI;

    SUBCASE("single region at its mean") {
        std::vector<DetectionRegion> regions = {{0.0, 0.1, 1.0}};
        CHECK(vl_score(0.0, regions, fov) == doctest::Approx(1.0).epsilon(kTol));
    }
    SUBCASE("single region off its mean") {
        std::vector<DetectionRegion> regions = {{0.0, 0.1, 1.0}};
        const double expect = std::exp(-0.5) * std::pow(std::cos(0.1 / (fov / 2.0) * M_PI / 2.0), 2.0);
        CHECK(vl_score(0.1, regions, fov) == doctest::Approx(expect).epsilon(kTol));
    }
    SUBCASE("two regions sum") {
        std::vector<DetectionRegion> regions = {{0.2, 0.1, 0.5}, {-0.3, 0.2, 0.4}};
        const double dt = 0.1;
        const double z1 = (dt - 0.2) / 0.1, z2 = (dt + 0.3) / 0.2;
        const double c = std::pow(std::cos(dt / (fov / 2.0) * M_PI / 2.0), 2.0);
        const double expect = (0.5 * std::exp(-0.5 * z1 * z1) + 0.4 * std::exp(-0.5 * z2 * z2)) * c;
        CHECK(vl_score(dt, regions, fov) == doctest::Approx(expect).epsilon(kTol));
    }
    SUBCASE("outside the field of view") {
        std::vector<DetectionRegion> regions = {{0.0, 0.1, 1.0}};
        CHECK(vl_score(fov / 2.0 + 0.01, regions, fov) == 0.0);
        CHECK(vl_score(-2.0, regions, fov) == 0.0);
    }
    SUBCASE("no regions") {
        CHECK(vl_score(0.0, {}, fov) == 0.0);
    }
    SUBCASE("mirror symmetry") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> ang(-1.4, 1.4);
        for (int i = 0; i < 100; ++i) {
            const double dt = ang(rng);
            const double mu = ang(rng);
            std::vector<DetectionRegion> a = {{mu, 0.15, 0.8}};
            std::vector<DetectionRegion> b = {{-mu, 0.15, 0.8}};
            CHECK(vl_score(dt, a, M_PI) == doctest::Approx(vl_score(-dt, b, M_PI)).epsilon(kTol));
        }
    }
    SUBCASE("bounded by total mixture weight") {
        std::mt19937 rng(8);
        std::uniform_real_distribution<double> ang(-1.5, 1.5);
        std::vector<DetectionRegion> regions = {{0.3, 0.1, 0.6}, {-0.2, 0.3, 0.35}};
        for (int i = 0; i < 200; ++i) {
            const double s = vl_score(ang(rng), regions, M_PI);
            CHECK(s >= 0.0);
            CHECK(s <= 0.95 + kTol);
        }
    }
}

TEST_CASE("distance score") {
    CHECK(distance_score(0.0) == doctest::Approx(1.0).epsilon(kTol));
    CHECK(distance_score(1.0) == doctest::Approx(0.5).epsilon(kTol));
    CHECK(distance_score(3.0) == doctest::Approx(0.25).epsilon(kTol));
    for (double d = 0.0; d < 8.0; d += 0.5) CHECK(distance_score(d) > distance_score(d + 0.5));
}

TEST_CASE("unknown area ratio") {
    // radius 0.29 at 0.1m resolution covers exactly the 5x5 center-distance
    // neighborhood (corner offset = 0.1 * sqrt(8) = 0.283).
    const double radius = 0.29;
    OccupancyGrid g(0.1, {0.0, 0.0}, 21, 21, CellState::Free);
    const Vec2 goal = g.cell_center(10, 10);

    SUBCASE("counts unknown over visited") {
        int made = 0;
        for (int c = 8; c <= 12 && made < 12; ++c)
            for (int r = 8; r <= 12 && made < 12; ++r) {
                if (c == 10 && r == 10) continue;
                g.set(c, r, CellState::Unknown);
                ++made;
            }
        CHECK(unknown_ratio(g, goal, radius) == doctest::Approx(12.0 / 25.0).epsilon(kTol));
    }
    SUBCASE("all free is zero") {
        CHECK(unknown_ratio(g, goal, radius) == 0.0);
    }
    SUBCASE("occupied cells are not visited and block expansion") {
        // Wall column two cells right of the goal: everything beyond is cut off.
        for (int r = 0; r < 21; ++r) g.set(12, r, CellState::Occupied);
        for (int r = 0; r < 21; ++r) for (int c = 13; c < 21; ++c) g.set(c, r, CellState::Unknown);
        // Visited: the 5x5 block minus its rightmost column -> 20 cells, none unknown.
        CHECK(unknown_ratio(g, goal, radius) == 0.0);

        g.set(9, 10, CellState::Unknown);
        CHECK(unknown_ratio(g, goal, radius) == doctest::Approx(1.0 / 20.0).epsilon(kTol));
    }
    SUBCASE("diagonal connectivity crosses corner gaps") {
        OccupancyGrid tiny(0.1, {0.0, 0.0}, 3, 3, CellState::Free);
        tiny.set(1, 0, CellState::Occupied);
        tiny.set(0, 1, CellState::Occupied);
        tiny.set(1, 1, CellState::Unknown);
        // radius 0.15 -> the 3x3 chebyshev-1 neighborhood of (0,0)
        CHECK(unknown_ratio(tiny, tiny.cell_center(0, 0), 0.15) ==
              doctest::Approx(0.5).epsilon(kTol));
    }
    SUBCASE("occupied goal scores zero") {
        g.set(10, 10, CellState::Occupied);
        CHECK(unknown_ratio(g, goal, radius) == 0.0);
    }
    SUBCASE("off-grid goal scores zero") {
        CHECK(unknown_ratio(g, {5.0, 5.0}, radius) == 0.0);
    }
    SUBCASE("zero radius sees only the goal cell") {
        g.set(9, 10, CellState::Unknown);
        CHECK(unknown_ratio(g, goal, 0.0) == 0.0);
        g.set(10, 10, CellState::Unknown);
        CHECK(unknown_ratio(g, goal, 0.0) == 1.0);
    }
}

TEST_CASE("unknown score mapping") {
    CHECK(unknown_score(0.0, 2.0) == doctest::Approx(0.0).scale(1.0));
    CHECK(unknown_score(0.5, 2.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(kTol));
    CHECK(unknown_score(1.0, 2.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(kTol));
    for (double r = 0.0; r < 1.0; r += 0.1)
        CHECK(unknown_score(r + 0.1, 2.0) > unknown_score(r, 2.0));
}

TEST_CASE("combined score") {
    ScoreWeights w;  // 0.3 / 0.7
    CHECK(cvl_score(0.8, 0.5, 0.6, w) == doctest::Approx(0.3 * 0.5 + 0.7 * 0.8 * 0.6).epsilon(kTol));
    CHECK(cvl_score(0.0, 1.0, 1.0, w) == doctest::Approx(0.3).epsilon(kTol));
    CHECK(cvl_score(1.0, 0.0, 1.0, w) == doctest::Approx(0.7).epsilon(kTol));

    SUBCASE("argmax is invariant to positive scaling of the vl term") {
        std::mt19937 rng(21);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        ScoreWeights only_vl;
        only_vl.w_dist = 0.0;
        only_vl.w_vl = 0.7;
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> vals;
            for (int i = 0; i < 5; ++i) vals.push_back(uni(rng));
            int best_a = 0, best_b = 0;
            for (int i = 0; i < 5; ++i) {
                if (cvl_score(vals[i], 0.4, 0.5, only_vl) > cvl_score(vals[best_a], 0.4, 0.5, only_vl))
                    best_a = i;
                if (cvl_score(3.0 * vals[i], 0.4, 0.5, only_vl) >
                    cvl_score(3.0 * vals[best_b], 0.4, 0.5, only_vl))
                    best_b = i;
            }
            CHECK(best_a == best_b);
        }
    }
}

TEST_CASE("frontier target scoring end to end") {
    ScoreWeights w;  // defaults: 0.3, 0.7, k=2, radius 2.5

    SUBCASE("hand-computed chain") {
        // 21x21 free grid; 5 unknown cells in the goal's neighborhood.
        OccupancyGrid g(0.1, {0.0, 0.0}, 21, 21, CellState::Free);
        for (int c = 8; c <= 12; ++c) g.set(c, 8, CellState::Unknown);

        TargetPoint t;
        t.world = g.cell_center(10, 10);
        t.kind = TargetKind::Frontier;
        t.vl_score = 0.6;

        ScoreWeights wn = w;
        wn.unknown_bfs_radius = 0.29;  // 5x5 neighborhood, 25 cells
        const Pose pose{0.55, 0.55, 0.0};
        const auto b = score_frontier_target(t, g, pose, wn);

        const double d = std::sqrt(0.5 * 0.5 + 0.5 * 0.5);
        const double s_dist = 1.0 / (1.0 + d);
        const double ratio = 5.0 / 25.0;
        const double s_unknown = 1.0 - std::exp(-2.0 * ratio);
        CHECK(b.in_grid);
        CHECK(b.s_vl == 0.6);
        CHECK(b.s_dist == doctest::Approx(s_dist).epsilon(kTol));
        CHECK(b.ratio == doctest::Approx(ratio).epsilon(kTol));
        CHECK(b.s_unknown == doctest::Approx(s_unknown).epsilon(kTol));
        CHECK(b.s_cvl == doctest::Approx(0.3 * s_dist + 0.7 * 0.6 * s_unknown).epsilon(kTol));
    }
    SUBCASE("out-of-grid target scores zero with the flag down") {
        OccupancyGrid g(0.1, {0.0, 0.0}, 10, 10);
        TargetPoint t;
        t.world = {5.0, 5.0};
        t.vl_score = 0.9;
        const auto b = score_frontier_target(t, g, Pose{0.5, 0.5, 0.0}, w);
        CHECK_FALSE(b.in_grid);
        CHECK(b.s_cvl == 0.0);
        CHECK(b.s_dist == 0.0);
        CHECK(b.s_unknown == 0.0);
    }
    SUBCASE("more unknown area raises the score, all else equal") {
        OccupancyGrid sparse(0.1, {0.0, 0.0}, 21, 21, CellState::Free);
        OccupancyGrid dense(0.1, {0.0, 0.0}, 21, 21, CellState::Free);
        for (int c = 9; c <= 11; ++c) dense.set(c, 9, CellState::Unknown);
        sparse.set(9, 9, CellState::Unknown);

        TargetPoint t;
        t.world = sparse.cell_center(10, 10);
        t.vl_score = 0.5;
        const Pose pose{0.55, 0.55, 0.0};
        CHECK(score_frontier_target(t, dense, pose, w).s_cvl >
              score_frontier_target(t, sparse, pose, w).s_cvl);
    }
}

TEST_CASE("value map export matches per-cell scores") {
    OccupancyGrid g(0.1, {0.0, 0.0}, 4, 4);
    const Pose pose{0.05, 0.25, 0.0};
    std::vector<DetectionRegion> regions = {{0.0, 0.3, 0.9}};
    const double fov = 2.0943951023931953;

    const auto dir = std::filesystem::temp_directory_path() / "vlnav_score_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "value.pgm").string();
    export_value_map(g, pose, regions, fov, path);

    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    in.get();
    REQUIRE(w == 4);
    REQUIRE(h == 4);
    std::vector<unsigned char> bytes(16);
    in.read(reinterpret_cast<char*>(bytes.data()), 16);
    REQUIRE(in.gcount() == 16);

    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            const double s = vl_score(angular_offset(g.cell_center(c, r), pose), regions, fov);
            const auto expect = static_cast<unsigned char>(
                std::lround(std::clamp(s, 0.0, 1.0) * 255.0));
            // PGM row 0 is the top grid row.
            CHECK(bytes[static_cast<size_t>(3 - r) * 4 + c] == expect);
        }
    }
}
