#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "manetsim/mobility.hpp"

using namespace manetsim;

namespace {

double dist(Vec2 a, Vec2 b) {
    double dx = a.x - b.x;
    double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

TEST_CASE("zero max speed pins every node to its initial position") {
    RandomWaypoint m(6, 1000.0, 1000.0, 0.0, 0.0, 5.0, 42);
    std::vector<Vec2> start;
    for (NodeId i = 0; i < 6; ++i) start.push_back(m.position(i, 0.0));
    for (double t : {7.3, 42.0, 150.0}) {
        for (NodeId i = 0; i < 6; ++i) {
            Vec2 p = m.position(i, t);
            CHECK(p.x == start[static_cast<std::size_t>(i)].x);
            CHECK(p.y == start[static_cast<std::size_t>(i)].y);
            CHECK(m.speed(i, t) == 0.0);
        }
    }
}

TEST_CASE("nodes hold their initial pause before the first leg") {
    RandomWaypoint m(8, 1000.0, 1000.0, 1.0, 5.0, 5.0, 7);
    std::vector<Vec2> start;
    for (NodeId i = 0; i < 8; ++i) start.push_back(m.position(i, 0.0));
    for (double t : {2.5, 4.9}) {
        for (NodeId i = 0; i < 8; ++i) {
            Vec2 p = m.position(i, t);
            CHECK(p.x == start[static_cast<std::size_t>(i)].x);
            CHECK(p.y == start[static_cast<std::size_t>(i)].y);
            CHECK(m.speed(i, t) == 0.0);
        }
    }
    int moved = 0;
    for (NodeId i = 0; i < 8; ++i)
        if (dist(m.position(i, 8.0), start[static_cast<std::size_t>(i)]) > 1e-9) ++moved;
    CHECK(moved > 0);
}

TEST_CASE("positions stay inside the arena") {
    RandomWaypoint m(10, 800.0, 600.0, 0.5, 20.0, 0.5, 99);
    for (double t = 0.0; t < 400.0; t += 2.7) {
        for (NodeId i = 0; i < 10; ++i) {
            Vec2 p = m.position(i, t);
            CHECK(p.x >= -1e-9);
            CHECK(p.x <= 800.0 + 1e-9);
            CHECK(p.y >= -1e-9);
            CHECK(p.y <= 600.0 + 1e-9);
        }
    }
}

TEST_CASE("displacement between samples never exceeds v_max times the gap") {
    const double v_max = 12.0;
    RandomWaypoint m(6, 1000.0, 1000.0, 0.3, v_max, 1.0, 5);
    const double step = 0.37;
    std::vector<Vec2> prev;
    for (NodeId i = 0; i < 6; ++i) prev.push_back(m.position(i, 0.0));
    for (double t = step; t < 300.0; t += step) {
        for (NodeId i = 0; i < 6; ++i) {
            Vec2 p = m.position(i, t);
            CHECK(dist(p, prev[static_cast<std::size_t>(i)]) <= v_max * step + 1e-9);
            prev[static_cast<std::size_t>(i)] = p;
        }
    }
}

TEST_CASE("trajectories depend only on the seed and node id") {
    RandomWaypoint a(4, 1000.0, 1000.0, 0.5, 10.0, 2.0, 31);
    RandomWaypoint b(9, 1000.0, 1000.0, 0.5, 10.0, 2.0, 31);
    RandomWaypoint c(4, 1000.0, 1000.0, 0.5, 10.0, 2.0, 31);
    RandomWaypoint d(4, 1000.0, 1000.0, 0.5, 10.0, 2.0, 32);
    bool seed_differs = false;
    for (double t = 0.0; t < 120.0; t += 1.7) {
        for (NodeId i = 0; i < 4; ++i) {
            Vec2 pa = a.position(i, t);
            Vec2 pb = b.position(i, t);
            Vec2 pc = c.position(i, t);
            CHECK(pa.x == pb.x);
            CHECK(pa.y == pb.y);
            CHECK(pa.x == pc.x);
            CHECK(pa.y == pc.y);
            Vec2 pd = d.position(i, t);
            if (pa.x != pd.x || pa.y != pd.y) seed_differs = true;
        }
    }
    CHECK(seed_differs);
}

TEST_CASE("speeds are zero while paused and within the band while moving") {
    const double v_min = 1.5;
    const double v_max = 9.0;
    RandomWaypoint m(8, 1000.0, 1000.0, v_min, v_max, 3.0, 17);
    int zeros = 0;
    int moving = 0;
    for (double t = 0.0; t < 500.0; t += 0.9) {
        for (NodeId i = 0; i < 8; ++i) {
            double s = m.speed(i, t);
            if (s == 0.0) {
                ++zeros;
            } else {
                ++moving;
                CHECK(s >= v_min - 1e-12);
                CHECK(s <= v_max + 1e-12);
            }
        }
    }
    CHECK(zeros > 0);
    CHECK(moving > 0);
}

TEST_CASE("initial positions fill the arena uniformly") {
    const int n = 4000;
    RandomWaypoint m(n, 1000.0, 1000.0, 0.0, 0.0, 5.0, 1234);
    double sx = 0.0;
    double sy = 0.0;
    double min_x = 1e9;
    double max_x = -1e9;
    for (NodeId i = 0; i < n; ++i) {
        Vec2 p = m.position(i, 0.0);
        sx += p.x;
        sy += p.y;
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
    }
    // Mean of n uniform draws on [0, 1000]: sd = 1000/sqrt(12n).
    double three_sigma = 3.0 * 1000.0 / std::sqrt(12.0 * n);
    CHECK(std::fabs(sx / n - 500.0) < three_sigma);
    CHECK(std::fabs(sy / n - 500.0) < three_sigma);
    CHECK(min_x < 100.0);
    CHECK(max_x > 900.0);
}

TEST_CASE("a long walk stays centered in the arena") {
    RandomWaypoint m(1, 1000.0, 1000.0, 5.0, 10.0, 0.0, 88);
    double sx = 0.0;
    double sy = 0.0;
    const int samples = 20000;
    for (int k = 0; k < samples; ++k) {
        Vec2 p = m.position(0, static_cast<double>(k));
        sx += p.x;
        sy += p.y;
    }
    CHECK(std::fabs(sx / samples - 500.0) < 80.0);
    CHECK(std::fabs(sy / samples - 500.0) < 80.0);
}
