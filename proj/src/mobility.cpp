#include "manetsim/mobility.hpp"

#include <limits>
#include <string>

namespace manetsim {

RandomWaypoint::RandomWaypoint(int n_nodes, double width, double height, double v_min,
                               double v_max, double pause, std::uint64_t master_seed)
    : width_(width), height_(height), v_min_(v_min), v_max_(v_max), pause_(pause) {
    nodes_.reserve(static_cast<std::size_t>(n_nodes));
    for (int i = 0; i < n_nodes; ++i) {
        Motion m{RngStream(master_seed, "mobility/" + std::to_string(i)), {}, {}, 0.0, 0.0,
                 0.0, true};
        m.from.x = m.rng.uniform01() * width_;
        m.from.y = m.rng.uniform01() * height_;
        m.to = m.from;
        m.leg_end = v_max_ > 0.0 ? pause_ : std::numeric_limits<double>::infinity();
        nodes_.push_back(std::move(m));
    }
}

void RandomWaypoint::advance(Motion& m, SimTime t) {
    while (t >= m.leg_end) {
        if (m.paused) {
            Vec2 dest{m.rng.uniform01() * width_, m.rng.uniform01() * height_};
            // (v_min, v_max]: never zero, so leg durations stay finite
            double v = v_max_ - m.rng.uniform01() * (v_max_ - v_min_);
            m.from = m.to;
            m.to = dest;
            m.speed = v;
            m.leg_start = m.leg_end;
            m.leg_end = m.leg_start + distance(m.from, m.to) / v;
            m.paused = false;
        } else {
            m.from = m.to;
            m.speed = 0.0;
            m.leg_start = m.leg_end;
            m.leg_end = m.leg_start + pause_;
            m.paused = true;
        }
    }
}

Vec2 RandomWaypoint::position(NodeId id, SimTime t) {
    Motion& m = nodes_.at(static_cast<std::size_t>(id));
    advance(m, t);
    if (m.paused) return m.to;
    double f = (t - m.leg_start) / (m.leg_end - m.leg_start);
    return Vec2{m.from.x + (m.to.x - m.from.x) * f, m.from.y + (m.to.y - m.from.y) * f};
}

double RandomWaypoint::speed(NodeId id, SimTime t) {
    Motion& m = nodes_.at(static_cast<std::size_t>(id));
    advance(m, t);
    return m.paused ? 0.0 : m.speed;
}

}  // namespace manetsim
