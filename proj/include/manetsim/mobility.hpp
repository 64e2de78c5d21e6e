#pragma once

#include <vector>

#include "manetsim/base.hpp"
#include "manetsim/sim.hpp"

namespace manetsim {

/// Random waypoint inside a rectangular arena. Nodes start paused at a
/// uniform position, then alternate travel legs (uniform destination,
/// speed drawn from (v_min, v_max]) with fixed pauses. v_max of zero
/// pins every node to its initial position.
///
/// Legs are advanced lazily. Each node draws from its own substream, so
/// the trajectory is a pure function of (master seed, node id) no matter
/// when or how often positions are queried.
class RandomWaypoint {
  public:
    RandomWaypoint(int n_nodes, double width, double height, double v_min, double v_max,
                   double pause, std::uint64_t master_seed);

    Vec2 position(NodeId id, SimTime t);
    double speed(NodeId id, SimTime t);
    int size() const { return static_cast<int>(nodes_.size()); }

  private:
    struct Motion {
        RngStream rng;
        Vec2 from;
        Vec2 to;
        double speed = 0.0;
        SimTime leg_start = 0.0;
        SimTime leg_end = 0.0;
        bool paused = true;
    };

    void advance(Motion& m, SimTime t);

    double width_;
    double height_;
    double v_min_;
    double v_max_;
    double pause_;
    std::vector<Motion> nodes_;
};

}  // namespace manetsim
