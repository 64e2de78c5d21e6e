#pragma once

#include <cmath>
#include <cstdint>

namespace manetsim {

using NodeId = int;
inline constexpr NodeId kBroadcast = -1;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace manetsim
