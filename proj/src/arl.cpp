#include "manetsim/arl.hpp"

#include <algorithm>

namespace manetsim {

double arl_time_threshold(double own_speed, double tx_range, const ArlParams& p) {
    if (own_speed <= 0.0) return p.time_cap;
    return std::min(p.time_cap, p.time_factor * tx_range / std::max(own_speed, p.speed_floor));
}

RetryLimits arl_select_limits(const NeighborTable& table, NodeId dest, SimTime now,
                              double own_speed, double tx_range, const ArlParams& p) {
    auto e = table.lookup(dest);
    if (!e) return p.fallback;
    bool fresh = (now - e->stamp) <= arl_time_threshold(own_speed, tx_range, p);
    bool strong = e->rss >= p.signal_threshold;
    if (fresh && strong) return p.maximum;
    if (fresh || strong) return p.medium;
    return p.minimum;
}

AdaptiveRetryPolicy::AdaptiveRetryPolicy(NodeId self, const NeighborTable* table,
                                         std::function<double()> own_speed, double tx_range,
                                         ArlParams params, Tracer tracer)
    : self_(self),
      table_(table),
      own_speed_(std::move(own_speed)),
      tx_range_(tx_range),
      prm_(params),
      tracer_(tracer) {}

RetryLimits AdaptiveRetryPolicy::retry_limits(NodeId dest, SimTime now) {
    RetryLimits lim = arl_select_limits(*table_, dest, now, own_speed_(), tx_range_, prm_);
    tracer_.rec(self_, "MAC", "limits", tfmt("dest=%d srl=%d lrl=%d", dest, lim.srl, lim.lrl));
    return lim;
}

}  // namespace manetsim
