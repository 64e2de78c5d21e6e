#pragma once

#include <functional>
#include <map>
#include <optional>

#include "manetsim/base.hpp"
#include "manetsim/mac.hpp"
#include "manetsim/sim.hpp"
#include "manetsim/trace.hpp"

namespace manetsim {

struct NeighborEntry {
    double rss = 0.0;
    SimTime stamp = 0.0;
};

/// Last overheard signal per neighbor, fed promiscuously from every
/// decoded frame regardless of its destination.
class NeighborTable {
  public:
    void observe(NodeId src, double rss, SimTime now) {
        entries_[src] = NeighborEntry{rss, now};
    }
    std::optional<NeighborEntry> lookup(NodeId id) const {
        auto it = entries_.find(id);
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t size() const { return entries_.size(); }

  private:
    std::map<NodeId, NeighborEntry> entries_;
};

struct ArlParams {
    double signal_threshold = 0.0;  // watts; typically 16x the receive threshold
    double time_factor = 1.0;       // scales the range/speed residence estimate
    double time_cap = 1e6;
    double speed_floor = 0.1;
    RetryLimits maximum{16, 8};
    RetryLimits medium{12, 6};
    RetryLimits minimum{4, 2};
    RetryLimits fallback{7, 4};
};

/// Rough residence time of a neighbor inside transmission range.
/// A stationary observer gets the cap directly.
double arl_time_threshold(double own_speed, double tx_range, const ArlParams& p);

/// Neighbor freshness and signal strength pick the limit tier. Boundary
/// values count as favorable: age == threshold is fresh, rss == threshold
/// is strong. An unknown destination gets the fallback limits.
RetryLimits arl_select_limits(const NeighborTable& table, NodeId dest, SimTime now,
                              double own_speed, double tx_range, const ArlParams& p);

class AdaptiveRetryPolicy : public RetryPolicy {
  public:
    AdaptiveRetryPolicy(NodeId self, const NeighborTable* table,
                        std::function<double()> own_speed, double tx_range, ArlParams params,
                        Tracer tracer);

    RetryLimits retry_limits(NodeId dest, SimTime now) override;

  private:
    NodeId self_;
    const NeighborTable* table_;
    std::function<double()> own_speed_;
    double tx_range_;
    ArlParams prm_;
    Tracer tracer_;
};

}  // namespace manetsim
