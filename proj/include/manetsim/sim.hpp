#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string_view>
#include <utility>

namespace manetsim {

/// Simulation clock, in seconds.
using SimTime = double;

/// Identifies a scheduled event. Default-constructed handles are invalid.
struct EventHandle {
    SimTime time = 0.0;
    std::uint64_t seq = 0;
    bool valid() const { return seq != 0; }
};

/// Deterministic discrete-event scheduler. Events fire in (fire_time, sequence)
/// order; sequence numbers are assigned at scheduling time, so events scheduled
/// for the same instant fire in scheduling order.
class Scheduler {
public:
    using Action = std::function<void()>;

    SimTime now() const { return now_; }

    /// Scheduling in the past is a programming error and throws.
    EventHandle schedule(SimTime fire_time, Action action);
    EventHandle schedule_in(SimTime delay, Action action) {
        return schedule(now_ + delay, std::move(action));
    }

    /// True if the event was pending and is now dead; false if it already
    /// fired or was already cancelled.
    bool cancel(const EventHandle& h);

    /// Processes every event with fire_time <= t_end in (time, sequence)
    /// order, then sets the clock to t_end. Returns events processed.
    std::uint64_t run_until(SimTime t_end);

    std::size_t pending() const { return queue_.size(); }

private:
    using Key = std::pair<SimTime, std::uint64_t>;
    std::map<Key, Action> queue_;
    SimTime now_ = 0.0;
    std::uint64_t next_seq_ = 1;
};

/// Seeded random stream. A stream is derived from (master seed, label); the
/// same pair always yields the same draw sequence, and distinct labels are
/// decorrelated, so adding a node never perturbs another node's draws.
/// mt19937_64 is fully specified by the standard and the conversions below
/// are done by hand, so sequences are identical across platforms.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::string_view stream_id);

    std::uint64_t next_u64() { return eng_(); }

    /// [0, 1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// [lo, hi)
    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    /// Unbiased integer in [0, n); n >= 1.
    std::uint64_t uniform_int(std::uint64_t n);

private:
    std::mt19937_64 eng_;
};

}  // namespace manetsim
