#include "manetsim/sim.hpp"

#include <stdexcept>
#include <string>

namespace manetsim {

EventHandle Scheduler::schedule(SimTime fire_time, Action action) {
    if (fire_time < now_) {
        throw std::logic_error("Scheduler::schedule: fire_time " + std::to_string(fire_time) +
                               " is in the past (now " + std::to_string(now_) + ")");
    }
    EventHandle h{fire_time, next_seq_++};
    queue_.emplace(Key{h.time, h.seq}, std::move(action));
    return h;
}

bool Scheduler::cancel(const EventHandle& h) {
    if (!h.valid()) return false;
    return queue_.erase(Key{h.time, h.seq}) > 0;
}

std::uint64_t Scheduler::run_until(SimTime t_end) {
    if (t_end < now_) throw std::logic_error("Scheduler::run_until: t_end is in the past");
    std::uint64_t fired = 0;
    while (!queue_.empty()) {
        auto it = queue_.begin();
        if (it->first.first > t_end) break;
        Action action = std::move(it->second);
        now_ = it->first.first;
        queue_.erase(it);
        action();
        ++fired;
    }
    now_ = t_end;
    return fired;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::string_view stream_id) {
    std::uint64_t x = master_seed ^ fnv1a64(stream_id);
    std::uint64_t seed = splitmix64(x);
    eng_.seed(seed);
}

std::uint64_t RngStream::uniform_int(std::uint64_t n) {
    // Rejection sampling keeps the draw unbiased for any n.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        std::uint64_t x = next_u64();
        if (x >= threshold) return x % n;
    }
}

}  // namespace manetsim
