#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <optional>

#include "manetsim/config.hpp"
#include "manetsim/metrics.hpp"
#include "manetsim/packet.hpp"
#include "manetsim/phys.hpp"
#include "manetsim/sim.hpp"
#include "manetsim/trace.hpp"

namespace manetsim {

struct MacParams {
    double slot = 20e-6;
    double sifs = 10e-6;
    double difs = 50e-6;
    double preamble = 192e-6;
    double bitrate = 2e6;
    double cts_timeout = 0.0;  // resolved, measured from the end of our RTS
    double ack_timeout = 0.0;  // resolved, measured from the end of our DATA
    int cw_min = 32;
    int cw_max = 1024;
    int ifq_limit = 50;
    int rts_bytes = 44;
    int cts_bytes = 38;
    int ack_bytes = 38;
    int mac_header_bytes = 34;
};

inline double frame_duration(const MacParams& p, int bytes) {
    return p.preamble + bytes * 8.0 / p.bitrate;
}

/// Timeouts of 0 in the config resolve to sifs + response duration + 2 slots.
MacParams make_mac_params(const ScenarioConfig& c);

struct RetryLimits {
    int srl = 7;  // RTS attempts
    int lrl = 4;  // DATA attempts
};

/// Consulted at every timeout, so limits may change mid packet.
class RetryPolicy {
  public:
    virtual ~RetryPolicy() = default;
    virtual RetryLimits retry_limits(NodeId dest, SimTime now) = 0;
};

class StaticRetryPolicy : public RetryPolicy {
  public:
    explicit StaticRetryPolicy(RetryLimits fixed) : fixed_(fixed) {}
    RetryLimits retry_limits(NodeId, SimTime) override { return fixed_; }

  private:
    RetryLimits fixed_;
};

/// Test hook: a node that stays silent in part of the handshake.
struct FaultProfile {
    bool reply_cts = true;
    bool reply_ack = true;
};

/// DCF style access with RTS/CTS/DATA/ACK for unicast and plain
/// transmission for broadcast. One outstanding frame at a time; the
/// interface queue is drop tail.
class Mac : public PhyClient {
  public:
    Mac(NodeId self, Scheduler& sched, Channel& ch, MacParams prm, RetryPolicy* policy,
        Ledger* ledger, Tracer tracer, RngStream rng);

    using DeliverFn = std::function<void(const Packet&, NodeId from)>;
    using LinkFailureFn = std::function<void(NodeId next_hop, std::shared_ptr<const Packet>)>;
    using OverhearFn = std::function<void(NodeId src, double rss, SimTime now)>;

    void set_deliver(DeliverFn f) { on_deliver_ = std::move(f); }
    void set_link_failure(LinkFailureFn f) { on_link_failure_ = std::move(f); }
    void set_overhear(OverhearFn f) { on_overhear_ = std::move(f); }
    void set_fault_profile(FaultProfile f) { fault_ = f; }

    /// next_hop of kBroadcast sends without a handshake.
    void enqueue(NodeId next_hop, std::shared_ptr<const Packet> pkt);

    /// Removes every queued frame addressed to next_hop; the caller owns
    /// the failure handling for them. The in-service frame is untouched.
    std::vector<std::shared_ptr<const Packet>> extract_queued(NodeId next_hop);

    std::size_t queue_length() const { return q_.size(); }
    bool busy() const { return cur_.has_value(); }

    // PhyClient
    void phy_busy_start() override;
    void phy_busy_end() override;
    void phy_receive(const AirFrame& f, double power) override;
    void phy_tx_end(const AirFrame& f) override;

  private:
    enum class Phase { Idle, Contending, AwaitCts, AwaitAck, TxBroadcast };

    struct Item {
        NodeId next_hop;
        std::shared_ptr<const Packet> pkt;
    };

    struct Pending {
        FrameKind kind;
        NodeId dst;
        SimTime nav_until = 0.0;  // CTS: propagated reservation from the RTS
    };

    void maybe_start();
    void begin_access();
    void freeze();
    void resume_if_idle();
    void on_access_won();
    void start_unicast_rts();
    void start_broadcast_data();
    void schedule_response(FrameKind kind, NodeId dst, SimTime nav_until);
    void transmit_pending();
    void on_cts_timeout();
    void on_ack_timeout();
    void complete_success();
    void fail_current(const char* what);
    bool medium_busy() const;
    int data_bytes(const Packet& p) const;

    NodeId self_;
    Scheduler& sched_;
    Channel& ch_;
    MacParams prm_;
    RetryPolicy* policy_;
    Ledger* ledger_;
    Tracer tracer_;
    RngStream rng_;
    FaultProfile fault_;

    DeliverFn on_deliver_;
    LinkFailureFn on_link_failure_;
    OverhearFn on_overhear_;

    std::deque<Item> q_;
    std::optional<Item> cur_;
    Phase phase_ = Phase::Idle;
    int ssrc_ = 0;
    int slrc_ = 0;
    int cw_;
    int slots_left_ = 0;
    SimTime access_start_ = -1.0;  // negative while frozen
    SimTime nav_until_ = 0.0;

    EventHandle ctimer_;      // contention completion
    EventHandle await_timer_;  // CTS or ACK timeout, per phase
    EventHandle resp_timer_;  // SIFS-spaced response or continuation
    EventHandle nav_timer_;
    std::optional<Pending> pending_;
};

}  // namespace manetsim
