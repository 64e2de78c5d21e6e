#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "manetsim/mac.hpp"
#include "manetsim/metrics.hpp"
#include "manetsim/packet.hpp"
#include "manetsim/sim.hpp"
#include "manetsim/trace.hpp"

namespace manetsim {

struct RoutingParams {
    double rreq_timeout = 0.5;  // doubles per attempt
    int rreq_max_attempts = 3;
    double rreq_jitter = 0.01;  // rebroadcast delay upper bound
    int send_buffer = 64;
};

/// Source routing with on-demand discovery. Data carries its full route;
/// intermediate nodes keep no per-flow state beyond the duplicate filter.
class DsrAgent {
  public:
    DsrAgent(NodeId self, Scheduler& sched, Mac& mac, RoutingParams prm, Ledger* ledger,
             Tracer tracer, RngStream rng);

    using DeliverFn = std::function<void(const TransportSegment&, NodeId src)>;
    void set_deliver(DeliverFn f) { on_deliver_ = std::move(f); }

    /// Transport entry point. Buffers and triggers discovery when no
    /// route is cached.
    void send(NodeId dest, const TransportSegment& seg);

    // MAC callbacks, wired by the node.
    void on_mac_deliver(const Packet& p, NodeId from);
    void on_link_failure(NodeId next_hop, std::shared_ptr<const Packet> pkt);

    bool has_route(NodeId dest) const { return cache_.count(dest) > 0; }
    std::vector<NodeId> cached_route(NodeId dest) const;

  private:
    struct Discovery {
        int attempt = 0;
        EventHandle timer;
    };
    struct Buffered {
        NodeId dest;
        TransportSegment seg;
    };

    void start_discovery(NodeId dest);
    void send_rreq(NodeId dest);
    void on_rreq_timeout(NodeId dest);
    void install_route(NodeId dest, std::vector<NodeId> route);
    void purge_link(NodeId a, NodeId b);
    void send_data_along(const std::vector<NodeId>& route, const TransportSegment& seg);
    void forward_control(const Packet& p);
    void send_control(NodeId next_hop, Packet p);
    void handle_rreq(const Rreq& r);
    void handle_rrep(const Rrep& r);
    void handle_rerr(const Rerr& r);

    NodeId self_;
    Scheduler& sched_;
    Mac& mac_;
    RoutingParams prm_;
    Ledger* ledger_;
    Tracer tracer_;
    RngStream rng_;
    DeliverFn on_deliver_;

    std::map<NodeId, std::vector<NodeId>> cache_;  // dest -> full route, self first
    std::map<NodeId, Discovery> discovery_;
    std::deque<Buffered> buffer_;
    std::set<std::pair<NodeId, std::uint32_t>> seen_rreq_;
    std::uint32_t next_request_id_ = 1;
};

}  // namespace manetsim
