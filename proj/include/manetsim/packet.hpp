#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "manetsim/base.hpp"
#include "manetsim/sim.hpp"

namespace manetsim {

/// Transport payload carried end to end inside a DataPkt.
struct TransportSegment {
    int conn_id = 0;
    bool is_ack = false;
    std::int64_t seq = 0;       // data: segment number; ack: next expected
    SimTime first_send = 0.0;   // original departure time, kept across retransmits
    int bytes = 0;
};

/// Route discovery flood. path accumulates the nodes traversed, origin first.
struct Rreq {
    NodeId origin = 0;
    NodeId target = 0;
    std::uint32_t request_id = 0;
    std::vector<NodeId> path;
};

/// Reply carrying the discovered source route back along the reversed path.
/// route[0] is the replier, route.back() the discovery originator.
struct Rrep {
    std::vector<NodeId> discovered;  // full route origin..target
    std::vector<NodeId> route;
    std::size_t next_index = 0;
};

/// Link failure report sent back toward the data source.
struct Rerr {
    NodeId link_from = 0;
    NodeId link_to = 0;
    std::vector<NodeId> route;  // detector..source
    std::size_t next_index = 0;
};

/// Source-routed data. route[0] is the source, route.back() the destination.
struct DataPkt {
    std::vector<NodeId> route;
    std::size_t next_index = 0;
    TransportSegment seg;
};

using Packet = std::variant<Rreq, Rrep, Rerr, DataPkt>;

/// Wire size including the source-route header overhead.
inline int packet_bytes(const Packet& p) {
    struct V {
        int operator()(const Rreq& r) const { return 16 + 4 * static_cast<int>(r.path.size()); }
        int operator()(const Rrep& r) const {
            return 16 + 4 * static_cast<int>(r.discovered.size());
        }
        int operator()(const Rerr&) const { return 20; }
        int operator()(const DataPkt& d) const {
            return d.seg.bytes + 12 + 4 * static_cast<int>(d.route.size());
        }
    };
    return std::visit(V{}, p);
}

inline const char* packet_kind_name(const Packet& p) {
    struct V {
        const char* operator()(const Rreq&) const { return "RREQ"; }
        const char* operator()(const Rrep&) const { return "RREP"; }
        const char* operator()(const Rerr&) const { return "RERR"; }
        const char* operator()(const DataPkt&) const { return "DATA"; }
    };
    return std::visit(V{}, p);
}

}  // namespace manetsim
