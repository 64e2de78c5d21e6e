#include "manetsim/phys.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace manetsim {

double received_power(const RadioParams& r, double d) {
    if (d <= 0.0) return r.pt;
    double num = r.pt * r.gt * r.gr * r.ht * r.ht * r.hr * r.hr;
    double pr = num / (d * d * d * d * r.sys_loss);
    return pr < r.pt ? pr : r.pt;
}

double range_from_threshold(const RadioParams& r, double thresh) {
    double num = r.pt * r.gt * r.gr * r.ht * r.ht * r.hr * r.hr;
    return std::pow(num / (thresh * r.sys_loss), 0.25);
}

RadioParams make_radio_params(const ScenarioConfig& c) {
    RadioParams r;
    r.pt = c.pt;
    r.gt = c.gt;
    r.gr = c.gr;
    r.ht = c.ht;
    r.hr = c.hr;
    r.sys_loss = c.sys_loss;
    r.rx_thresh = c.rx_thresh > 0 ? c.rx_thresh : received_power(r, c.tx_range);
    r.cs_thresh = c.cs_thresh > 0 ? c.cs_thresh : received_power(r, c.interference_range);
    return r;
}

Reception classify_reception(const RadioParams& r, double power) {
    if (power >= r.rx_thresh) return Reception::Decodable;
    if (power >= r.cs_thresh) return Reception::SenseOnly;
    return Reception::None;
}

const char* frame_kind_name(FrameKind k) {
    switch (k) {
        case FrameKind::Rts: return "RTS";
        case FrameKind::Cts: return "CTS";
        case FrameKind::Data: return "DATA";
        case FrameKind::Ack: return "ACK";
    }
    return "?";
}

Channel::Channel(Scheduler& sched, RadioParams radio, std::function<Vec2(NodeId)> position_of)
    : sched_(sched), radio_(radio), position_of_(std::move(position_of)) {}

void Channel::attach(NodeId id, PhyClient* client) {
    nodes_[id].client = client;
}

void Channel::transmit(NodeId src, AirFrame frame) {
    NodeState& s = nodes_.at(src);
    if (s.transmitting) throw std::logic_error("channel: node already transmitting");
    frame.frame_id = next_frame_id_++;
    frame.src = src;
    frame.src_pos = position_of_(src);

    s.transmitting = true;
    // Half duplex: whatever the sender was receiving is lost.
    for (Rx& r : s.rx) r.corrupted = true;

    for (auto& [id, ns] : nodes_) {
        if (id == src) continue;
        double d = distance(frame.src_pos, position_of_(id));
        double p = received_power(radio_, d);
        if (p < radio_.cs_thresh) continue;
        bool was_busy = ns.audible > 0;
        // No capture: new energy corrupts everything already arriving here.
        for (Rx& r : ns.rx) r.corrupted = true;
        bool corrupt = was_busy || ns.transmitting || p < radio_.rx_thresh;
        ns.rx.push_back(Rx{frame.frame_id, p, corrupt});
        ns.audible += 1;
        if (!was_busy) ns.client->phy_busy_start();
    }

    std::uint64_t fid = frame.frame_id;
    in_flight_.emplace(fid, std::move(frame));
    sched_.schedule(in_flight_.at(fid).end, [this, fid] { finish(fid); });
}

void Channel::finish(std::uint64_t frame_id) {
    auto it = in_flight_.find(frame_id);
    if (it == in_flight_.end()) throw std::logic_error("channel: unknown frame finished");
    AirFrame frame = std::move(it->second);
    in_flight_.erase(it);

    // Deliveries first, then busy edges, then the sender's own tx end.
    // Node order is ascending throughout so runs replay identically.
    for (auto& [id, ns] : nodes_) {
        for (const Rx& r : ns.rx) {
            if (r.frame_id == frame_id && !r.corrupted) ns.client->phy_receive(frame, r.power);
        }
    }
    for (auto& [id, ns] : nodes_) {
        auto held = std::find_if(ns.rx.begin(), ns.rx.end(),
                                 [&](const Rx& r) { return r.frame_id == frame_id; });
        if (held == ns.rx.end()) continue;
        ns.rx.erase(held);
        ns.audible -= 1;
        if (ns.audible == 0) ns.client->phy_busy_end();
    }
    NodeState& s = nodes_.at(frame.src);
    s.transmitting = false;
    s.client->phy_tx_end(frame);
}

bool Channel::carrier_busy(NodeId id) const {
    return nodes_.at(id).audible > 0;
}

bool Channel::is_transmitting(NodeId id) const {
    return nodes_.at(id).transmitting;
}

}  // namespace manetsim
