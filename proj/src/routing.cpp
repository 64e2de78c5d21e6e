#include "manetsim/routing.hpp"

#include <algorithm>

namespace manetsim {

DsrAgent::DsrAgent(NodeId self, Scheduler& sched, Mac& mac, RoutingParams prm, Ledger* ledger,
                   Tracer tracer, RngStream rng)
    : self_(self),
      sched_(sched),
      mac_(mac),
      prm_(prm),
      ledger_(ledger),
      tracer_(tracer),
      rng_(std::move(rng)) {}

std::vector<NodeId> DsrAgent::cached_route(NodeId dest) const {
    auto it = cache_.find(dest);
    return it == cache_.end() ? std::vector<NodeId>{} : it->second;
}

void DsrAgent::send(NodeId dest, const TransportSegment& seg) {
    auto it = cache_.find(dest);
    if (it != cache_.end()) {
        send_data_along(it->second, seg);
        return;
    }
    if (static_cast<int>(buffer_.size()) >= prm_.send_buffer) {
        buffer_.pop_front();
        ledger_->no_route_drops += 1;
        tracer_.rec(self_, "RTG", "bufdrop", "reason=full");
    }
    buffer_.push_back(Buffered{dest, seg});
    if (!discovery_.count(dest)) start_discovery(dest);
}

void DsrAgent::send_data_along(const std::vector<NodeId>& route, const TransportSegment& seg) {
    DataPkt d;
    d.route = route;
    d.next_index = 1;
    d.seg = seg;
    NodeId next = route[1];
    tracer_.rec(self_, "RTG", "data",
                tfmt("conn=%d seq=%lld next=%d hops=%d", seg.conn_id,
                     static_cast<long long>(seg.seq), next, static_cast<int>(route.size()) - 1));
    mac_.enqueue(next, std::make_shared<const Packet>(std::move(d)));
}

void DsrAgent::send_control(NodeId next_hop, Packet p) {
    ledger_->routing_control_tx += 1;
    tracer_.rec(self_, "RTG", "send", tfmt("kind=%s next=%d", packet_kind_name(p), next_hop));
    mac_.enqueue(next_hop, std::make_shared<const Packet>(std::move(p)));
}

void DsrAgent::start_discovery(NodeId dest) {
    discovery_[dest] = Discovery{};
    send_rreq(dest);
}

void DsrAgent::send_rreq(NodeId dest) {
    Discovery& d = discovery_.at(dest);
    Rreq r;
    r.origin = self_;
    r.target = dest;
    r.request_id = next_request_id_++;
    r.path = {self_};
    seen_rreq_.insert({r.origin, r.request_id});
    send_control(kBroadcast, Packet(std::move(r)));
    double timeout = prm_.rreq_timeout * static_cast<double>(1u << d.attempt);
    d.timer = sched_.schedule_in(timeout, [this, dest] { on_rreq_timeout(dest); });
}

void DsrAgent::on_rreq_timeout(NodeId dest) {
    auto it = discovery_.find(dest);
    if (it == discovery_.end()) return;
    it->second.attempt += 1;
    if (it->second.attempt >= prm_.rreq_max_attempts) {
        discovery_.erase(it);
        std::int64_t dropped = 0;
        for (auto b = buffer_.begin(); b != buffer_.end();) {
            if (b->dest == dest) {
                b = buffer_.erase(b);
                ++dropped;
            } else {
                ++b;
            }
        }
        ledger_->no_route_drops += dropped;
        tracer_.rec(self_, "RTG", "noroute",
                    tfmt("dest=%d dropped=%lld", dest, static_cast<long long>(dropped)));
        return;
    }
    send_rreq(dest);
}

void DsrAgent::install_route(NodeId dest, std::vector<NodeId> route) {
    auto it = cache_.find(dest);
    // Shortest route wins; equal length prefers the newer one.
    if (it != cache_.end() && it->second.size() < route.size()) return;
    cache_[dest] = std::move(route);
    auto d = discovery_.find(dest);
    if (d != discovery_.end()) {
        sched_.cancel(d->second.timer);
        discovery_.erase(d);
    }
    tracer_.rec(self_, "RTG", "route",
                tfmt("dest=%d hops=%d", dest, static_cast<int>(cache_[dest].size()) - 1));
    const std::vector<NodeId>& r = cache_[dest];
    for (auto b = buffer_.begin(); b != buffer_.end();) {
        if (b->dest == dest) {
            send_data_along(r, b->seg);
            b = buffer_.erase(b);
        } else {
            ++b;
        }
    }
}

void DsrAgent::purge_link(NodeId a, NodeId b) {
    for (auto it = cache_.begin(); it != cache_.end();) {
        const std::vector<NodeId>& r = it->second;
        bool broken = false;
        for (std::size_t i = 0; i + 1 < r.size(); ++i) {
            if ((r[i] == a && r[i + 1] == b) || (r[i] == b && r[i + 1] == a)) {
                broken = true;
                break;
            }
        }
        if (broken)
            it = cache_.erase(it);
        else
            ++it;
    }
}

void DsrAgent::on_mac_deliver(const Packet& p, NodeId) {
    if (const Rreq* r = std::get_if<Rreq>(&p)) {
        handle_rreq(*r);
    } else if (const Rrep* r = std::get_if<Rrep>(&p)) {
        handle_rrep(*r);
    } else if (const Rerr* r = std::get_if<Rerr>(&p)) {
        handle_rerr(*r);
    } else if (const DataPkt* d = std::get_if<DataPkt>(&p)) {
        if (d->next_index >= d->route.size() || d->route[d->next_index] != self_) return;
        if (d->next_index + 1 == d->route.size()) {
            if (on_deliver_) on_deliver_(d->seg, d->route.front());
            return;
        }
        DataPkt fwd = *d;
        fwd.next_index += 1;
        NodeId next = fwd.route[fwd.next_index];
        tracer_.rec(self_, "RTG", "fwd",
                    tfmt("conn=%d seq=%lld next=%d", fwd.seg.conn_id,
                         static_cast<long long>(fwd.seg.seq), next));
        mac_.enqueue(next, std::make_shared<const Packet>(std::move(fwd)));
    }
}

void DsrAgent::handle_rreq(const Rreq& r) {
    if (!seen_rreq_.insert({r.origin, r.request_id}).second) return;
    if (std::find(r.path.begin(), r.path.end(), self_) != r.path.end()) return;
    if (r.target == self_) {
        std::vector<NodeId> full = r.path;
        full.push_back(self_);
        Rrep rep;
        rep.discovered = full;
        rep.route.assign(full.rbegin(), full.rend());
        rep.next_index = 1;
        // The reversed route also serves our own traffic back to the origin.
        install_route(r.origin, rep.route);
        NodeId next = rep.route[1];
        send_control(next, Packet(std::move(rep)));
        return;
    }
    Rreq fwd = r;
    fwd.path.push_back(self_);
    double delay = rng_.uniform(0.0, prm_.rreq_jitter);
    sched_.schedule_in(delay, [this, fwd] { send_control(kBroadcast, Packet(fwd)); });
}

void DsrAgent::handle_rrep(const Rrep& r) {
    if (r.next_index >= r.route.size() || r.route[r.next_index] != self_) return;
    if (r.next_index + 1 == r.route.size()) {
        // Route runs origin..target; the reply route is its reverse.
        install_route(r.discovered.back(),
                      std::vector<NodeId>(r.discovered.begin(), r.discovered.end()));
        return;
    }
    Rrep fwd = r;
    fwd.next_index += 1;
    NodeId next = fwd.route[fwd.next_index];
    send_control(next, Packet(std::move(fwd)));
}

void DsrAgent::handle_rerr(const Rerr& r) {
    purge_link(r.link_from, r.link_to);
    if (r.next_index >= r.route.size() || r.route[r.next_index] != self_) return;
    if (r.next_index + 1 == r.route.size()) return;  // reached the data source
    Rerr fwd = r;
    fwd.next_index += 1;
    NodeId next = fwd.route[fwd.next_index];
    send_control(next, Packet(std::move(fwd)));
}

void DsrAgent::on_link_failure(NodeId next_hop, std::shared_ptr<const Packet> pkt) {
    purge_link(self_, next_hop);
    for (const auto& queued : mac_.extract_queued(next_hop)) {
        tracer_.rec(self_, "RTG", "drop",
                    tfmt("reason=linkfail next=%d kind=%s", next_hop, packet_kind_name(*queued)));
        ledger_->linkfail_drops += 1;
    }
    const DataPkt* d = pkt ? std::get_if<DataPkt>(pkt.get()) : nullptr;
    if (!d) return;  // lost control traffic is not reported
    std::size_t k = d->next_index;
    if (k == 0 || k >= d->route.size() || d->route[k] != next_hop) return;
    if (k == 1) return;  // we are the source; the cache purge is enough
    Rerr e;
    e.link_from = self_;
    e.link_to = next_hop;
    e.route.assign(d->route.rend() - k, d->route.rend());  // self..source reversed
    e.next_index = 1;
    NodeId toward = e.route[1];
    send_control(toward, Packet(std::move(e)));
}

}  // namespace manetsim
