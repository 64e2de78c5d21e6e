#include "manetsim/mac.hpp"

#include <algorithm>
#include <cmath>

namespace manetsim {

MacParams make_mac_params(const ScenarioConfig& c) {
    MacParams p;
    p.slot = c.slot;
    p.sifs = c.sifs;
    p.difs = c.difs;
    p.preamble = c.phy_preamble;
    p.bitrate = c.bitrate;
    p.cw_min = c.cw_min;
    p.cw_max = c.cw_max;
    p.ifq_limit = c.ifq_limit;
    p.rts_bytes = c.rts_bytes;
    p.cts_bytes = c.cts_bytes;
    p.ack_bytes = c.ack_bytes;
    p.mac_header_bytes = c.mac_header_bytes;
    p.cts_timeout = c.cts_timeout > 0
                        ? c.cts_timeout
                        : p.sifs + frame_duration(p, p.cts_bytes) + 2 * p.slot;
    p.ack_timeout = c.ack_timeout > 0
                        ? c.ack_timeout
                        : p.sifs + frame_duration(p, p.ack_bytes) + 2 * p.slot;
    return p;
}

Mac::Mac(NodeId self, Scheduler& sched, Channel& ch, MacParams prm, RetryPolicy* policy,
         Ledger* ledger, Tracer tracer, RngStream rng)
    : self_(self),
      sched_(sched),
      ch_(ch),
      prm_(prm),
      policy_(policy),
      ledger_(ledger),
      tracer_(tracer),
      rng_(std::move(rng)),
      cw_(prm.cw_min) {}

void Mac::enqueue(NodeId next_hop, std::shared_ptr<const Packet> pkt) {
    if (static_cast<int>(q_.size()) >= prm_.ifq_limit) {
        ledger_->ifq_drops += 1;
        tracer_.rec(self_, "MAC", "drop",
                    tfmt("reason=ifq next=%d kind=%s", next_hop, packet_kind_name(*pkt)));
        return;
    }
    q_.push_back(Item{next_hop, std::move(pkt)});
    maybe_start();
}

std::vector<std::shared_ptr<const Packet>> Mac::extract_queued(NodeId next_hop) {
    std::vector<std::shared_ptr<const Packet>> out;
    for (auto it = q_.begin(); it != q_.end();) {
        if (it->next_hop == next_hop) {
            out.push_back(std::move(it->pkt));
            it = q_.erase(it);
        } else {
            ++it;
        }
    }
    return out;
}

void Mac::maybe_start() {
    if (phase_ != Phase::Idle || cur_ || q_.empty()) return;
    cur_ = std::move(q_.front());
    q_.pop_front();
    ssrc_ = 0;
    slrc_ = 0;
    phase_ = Phase::Contending;
    begin_access();
}

bool Mac::medium_busy() const {
    return ch_.carrier_busy(self_) || ch_.is_transmitting(self_) || sched_.now() < nav_until_;
}

void Mac::begin_access() {
    access_start_ = -1.0;
    if (medium_busy()) {
        // Carrier edges wake us; a reservation needs its own wakeup.
        bool carrier = ch_.carrier_busy(self_) || ch_.is_transmitting(self_);
        if (!carrier && sched_.now() < nav_until_) {
            sched_.cancel(nav_timer_);
            nav_timer_ = sched_.schedule(nav_until_, [this] { resume_if_idle(); });
        }
        return;
    }
    access_start_ = sched_.now();
    SimTime fire = access_start_ + prm_.difs + slots_left_ * prm_.slot;
    ctimer_ = sched_.schedule(fire, [this] { on_access_won(); });
}

void Mac::freeze() {
    if (phase_ != Phase::Contending || access_start_ < 0) return;
    sched_.cancel(ctimer_);
    SimTime elapsed = sched_.now() - access_start_ - prm_.difs;
    if (elapsed > 0) {
        int consumed = static_cast<int>(std::floor(elapsed / prm_.slot + 1e-9));
        slots_left_ = std::max(0, slots_left_ - consumed);
    }
    access_start_ = -1.0;
}

void Mac::resume_if_idle() {
    if (phase_ != Phase::Contending || access_start_ >= 0) return;
    begin_access();
}

void Mac::on_access_won() {
    if (phase_ != Phase::Contending || !cur_) return;
    if (medium_busy()) {
        begin_access();
        return;
    }
    slots_left_ = 0;
    access_start_ = -1.0;
    if (cur_->next_hop == kBroadcast)
        start_broadcast_data();
    else
        start_unicast_rts();
}

void Mac::start_unicast_rts() {
    SimTime now = sched_.now();
    double rts_d = frame_duration(prm_, prm_.rts_bytes);
    double cts_d = frame_duration(prm_, prm_.cts_bytes);
    double data_d = frame_duration(prm_, data_bytes(*cur_->pkt));
    double ack_d = frame_duration(prm_, prm_.ack_bytes);
    AirFrame f;
    f.kind = FrameKind::Rts;
    f.dst = cur_->next_hop;
    f.bytes = prm_.rts_bytes;
    f.start = now;
    f.end = now + rts_d;
    f.nav_until = now + rts_d + 3 * prm_.sifs + cts_d + data_d + ack_d;
    phase_ = Phase::AwaitCts;
    tracer_.rec(self_, "MAC", "tx",
                tfmt("kind=RTS dst=%d bytes=%d try=%d", f.dst, f.bytes, ssrc_ + 1));
    ch_.transmit(self_, f);
}

void Mac::start_broadcast_data() {
    SimTime now = sched_.now();
    int bytes = data_bytes(*cur_->pkt);
    AirFrame f;
    f.kind = FrameKind::Data;
    f.dst = kBroadcast;
    f.bytes = bytes;
    f.start = now;
    f.end = now + frame_duration(prm_, bytes);
    f.nav_until = f.end;
    f.payload = cur_->pkt;
    phase_ = Phase::TxBroadcast;
    tracer_.rec(self_, "MAC", "tx", tfmt("kind=DATA dst=-1 bytes=%d", bytes));
    ch_.transmit(self_, f);
}

int Mac::data_bytes(const Packet& p) const {
    return prm_.mac_header_bytes + packet_bytes(p);
}

void Mac::schedule_response(FrameKind kind, NodeId dst, SimTime nav_until) {
    if (pending_) return;
    pending_ = Pending{kind, dst, nav_until};
    resp_timer_ = sched_.schedule_in(prm_.sifs, [this] { transmit_pending(); });
}

void Mac::transmit_pending() {
    if (!pending_) return;
    Pending p = *pending_;
    pending_.reset();
    if (ch_.is_transmitting(self_)) return;
    freeze();
    SimTime now = sched_.now();
    AirFrame f;
    f.kind = p.kind;
    f.dst = p.dst;
    f.start = now;
    switch (p.kind) {
        case FrameKind::Cts:
            f.bytes = prm_.cts_bytes;
            f.end = now + frame_duration(prm_, f.bytes);
            f.nav_until = p.nav_until;
            break;
        case FrameKind::Ack:
            f.bytes = prm_.ack_bytes;
            f.end = now + frame_duration(prm_, f.bytes);
            f.nav_until = f.end;
            break;
        case FrameKind::Data:
            if (!cur_) return;
            f.bytes = data_bytes(*cur_->pkt);
            f.end = now + frame_duration(prm_, f.bytes);
            f.nav_until = f.end + prm_.sifs + frame_duration(prm_, prm_.ack_bytes);
            f.payload = cur_->pkt;
            break;
        case FrameKind::Rts:
            return;
    }
    if (p.kind == FrameKind::Data)
        tracer_.rec(self_, "MAC", "tx",
                    tfmt("kind=DATA dst=%d bytes=%d try=%d", f.dst, f.bytes, slrc_ + 1));
    else
        tracer_.rec(self_, "MAC", "tx",
                    tfmt("kind=%s dst=%d bytes=%d", frame_kind_name(f.kind), f.dst, f.bytes));
    ch_.transmit(self_, f);
}

void Mac::phy_busy_start() {
    freeze();
}

void Mac::phy_busy_end() {
    resume_if_idle();
}

void Mac::phy_receive(const AirFrame& f, double power) {
    SimTime now = sched_.now();
    if (on_overhear_) on_overhear_(f.src, power, now);
    if (f.dst == self_) {
        switch (f.kind) {
            case FrameKind::Rts:
                if (fault_.reply_cts && !pending_ &&
                    (phase_ == Phase::Idle || phase_ == Phase::Contending) &&
                    now >= nav_until_) {
                    // Granting the exchange commits us to silence through it.
                    nav_until_ = std::max(nav_until_, f.nav_until);
                    freeze();
                    schedule_response(FrameKind::Cts, f.src, f.nav_until);
                }
                break;
            case FrameKind::Cts:
                if (phase_ == Phase::AwaitCts && cur_ && f.src == cur_->next_hop && !pending_) {
                    sched_.cancel(await_timer_);
                    ssrc_ = 0;
                    phase_ = Phase::AwaitAck;
                    schedule_response(FrameKind::Data, cur_->next_hop, 0.0);
                }
                break;
            case FrameKind::Data:
                if (on_deliver_ && f.payload) on_deliver_(*f.payload, f.src);
                if (fault_.reply_ack) schedule_response(FrameKind::Ack, f.src, 0.0);
                break;
            case FrameKind::Ack:
                if (phase_ == Phase::AwaitAck && cur_ && f.src == cur_->next_hop) {
                    sched_.cancel(await_timer_);
                    slrc_ = 0;
                    complete_success();
                }
                break;
        }
        return;
    }
    if (f.dst == kBroadcast) {
        if (f.kind == FrameKind::Data && on_deliver_ && f.payload) on_deliver_(*f.payload, f.src);
        return;
    }
    // Someone else's exchange: honor the advertised reservation.
    if (f.nav_until > nav_until_) {
        nav_until_ = f.nav_until;
        freeze();
    }
}

void Mac::phy_tx_end(const AirFrame& f) {
    switch (f.kind) {
        case FrameKind::Rts:
            if (phase_ == Phase::AwaitCts)
                await_timer_ = sched_.schedule_in(prm_.cts_timeout, [this] { on_cts_timeout(); });
            break;
        case FrameKind::Data:
            if (phase_ == Phase::TxBroadcast)
                complete_success();
            else if (phase_ == Phase::AwaitAck)
                await_timer_ = sched_.schedule_in(prm_.ack_timeout, [this] { on_ack_timeout(); });
            break;
        case FrameKind::Cts:
        case FrameKind::Ack:
            resume_if_idle();
            break;
    }
}

void Mac::on_cts_timeout() {
    if (phase_ != Phase::AwaitCts || !cur_) return;
    ssrc_ += 1;
    RetryLimits lim = policy_->retry_limits(cur_->next_hop, sched_.now());
    tracer_.rec(self_, "MAC", "timeout",
                tfmt("kind=CTS dst=%d ssrc=%d srl=%d", cur_->next_hop, ssrc_, lim.srl));
    if (ssrc_ >= lim.srl) {
        fail_current("RTS");
        return;
    }
    cw_ = std::min(cw_ * 2, prm_.cw_max);
    slots_left_ = static_cast<int>(rng_.uniform_int(static_cast<std::uint64_t>(cw_)));
    phase_ = Phase::Contending;
    begin_access();
}

void Mac::on_ack_timeout() {
    if (phase_ != Phase::AwaitAck || !cur_) return;
    slrc_ += 1;
    RetryLimits lim = policy_->retry_limits(cur_->next_hop, sched_.now());
    tracer_.rec(self_, "MAC", "timeout",
                tfmt("kind=ACK dst=%d slrc=%d lrl=%d", cur_->next_hop, slrc_, lim.lrl));
    if (slrc_ >= lim.lrl) {
        fail_current("DATA");
        return;
    }
    cw_ = std::min(cw_ * 2, prm_.cw_max);
    slots_left_ = static_cast<int>(rng_.uniform_int(static_cast<std::uint64_t>(cw_)));
    phase_ = Phase::Contending;
    begin_access();
}

void Mac::complete_success() {
    tracer_.rec(self_, "MAC", "done", tfmt("dst=%d", cur_ ? cur_->next_hop : kBroadcast));
    cw_ = prm_.cw_min;
    slots_left_ = static_cast<int>(rng_.uniform_int(static_cast<std::uint64_t>(prm_.cw_min)));
    cur_.reset();
    ssrc_ = 0;
    slrc_ = 0;
    phase_ = Phase::Idle;
    maybe_start();
}

void Mac::fail_current(const char* what) {
    Item item = std::move(*cur_);
    cur_.reset();
    ledger_->link_failures += 1;
    tracer_.rec(self_, "MAC", "fail", tfmt("kind=%s dst=%d", what, item.next_hop));
    ssrc_ = 0;
    slrc_ = 0;
    cw_ = prm_.cw_min;
    slots_left_ = static_cast<int>(rng_.uniform_int(static_cast<std::uint64_t>(prm_.cw_min)));
    phase_ = Phase::Idle;
    if (on_link_failure_) on_link_failure_(item.next_hop, item.pkt);
    maybe_start();
}

}  // namespace manetsim
