#include "manetsim/transport.hpp"

#include <cmath>

namespace manetsim {

TcpSource::TcpSource(int conn_id, NodeId self, NodeId dst, TcpParams prm, Scheduler& sched,
                     DsrAgent& routing, Ledger* ledger, Tracer tracer)
    : conn_id_(conn_id),
      self_(self),
      dst_(dst),
      prm_(prm),
      sched_(sched),
      routing_(routing),
      ledger_(ledger),
      tracer_(tracer),
      ssthresh_(static_cast<double>(prm.window)),
      rto_(prm.rto_initial) {}

void TcpSource::start() {
    tracer_.rec(self_, "TPT", "start", tfmt("conn=%d dst=%d", conn_id_, dst_));
    pump();
}

void TcpSource::pump() {
    int limit = std::min(static_cast<int>(cwnd_), prm_.window);
    while (static_cast<int>(unacked_.size()) < limit) {
        std::int64_t seq = next_seq_++;
        SimTime now = sched_.now();
        unacked_.emplace(seq, Outstanding{now, false});
        send_segment(seq, now, false);
    }
    if (!unacked_.empty() && !rto_timer_.valid()) arm_timer();
}

void TcpSource::send_segment(std::int64_t seq, SimTime first_send, bool retx) {
    TransportSegment seg;
    seg.conn_id = conn_id_;
    seg.is_ack = false;
    seg.seq = seq;
    seg.first_send = first_send;
    seg.bytes = prm_.packet_size;
    ledger_->data_sent += 1;
    tracer_.rec(self_, "TPT", "send",
                tfmt("conn=%d seq=%lld retx=%d", conn_id_, static_cast<long long>(seq),
                     retx ? 1 : 0));
    routing_.send(dst_, seg);
}

void TcpSource::arm_timer() {
    sched_.cancel(rto_timer_);
    rto_timer_ = sched_.schedule_in(rto_, [this] { on_rto(); });
}

void TcpSource::on_ack(const TransportSegment& ack) {
    std::int64_t acked_to = ack.seq;
    if (acked_to <= snd_una_) return;
    bool progress = false;
    bool sample_valid = false;
    double sample = 0.0;
    SimTime now = sched_.now();
    for (auto it = unacked_.begin(); it != unacked_.end() && it->first < acked_to;) {
        // Retransmitted segments give no timing sample (their echo is
        // ambiguous); the newest clean one wins.
        if (!it->second.retransmitted) {
            sample = now - it->second.first_send;
            sample_valid = true;
        }
        it = unacked_.erase(it);
        progress = true;
    }
    if (!progress) return;
    snd_una_ = acked_to;
    if (sample_valid) rto_ = rtt_.update(sample, prm_.rto_min, prm_.rto_max);
    if (cwnd_ < ssthresh_)
        cwnd_ += 1.0;
    else
        cwnd_ += 1.0 / cwnd_;
    tracer_.rec(self_, "TPT", "ack",
                tfmt("conn=%d una=%lld cwnd=%.3f rto=%.3f", conn_id_,
                     static_cast<long long>(snd_una_), cwnd_, rto_));
    sched_.cancel(rto_timer_);
    if (!unacked_.empty()) arm_timer();
    pump();
}

void TcpSource::on_rto() {
    if (unacked_.empty()) return;
    ssthresh_ = std::max(static_cast<double>(unacked_.size()) / 2.0, 2.0);
    cwnd_ = 1.0;
    rto_ = std::min(rto_ * 2.0, prm_.rto_max);
    auto earliest = unacked_.begin();
    earliest->second.retransmitted = true;
    tracer_.rec(self_, "TPT", "rto",
                tfmt("conn=%d seq=%lld rto=%.3f", conn_id_,
                     static_cast<long long>(earliest->first), rto_));
    send_segment(earliest->first, earliest->second.first_send, true);
    arm_timer();
}

TcpSink::TcpSink(int conn_id, NodeId self, NodeId peer, TcpParams prm, Scheduler& sched,
                 DsrAgent& routing, Ledger* ledger, Tracer tracer)
    : conn_id_(conn_id),
      self_(self),
      peer_(peer),
      prm_(prm),
      sched_(sched),
      routing_(routing),
      ledger_(ledger),
      tracer_(tracer) {}

void TcpSink::on_data(const TransportSegment& seg) {
    SimTime now = sched_.now();
    bool fresh = false;
    if (seg.seq == next_expected_) {
        fresh = true;
        next_expected_ += 1;
        while (above_.erase(next_expected_)) next_expected_ += 1;
    } else if (seg.seq > next_expected_ && above_.insert(seg.seq).second) {
        fresh = true;
    }
    if (fresh) {
        double delay = now - seg.first_send;
        ledger_->data_delivered += 1;
        ledger_->delay_sum += delay;
        ledger_->bytes_delivered += seg.bytes;
        tracer_.rec(self_, "TPT", "deliver",
                    tfmt("conn=%d seq=%lld delay=%.9f", conn_id_,
                         static_cast<long long>(seg.seq), delay));
    }
    TransportSegment ack;
    ack.conn_id = conn_id_;
    ack.is_ack = true;
    ack.seq = next_expected_;
    ack.first_send = now;
    ack.bytes = prm_.ack_bytes;
    routing_.send(peer_, ack);
}

TcpSource* TransportHost::add_source(int conn_id, NodeId dst, TcpParams prm, Scheduler& sched,
                                     DsrAgent& routing, Ledger* ledger, Tracer tracer) {
    auto src = std::make_unique<TcpSource>(conn_id, self_, dst, prm, sched, routing, ledger,
                                           tracer);
    TcpSource* raw = src.get();
    sources_.emplace(conn_id, std::move(src));
    return raw;
}

TcpSink* TransportHost::add_sink(int conn_id, NodeId peer, TcpParams prm, Scheduler& sched,
                                 DsrAgent& routing, Ledger* ledger, Tracer tracer) {
    auto sink = std::make_unique<TcpSink>(conn_id, self_, peer, prm, sched, routing, ledger,
                                          tracer);
    TcpSink* raw = sink.get();
    sinks_.emplace(conn_id, std::move(sink));
    return raw;
}

void TransportHost::on_receive(const TransportSegment& seg, NodeId) {
    if (seg.is_ack) {
        auto it = sources_.find(seg.conn_id);
        if (it == sources_.end()) {
            tracer_.rec(self_, "TPT", "drop", tfmt("reason=noconn conn=%d", seg.conn_id));
            return;
        }
        it->second->on_ack(seg);
        return;
    }
    auto it = sinks_.find(seg.conn_id);
    if (it == sinks_.end()) {
        tracer_.rec(self_, "TPT", "drop", tfmt("reason=noconn conn=%d", seg.conn_id));
        return;
    }
    it->second->on_data(seg);
}

}  // namespace manetsim
