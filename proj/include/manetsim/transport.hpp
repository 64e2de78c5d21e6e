#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>

#include "manetsim/metrics.hpp"
#include "manetsim/packet.hpp"
#include "manetsim/routing.hpp"
#include "manetsim/sim.hpp"
#include "manetsim/trace.hpp"

namespace manetsim {

struct TcpParams {
    int packet_size = 512;
    int window = 32;  // hard cap on segments in flight
    double rto_min = 1.0;
    double rto_max = 64.0;
    double rto_initial = 1.0;
    int ack_bytes = 40;
};

/// Smoothed RTT with mean deviation, gains 1/8 and 1/4. The first sample
/// primes both terms; rto is srtt + 4 * rttvar under the given clamp.
struct RttEstimator {
    double srtt = 0.0;
    double rttvar = 0.0;
    bool primed = false;

    double update(double sample, double rto_min, double rto_max) {
        if (!primed) {
            srtt = sample;
            rttvar = sample / 2.0;
            primed = true;
        } else {
            rttvar = 0.75 * rttvar + 0.25 * std::abs(srtt - sample);
            srtt = 0.875 * srtt + 0.125 * sample;
        }
        return std::clamp(srtt + 4.0 * rttvar, rto_min, rto_max);
    }
};

/// Greedy bulk sender: always has another segment to offer, limited by
/// a congestion window under the fixed cap. Loss recovery is timeout
/// based with cumulative acks; there is no fast retransmit.
class TcpSource {
  public:
    TcpSource(int conn_id, NodeId self, NodeId dst, TcpParams prm, Scheduler& sched,
              DsrAgent& routing, Ledger* ledger, Tracer tracer);

    void start();
    void on_ack(const TransportSegment& ack);

    double cwnd() const { return cwnd_; }
    double srtt() const { return rtt_.srtt; }
    double rto() const { return rto_; }
    std::int64_t next_seq() const { return next_seq_; }
    std::int64_t snd_una() const { return snd_una_; }

  private:
    struct Outstanding {
        SimTime first_send;
        bool retransmitted = false;
    };

    void pump();
    void send_segment(std::int64_t seq, SimTime first_send, bool retx);
    void on_rto();
    void arm_timer();

    int conn_id_;
    NodeId self_;
    NodeId dst_;
    TcpParams prm_;
    Scheduler& sched_;
    DsrAgent& routing_;
    Ledger* ledger_;
    Tracer tracer_;

    std::int64_t next_seq_ = 1;
    std::int64_t snd_una_ = 1;
    double cwnd_ = 1.0;
    double ssthresh_;
    RttEstimator rtt_;
    double rto_;
    std::map<std::int64_t, Outstanding> unacked_;
    EventHandle rto_timer_;
};

/// Receives segments, acks cumulatively on every arrival, and counts
/// each segment's first arrival toward delivery metrics.
class TcpSink {
  public:
    TcpSink(int conn_id, NodeId self, NodeId peer, TcpParams prm, Scheduler& sched,
            DsrAgent& routing, Ledger* ledger, Tracer tracer);

    void on_data(const TransportSegment& seg);

    std::int64_t next_expected() const { return next_expected_; }

  private:
    int conn_id_;
    NodeId self_;
    NodeId peer_;
    TcpParams prm_;
    Scheduler& sched_;
    DsrAgent& routing_;
    Ledger* ledger_;
    Tracer tracer_;

    std::int64_t next_expected_ = 1;
    std::set<std::int64_t> above_;  // received out of order
};

/// Per node endpoint registry; dispatches inbound segments by connection.
class TransportHost {
  public:
    TransportHost(NodeId self, Tracer tracer) : self_(self), tracer_(tracer) {}

    TcpSource* add_source(int conn_id, NodeId dst, TcpParams prm, Scheduler& sched,
                          DsrAgent& routing, Ledger* ledger, Tracer tracer);
    TcpSink* add_sink(int conn_id, NodeId peer, TcpParams prm, Scheduler& sched,
                      DsrAgent& routing, Ledger* ledger, Tracer tracer);

    void on_receive(const TransportSegment& seg, NodeId from);

  private:
    NodeId self_;
    Tracer tracer_;
    std::map<int, std::unique_ptr<TcpSource>> sources_;
    std::map<int, std::unique_ptr<TcpSink>> sinks_;
};

}  // namespace manetsim
