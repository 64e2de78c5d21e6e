#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "manetsim/base.hpp"
#include "manetsim/config.hpp"
#include "manetsim/packet.hpp"
#include "manetsim/sim.hpp"

namespace manetsim {

struct RadioParams {
    double pt = 0.28183815;
    double gt = 1.0;
    double gr = 1.0;
    double ht = 1.5;
    double hr = 1.5;
    double sys_loss = 1.0;
    double rx_thresh = 0.0;
    double cs_thresh = 0.0;
};

/// Two-ray ground reflection: pr = pt*gt*gr*ht^2*hr^2 / (d^4 * L).
/// d = 0 caps at the transmit power.
double received_power(const RadioParams& r, double d);

/// Distance at which received_power falls to thresh.
double range_from_threshold(const RadioParams& r, double thresh);

/// Thresholds of 0 in the config are derived by inverting the path loss
/// at tx_range / interference_range.
RadioParams make_radio_params(const ScenarioConfig& c);

enum class Reception { None, SenseOnly, Decodable };

Reception classify_reception(const RadioParams& r, double power);

enum class FrameKind { Rts, Cts, Data, Ack };

const char* frame_kind_name(FrameKind k);

struct AirFrame {
    FrameKind kind = FrameKind::Data;
    NodeId src = 0;
    NodeId dst = kBroadcast;
    int bytes = 0;
    SimTime start = 0.0;
    SimTime end = 0.0;
    SimTime nav_until = 0.0;  // absolute time the medium is reserved through
    Vec2 src_pos;
    std::uint64_t frame_id = 0;
    std::shared_ptr<const Packet> payload;  // data frames only
};

/// Callbacks a node's MAC registers with the channel. busy_start/busy_end
/// report edges of the "foreign energy above carrier sense" level.
class PhyClient {
  public:
    virtual ~PhyClient() = default;
    virtual void phy_busy_start() = 0;
    virtual void phy_busy_end() = 0;
    virtual void phy_receive(const AirFrame& f, double power) = 0;
    virtual void phy_tx_end(const AirFrame& f) = 0;
};

/// Shared medium. Powers are computed once at transmit start; propagation
/// delay is zero. There is no capture: any overlap of sensed energy at a
/// receiver corrupts every frame involved, and a transmitting node loses
/// whatever it was receiving.
class Channel {
  public:
    Channel(Scheduler& sched, RadioParams radio, std::function<Vec2(NodeId)> position_of);

    void attach(NodeId id, PhyClient* client);

    /// frame.start must equal now; frame.end is when finish fires.
    void transmit(NodeId src, AirFrame frame);

    bool carrier_busy(NodeId id) const;
    bool is_transmitting(NodeId id) const;
    const RadioParams& radio() const { return radio_; }

  private:
    struct Rx {
        std::uint64_t frame_id;
        double power;
        bool corrupted;
    };
    struct NodeState {
        PhyClient* client = nullptr;
        int audible = 0;
        bool transmitting = false;
        std::vector<Rx> rx;
    };

    void finish(std::uint64_t frame_id);

    Scheduler& sched_;
    RadioParams radio_;
    std::function<Vec2(NodeId)> position_of_;
    std::map<NodeId, NodeState> nodes_;
    std::map<std::uint64_t, AirFrame> in_flight_;
    std::uint64_t next_frame_id_ = 1;
};

}  // namespace manetsim
