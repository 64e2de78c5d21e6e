#pragma once

#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "manetsim/arl.hpp"
#include "manetsim/config.hpp"
#include "manetsim/mac.hpp"
#include "manetsim/metrics.hpp"
#include "manetsim/mobility.hpp"
#include "manetsim/phys.hpp"
#include "manetsim/routing.hpp"
#include "manetsim/sim.hpp"
#include "manetsim/trace.hpp"
#include "manetsim/transport.hpp"

namespace manetsim {

struct Connection {
    int conn_id = 0;
    NodeId src = 0;
    NodeId dst = 0;
    SimTime start = 0.0;
};

/// Endpoint pairs from the config: explicit "src-dst,src-dst" list, or
/// seeded random node-disjoint pairs. Start times land in [0, 1) s.
std::vector<Connection> make_connections(const ScenarioConfig& cfg);

/// One fully wired scenario. Construction builds every node; run()
/// advances the clock to the configured duration.
class Simulator {
  public:
    Simulator(const ScenarioConfig& cfg, TraceSink* sink);
    ~Simulator();

    RunMetrics run();

    const Ledger& ledger() const { return ledger_; }
    const std::vector<Connection>& connections() const { return conns_; }
    Scheduler& scheduler() { return sched_; }
    RandomWaypoint& mobility() { return mobility_; }
    const RadioParams& radio() const { return radio_; }
    Mac& mac(NodeId id) { return *nodes_.at(static_cast<std::size_t>(id))->mac; }
    DsrAgent& routing(NodeId id) { return *nodes_.at(static_cast<std::size_t>(id))->routing; }
    NeighborTable& neighbor_table(NodeId id) {
        return nodes_.at(static_cast<std::size_t>(id))->table;
    }

  private:
    struct NodeCtx {
        NeighborTable table;
        std::unique_ptr<RetryPolicy> policy;
        std::unique_ptr<Mac> mac;
        std::unique_ptr<DsrAgent> routing;
        std::unique_ptr<TransportHost> transport;
    };

    ScenarioConfig cfg_;
    Scheduler sched_;
    Ledger ledger_;
    Tracer tracer_;
    RandomWaypoint mobility_;
    RadioParams radio_;
    std::unique_ptr<Channel> channel_;
    std::vector<std::unique_ptr<NodeCtx>> nodes_;
    std::vector<Connection> conns_;
};

std::string make_run_id(const ScenarioConfig& cfg);

struct SweepRow {
    std::string run_id;
    std::string mac_policy;
    double v_max = 0.0;
    int n_connections = 0;
    std::uint64_t seed = 0;
    RunMetrics m;
};

struct SweepAxes {
    std::vector<double> speeds{4, 8, 12, 16, 20, 24};
    std::vector<int> loads{2, 8};
    std::vector<std::string> policies{"baseline", "adaptive"};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
};

/// Full cross product, seed varying fastest. Runs execute on `workers`
/// threads; row order and content depend only on the axes, never on the
/// interleaving. A nonempty trace_dir gets one trace file per run.
std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const SweepAxes& axes, int workers,
                                const std::string& trace_dir);

std::string sweep_csv(const std::vector<SweepRow>& rows);

using AggKey = std::tuple<std::string, double, int>;  // policy, v_max, connections

struct AggregateCell {
    int n = 0;
    double lf_mean = 0.0, lf_sd = 0.0;
    double nrl_mean = 0.0, nrl_sd = 0.0;
    double tpt_mean = 0.0, tpt_sd = 0.0;
    double delay_mean = 0.0, delay_sd = 0.0;
};

using AggregateMap = std::map<AggKey, AggregateCell>;

AggregateMap aggregate_rows(const std::vector<SweepRow>& rows);
std::string aggregate_csv(const AggregateMap& agg);
AggregateMap parse_aggregate_csv(const std::string& text);

/// Directional check of adaptive vs baseline per (speed, load) cell:
/// fewer link failures, lower routing load, higher throughput, and lower
/// delay at the lightest load. Heavy-load delay is reported unchecked.
struct TrendReport {
    bool pass = false;
    std::string text;
};

TrendReport evaluate_trends(const AggregateMap& agg);

}  // namespace manetsim
