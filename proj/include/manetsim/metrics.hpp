#pragma once

#include <cstdint>
#include <string>

namespace manetsim {

/// Raw event counters accumulated during a run.
struct Ledger {
    std::int64_t link_failures = 0;     // retry limit exhausted at the MAC
    std::int64_t routing_control_tx = 0;  // per hop RREQ/RREP/RERR handed to the MAC
    std::int64_t data_delivered = 0;    // first arrival of each segment at its sink
    double delay_sum = 0.0;             // sum of first-send to first-delivery times
    std::int64_t bytes_delivered = 0;
    double duration = 0.0;

    // Secondary counters, reported in traces only.
    std::int64_t ifq_drops = 0;
    std::int64_t no_route_drops = 0;
    std::int64_t linkfail_drops = 0;
    std::int64_t data_sent = 0;
};

/// Derived per-run figures. Ratios over zero deliveries are infinity and
/// serialize as "inf".
struct RunMetrics {
    std::int64_t link_failures = 0;
    double nrl = 0.0;
    double throughput_pps = 0.0;
    double avg_delay_s = 0.0;
};

RunMetrics finalize_metrics(const Ledger& l);

std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& run_id, const std::string& mac_policy,
                            double v_max, int n_connections, std::uint64_t seed,
                            const RunMetrics& m);

/// %.9g with "inf" for non-finite values, shared by CSV and trace output.
std::string format_metric(double v);

}  // namespace manetsim
