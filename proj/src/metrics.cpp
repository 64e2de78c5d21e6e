#include "manetsim/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace manetsim {

RunMetrics finalize_metrics(const Ledger& l) {
    RunMetrics m;
    m.link_failures = l.link_failures;
    if (l.data_delivered > 0) {
        m.nrl = static_cast<double>(l.routing_control_tx) / static_cast<double>(l.data_delivered);
        m.avg_delay_s = l.delay_sum / static_cast<double>(l.data_delivered);
    } else {
        m.nrl = std::numeric_limits<double>::infinity();
        m.avg_delay_s = std::numeric_limits<double>::infinity();
    }
    m.throughput_pps =
        l.duration > 0 ? static_cast<double>(l.data_delivered) / l.duration : 0.0;
    return m;
}

std::string format_metric(double v) {
    if (!std::isfinite(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string metrics_csv_header() {
    return "run_id,mac_policy,v_max,n_connections,seed,link_failures,nrl,throughput_pps,"
           "avg_delay_s";
}

std::string metrics_csv_row(const std::string& run_id, const std::string& mac_policy,
                            double v_max, int n_connections, std::uint64_t seed,
                            const RunMetrics& m) {
    std::ostringstream out;
    out << run_id << ',' << mac_policy << ',' << format_metric(v_max) << ',' << n_connections
        << ',' << seed << ',' << m.link_failures << ',' << format_metric(m.nrl) << ','
        << format_metric(m.throughput_pps) << ',' << format_metric(m.avg_delay_s);
    return out.str();
}

}  // namespace manetsim
