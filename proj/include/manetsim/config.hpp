#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace manetsim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One simulation scenario. Flat key = value text file, '#' comments.
/// Every field below is an overridable key of the same name; unknown keys
/// are an error, never silently ignored.
struct ScenarioConfig {
    // scenario
    int n_nodes = 20;
    double arena_width = 1000.0;
    double arena_height = 1000.0;
    double duration = 300.0;
    std::uint64_t seed = 1;
    std::string mac_policy = "baseline";  // baseline | adaptive

    // mobility (random waypoint)
    double v_max = 4.0;
    double v_min = 0.1;
    double pause = 5.0;

    // radio; rx/cs thresholds of 0 mean "derive from tx_range /
    // interference_range by inverting the path-loss law".
    double tx_range = 250.0;
    double interference_range = 550.0;
    double pt = 0.28183815;
    double gt = 1.0;
    double gr = 1.0;
    double ht = 1.5;
    double hr = 1.5;
    double sys_loss = 1.0;
    double rx_thresh = 0.0;
    double cs_thresh = 0.0;
    double bitrate = 2e6;
    double phy_preamble = 192e-6;

    // mac; timeouts of 0 mean "derive from the response frame duration".
    double slot = 20e-6;
    double sifs = 10e-6;
    double difs = 50e-6;
    double cts_timeout = 0.0;
    double ack_timeout = 0.0;
    int cw_min = 32;
    int cw_max = 1024;
    int ifq_limit = 50;
    int rts_bytes = 44;
    int cts_bytes = 38;
    int ack_bytes = 38;
    int mac_header_bytes = 34;
    int srl_default = 7;
    int lrl_default = 4;

    // adaptive retransmission limits
    double arl_signal_factor = 16.0;  // signal threshold = factor * rx_thresh
    double arl_time_factor = 1.0;     // time threshold = factor * tx_range / speed
    double arl_time_cap = 1e6;
    double arl_speed_floor = 0.1;
    int arl_srl_max = 16;
    int arl_srl_med = 12;
    int arl_srl_min = 4;
    int arl_lrl_max = 8;
    int arl_lrl_med = 6;
    int arl_lrl_min = 2;

    // routing
    double rreq_timeout = 0.5;
    int rreq_max_attempts = 3;
    double rreq_jitter = 0.01;
    int send_buffer = 64;

    // transport
    int packet_size = 512;
    int window = 32;
    double rto_initial = 1.0;  // RFC 6298 pre-measurement value
    double rto_min = 1.0;
    double rto_max = 64.0;
    int tcp_ack_bytes = 40;
    int connections = 2;
    std::string conn_pairs;  // "src-dst,src-dst"; empty = seeded random pairs

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parses key = value text. Throws ConfigError on unknown keys or bad values.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);

/// Fixed key order and full-precision numbers: parse(serialize(c)) == c.
std::string serialize_config(const ScenarioConfig& c);

/// Throws ConfigError when a value or combination is invalid.
void validate_config(const ScenarioConfig& c);

}  // namespace manetsim
