#include "manetsim/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace manetsim {
namespace {

std::string trim(const std::string& s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for '" + key + "': " + v);
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        long n = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return static_cast<int>(n);
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for '" + key + "': " + v);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        unsigned long long n = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        throw ConfigError("bad seed value for '" + key + "': " + v);
    }
}

std::string fmt_double(double d) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", d);
    return buf;
}

// Field table shared by the parser and the serializer so the two cannot
// drift apart. Order here is the serialization order.
struct Field {
    const char* key;
    std::function<void(ScenarioConfig&, const std::string&)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

#define F_DOUBLE(name) \
    Field{#name, [](ScenarioConfig& c, const std::string& v) { c.name = parse_double(#name, v); }, \
          [](const ScenarioConfig& c) { return fmt_double(c.name); }}
#define F_INT(name) \
    Field{#name, [](ScenarioConfig& c, const std::string& v) { c.name = parse_int(#name, v); }, \
          [](const ScenarioConfig& c) { return std::to_string(c.name); }}
#define F_STR(name) \
    Field{#name, [](ScenarioConfig& c, const std::string& v) { c.name = v; }, \
          [](const ScenarioConfig& c) { return c.name; }}

const std::vector<Field>& fields() {
    static const std::vector<Field> t = {
        F_INT(n_nodes),
        F_DOUBLE(arena_width),
        F_DOUBLE(arena_height),
        F_DOUBLE(duration),
        Field{"seed",
              [](ScenarioConfig& c, const std::string& v) { c.seed = parse_u64("seed", v); },
              [](const ScenarioConfig& c) { return std::to_string(c.seed); }},
        F_STR(mac_policy),
        F_DOUBLE(v_max),
        F_DOUBLE(v_min),
        F_DOUBLE(pause),
        F_DOUBLE(tx_range),
        F_DOUBLE(interference_range),
        F_DOUBLE(pt),
        F_DOUBLE(gt),
        F_DOUBLE(gr),
        F_DOUBLE(ht),
        F_DOUBLE(hr),
        F_DOUBLE(sys_loss),
        F_DOUBLE(rx_thresh),
        F_DOUBLE(cs_thresh),
        F_DOUBLE(bitrate),
        F_DOUBLE(phy_preamble),
        F_DOUBLE(slot),
        F_DOUBLE(sifs),
        F_DOUBLE(difs),
        F_DOUBLE(cts_timeout),
        F_DOUBLE(ack_timeout),
        F_INT(cw_min),
        F_INT(cw_max),
        F_INT(ifq_limit),
        F_INT(rts_bytes),
        F_INT(cts_bytes),
        F_INT(ack_bytes),
        F_INT(mac_header_bytes),
        F_INT(srl_default),
        F_INT(lrl_default),
        F_DOUBLE(arl_signal_factor),
        F_DOUBLE(arl_time_factor),
        F_DOUBLE(arl_time_cap),
        F_DOUBLE(arl_speed_floor),
        F_INT(arl_srl_max),
        F_INT(arl_srl_med),
        F_INT(arl_srl_min),
        F_INT(arl_lrl_max),
        F_INT(arl_lrl_med),
        F_INT(arl_lrl_min),
        F_DOUBLE(rreq_timeout),
        F_INT(rreq_max_attempts),
        F_DOUBLE(rreq_jitter),
        F_INT(send_buffer),
        F_INT(packet_size),
        F_INT(window),
        F_DOUBLE(rto_initial),
        F_DOUBLE(rto_min),
        F_DOUBLE(rto_max),
        F_INT(tcp_ack_bytes),
        F_INT(connections),
        F_STR(conn_pairs),
    };
    return t;
}

#undef F_DOUBLE
#undef F_INT
#undef F_STR

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    static const std::map<std::string, const Field*> index = [] {
        std::map<std::string, const Field*> m;
        for (const Field& f : fields()) m[f.key] = &f;
        return m;
    }();

    ScenarioConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        auto it = index.find(key);
        if (it == index.end())
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        it->second->set(c, val);
    }
    validate_config(c);
    return c;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& c) {
    std::ostringstream out;
    for (const Field& f : fields()) out << f.key << " = " << f.get(c) << "\n";
    return out.str();
}

void validate_config(const ScenarioConfig& c) {
    auto fail = [](const std::string& msg) { throw ConfigError("invalid config: " + msg); };

    if (c.n_nodes < 2) fail("n_nodes must be at least 2");
    if (c.arena_width <= 0 || c.arena_height <= 0) fail("arena dimensions must be positive");
    if (c.duration <= 0) fail("duration must be positive");
    if (c.mac_policy != "baseline" && c.mac_policy != "adaptive")
        fail("mac_policy must be 'baseline' or 'adaptive'");
    if (c.v_max < 0) fail("v_max must be non-negative");
    if (c.v_max > 0 && c.v_min > c.v_max) fail("v_min must not exceed v_max");
    if (c.pause < 0) fail("pause must be non-negative");
    if (c.tx_range <= 0) fail("tx_range must be positive");
    if (c.interference_range < c.tx_range)
        fail("interference_range must be at least tx_range");
    if (c.pt <= 0 || c.gt <= 0 || c.gr <= 0 || c.ht <= 0 || c.hr <= 0 || c.sys_loss <= 0)
        fail("radio parameters must be positive");
    if (c.rx_thresh < 0 || c.cs_thresh < 0) fail("thresholds must be non-negative");
    if (c.rx_thresh > 0 && c.cs_thresh > 0 && c.cs_thresh > c.rx_thresh)
        fail("cs_thresh must not exceed rx_thresh");
    if (c.bitrate <= 0) fail("bitrate must be positive");
    if (c.phy_preamble < 0) fail("phy_preamble must be non-negative");
    if (c.slot <= 0 || c.sifs <= 0 || c.difs <= 0) fail("mac timings must be positive");
    if (c.sifs >= c.difs) fail("sifs must be shorter than difs");
    if (c.cw_min < 1 || c.cw_max < c.cw_min) fail("need 1 <= cw_min <= cw_max");
    if (c.ifq_limit < 1) fail("ifq_limit must be at least 1");
    if (c.rts_bytes < 1 || c.cts_bytes < 1 || c.ack_bytes < 1 || c.mac_header_bytes < 0)
        fail("frame sizes must be positive");
    if (c.srl_default < 1 || c.lrl_default < 1) fail("default retry limits must be at least 1");
    if (c.arl_signal_factor <= 1) fail("arl_signal_factor must exceed 1");
    if (c.arl_time_factor <= 0) fail("arl_time_factor must be positive");
    if (c.arl_time_cap <= 0) fail("arl_time_cap must be positive");
    if (c.arl_speed_floor <= 0) fail("arl_speed_floor must be positive");
    for (int v : {c.arl_srl_max, c.arl_srl_med, c.arl_srl_min, c.arl_lrl_max, c.arl_lrl_med,
                  c.arl_lrl_min})
        if (v < 1) fail("adaptive retry limits must be at least 1");
    if (c.rreq_timeout <= 0) fail("rreq_timeout must be positive");
    if (c.rreq_max_attempts < 1) fail("rreq_max_attempts must be at least 1");
    if (c.rreq_jitter < 0) fail("rreq_jitter must be non-negative");
    if (c.send_buffer < 1) fail("send_buffer must be at least 1");
    if (c.packet_size < 1) fail("packet_size must be positive");
    if (c.window < 1) fail("window must be at least 1");
    if (c.rto_min <= 0 || c.rto_max < c.rto_min) fail("need 0 < rto_min <= rto_max");
    if (c.rto_initial < c.rto_min || c.rto_initial > c.rto_max) fail("rto_initial must lie in [rto_min, rto_max]");
    if (c.tcp_ack_bytes < 1) fail("tcp_ack_bytes must be positive");
    if (c.connections < 0) fail("connections must be non-negative");
    if (c.conn_pairs.empty() && 2 * c.connections > c.n_nodes)
        fail("random pairing needs n_nodes >= 2 * connections");

    // Derived timeouts must leave room for the response to arrive.
    double resp = c.phy_preamble + c.cts_bytes * 8.0 / c.bitrate;
    if (c.cts_timeout > 0 && c.cts_timeout <= c.sifs + resp)
        fail("cts_timeout too short for a response frame");
    double ackresp = c.phy_preamble + c.ack_bytes * 8.0 / c.bitrate;
    if (c.ack_timeout > 0 && c.ack_timeout <= c.sifs + ackresp)
        fail("ack_timeout too short for a response frame");
}

}  // namespace manetsim
