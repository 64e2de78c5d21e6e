#include "manetsim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace manetsim {
namespace {

const ScenarioConfig& checked(const ScenarioConfig& c) {
    validate_config(c);
    return c;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::pair<double, double> mean_sd(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return {std::numeric_limits<double>::infinity(), 0.0};
    double n = static_cast<double>(v.size());
    double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
    if (v.size() < 2) return {m, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return {m, std::sqrt(ss / (n - 1.0))};
}

}  // namespace

std::vector<Connection> make_connections(const ScenarioConfig& cfg) {
    std::vector<Connection> out;
    RngStream rng(cfg.seed, "traffic");
    if (!cfg.conn_pairs.empty()) {
        int id = 0;
        for (const std::string& tok : split(cfg.conn_pairs, ',')) {
            auto dash = tok.find('-');
            if (dash == std::string::npos)
                throw ConfigError("conn_pairs entry needs src-dst: " + tok);
            int src = std::stoi(tok.substr(0, dash));
            int dst = std::stoi(tok.substr(dash + 1));
            if (src < 0 || dst < 0 || src >= cfg.n_nodes || dst >= cfg.n_nodes || src == dst)
                throw ConfigError("conn_pairs entry out of range: " + tok);
            out.push_back(Connection{id++, src, dst, 0.0});
        }
    } else {
        std::vector<NodeId> ids(static_cast<std::size_t>(cfg.n_nodes));
        std::iota(ids.begin(), ids.end(), 0);
        for (std::size_t i = ids.size() - 1; i > 0; --i) {
            std::size_t j = static_cast<std::size_t>(rng.uniform_int(i + 1));
            std::swap(ids[i], ids[j]);
        }
        for (int k = 0; k < cfg.connections; ++k)
            out.push_back(Connection{k, ids[2 * static_cast<std::size_t>(k)],
                                     ids[2 * static_cast<std::size_t>(k) + 1], 0.0});
    }
    for (Connection& c : out) c.start = rng.uniform01();
    return out;
}

Simulator::Simulator(const ScenarioConfig& cfg, TraceSink* sink)
    : cfg_(checked(cfg)),
      tracer_(sink, &sched_),
      mobility_(cfg.n_nodes, cfg.arena_width, cfg.arena_height, cfg.v_min, cfg.v_max, cfg.pause,
                cfg.seed),
      radio_(make_radio_params(cfg)) {
    channel_ = std::make_unique<Channel>(sched_, radio_, [this](NodeId id) {
        return mobility_.position(id, sched_.now());
    });

    MacParams mp = make_mac_params(cfg_);
    RoutingParams rp{cfg_.rreq_timeout, cfg_.rreq_max_attempts, cfg_.rreq_jitter,
                     cfg_.send_buffer};
    TcpParams tp;
    tp.packet_size = cfg_.packet_size;
    tp.window = cfg_.window;
    tp.rto_initial = cfg_.rto_initial;
    tp.rto_min = cfg_.rto_min;
    tp.rto_max = cfg_.rto_max;
    tp.ack_bytes = cfg_.tcp_ack_bytes;

    ArlParams ap;
    ap.signal_threshold = cfg_.arl_signal_factor * radio_.rx_thresh;
    ap.time_factor = cfg_.arl_time_factor;
    ap.time_cap = cfg_.arl_time_cap;
    ap.speed_floor = cfg_.arl_speed_floor;
    ap.maximum = RetryLimits{cfg_.arl_srl_max, cfg_.arl_lrl_max};
    ap.medium = RetryLimits{cfg_.arl_srl_med, cfg_.arl_lrl_med};
    ap.minimum = RetryLimits{cfg_.arl_srl_min, cfg_.arl_lrl_min};
    ap.fallback = RetryLimits{cfg_.srl_default, cfg_.lrl_default};

    for (NodeId i = 0; i < cfg_.n_nodes; ++i) {
        auto ctx = std::make_unique<NodeCtx>();
        if (cfg_.mac_policy == "adaptive") {
            ctx->policy = std::make_unique<AdaptiveRetryPolicy>(
                i, &ctx->table, [this, i] { return mobility_.speed(i, sched_.now()); },
                cfg_.tx_range, ap, tracer_);
        } else {
            ctx->policy =
                std::make_unique<StaticRetryPolicy>(RetryLimits{cfg_.srl_default, cfg_.lrl_default});
        }
        ctx->mac = std::make_unique<Mac>(i, sched_, *channel_, mp, ctx->policy.get(), &ledger_,
                                         tracer_, RngStream(cfg_.seed, "mac/" + std::to_string(i)));
        ctx->routing = std::make_unique<DsrAgent>(
            i, sched_, *ctx->mac, rp, &ledger_, tracer_,
            RngStream(cfg_.seed, "routing/" + std::to_string(i)));
        ctx->transport = std::make_unique<TransportHost>(i, tracer_);
        channel_->attach(i, ctx->mac.get());

        NodeCtx* c = ctx.get();
        ctx->mac->set_overhear(
            [c](NodeId s, double rss, SimTime now) { c->table.observe(s, rss, now); });
        ctx->mac->set_deliver(
            [c](const Packet& p, NodeId from) { c->routing->on_mac_deliver(p, from); });
        ctx->mac->set_link_failure([c](NodeId nh, std::shared_ptr<const Packet> pkt) {
            c->routing->on_link_failure(nh, std::move(pkt));
        });
        ctx->routing->set_deliver([c](const TransportSegment& seg, NodeId src) {
            c->transport->on_receive(seg, src);
        });
        nodes_.push_back(std::move(ctx));
    }

    conns_ = make_connections(cfg_);
    for (const Connection& cn : conns_) {
        nodes_[static_cast<std::size_t>(cn.dst)]->transport->add_sink(
            cn.conn_id, cn.src, tp, sched_, *nodes_[static_cast<std::size_t>(cn.dst)]->routing,
            &ledger_, tracer_);
        TcpSource* s = nodes_[static_cast<std::size_t>(cn.src)]->transport->add_source(
            cn.conn_id, cn.dst, tp, sched_, *nodes_[static_cast<std::size_t>(cn.src)]->routing,
            &ledger_, tracer_);
        sched_.schedule(cn.start, [s] { s->start(); });
        tracer_.rec(cn.src, "SIM", "conn",
                    tfmt("id=%d dst=%d start=%.9f", cn.conn_id, cn.dst, cn.start));
    }
}

Simulator::~Simulator() = default;

RunMetrics Simulator::run() {
    sched_.run_until(cfg_.duration);
    ledger_.duration = cfg_.duration;
    return finalize_metrics(ledger_);
}

std::string make_run_id(const ScenarioConfig& cfg) {
    return tfmt("%s-v%g-c%d-s%llu", cfg.mac_policy.c_str(), cfg.v_max, cfg.connections,
                static_cast<unsigned long long>(cfg.seed));
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const SweepAxes& axes, int workers,
                                const std::string& trace_dir) {
    if (axes.speeds.empty() || axes.loads.empty() || axes.policies.empty() || axes.seeds.empty())
        throw std::runtime_error("sweep needs nonempty axes");
    const std::size_t n_seeds = axes.seeds.size();
    const std::size_t n_speeds = axes.speeds.size();
    const std::size_t n_loads = axes.loads.size();
    const std::size_t jobs = axes.policies.size() * n_loads * n_speeds * n_seeds;

    std::vector<SweepRow> rows(jobs);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex err_mu;
    std::string err;

    auto do_run = [&](std::size_t i) {
        std::size_t t = i;
        std::size_t seed_i = t % n_seeds;
        t /= n_seeds;
        std::size_t speed_i = t % n_speeds;
        t /= n_speeds;
        std::size_t load_i = t % n_loads;
        std::size_t policy_i = t / n_loads;

        ScenarioConfig cfg = base;
        cfg.mac_policy = axes.policies[policy_i];
        cfg.connections = axes.loads[load_i];
        cfg.v_max = axes.speeds[speed_i];
        cfg.seed = axes.seeds[seed_i];

        SweepRow row;
        row.run_id = make_run_id(cfg);
        row.mac_policy = cfg.mac_policy;
        row.v_max = cfg.v_max;
        row.n_connections = cfg.connections;
        row.seed = cfg.seed;
        try {
            std::unique_ptr<FileTraceSink> sink;
            if (!trace_dir.empty())
                sink = std::make_unique<FileTraceSink>(trace_dir + "/" + row.run_id + ".trace");
            Simulator sim(cfg, sink.get());
            row.m = sim.run();
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(err_mu);
            err = "sweep run " + row.run_id + " failed: " + e.what() + "\nconfig:\n" +
                  serialize_config(cfg);
            failed = true;
            return;
        }
        rows[i] = std::move(row);
    };

    int n_workers = std::max(1, workers);
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= jobs || failed.load()) break;
            do_run(i);
        }
    };
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }
    if (failed.load()) throw std::runtime_error(err);
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << metrics_csv_header() << "\n";
    for (const SweepRow& r : rows)
        out << metrics_csv_row(r.run_id, r.mac_policy, r.v_max, r.n_connections, r.seed, r.m)
            << "\n";
    return out.str();
}

AggregateMap aggregate_rows(const std::vector<SweepRow>& rows) {
    std::map<AggKey, std::vector<RunMetrics>> groups;
    for (const SweepRow& r : rows)
        groups[AggKey{r.mac_policy, r.v_max, r.n_connections}].push_back(r.m);
    AggregateMap out;
    for (const auto& [key, ms] : groups) {
        std::vector<double> lf, nrl, tpt, delay;
        for (const RunMetrics& m : ms) {
            lf.push_back(static_cast<double>(m.link_failures));
            nrl.push_back(m.nrl);
            tpt.push_back(m.throughput_pps);
            delay.push_back(m.avg_delay_s);
        }
        AggregateCell c;
        c.n = static_cast<int>(ms.size());
        std::tie(c.lf_mean, c.lf_sd) = mean_sd(lf);
        std::tie(c.nrl_mean, c.nrl_sd) = mean_sd(nrl);
        std::tie(c.tpt_mean, c.tpt_sd) = mean_sd(tpt);
        std::tie(c.delay_mean, c.delay_sd) = mean_sd(delay);
        out[key] = c;
    }
    return out;
}

std::string aggregate_csv(const AggregateMap& agg) {
    std::ostringstream out;
    out << "mac_policy,v_max,n_connections,n_runs,link_failures_mean,link_failures_sd,"
           "nrl_mean,nrl_sd,throughput_pps_mean,throughput_pps_sd,avg_delay_s_mean,"
           "avg_delay_s_sd\n";
    for (const auto& [key, c] : agg) {
        out << std::get<0>(key) << ',' << format_metric(std::get<1>(key)) << ','
            << std::get<2>(key) << ',' << c.n << ',' << format_metric(c.lf_mean) << ','
            << format_metric(c.lf_sd) << ',' << format_metric(c.nrl_mean) << ','
            << format_metric(c.nrl_sd) << ',' << format_metric(c.tpt_mean) << ','
            << format_metric(c.tpt_sd) << ',' << format_metric(c.delay_mean) << ','
            << format_metric(c.delay_sd) << "\n";
    }
    return out.str();
}

AggregateMap parse_aggregate_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("aggregate csv: empty");
    AggregateMap out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f = split(line, ',');
        if (f.size() != 12) throw std::runtime_error("aggregate csv: bad row: " + line);
        AggregateCell c;
        c.n = std::stoi(f[3]);
        c.lf_mean = std::stod(f[4]);
        c.lf_sd = std::stod(f[5]);
        c.nrl_mean = std::stod(f[6]);
        c.nrl_sd = std::stod(f[7]);
        c.tpt_mean = std::stod(f[8]);
        c.tpt_sd = std::stod(f[9]);
        c.delay_mean = std::stod(f[10]);
        c.delay_sd = std::stod(f[11]);
        out[AggKey{f[0], std::stod(f[1]), std::stoi(f[2])}] = c;
    }
    return out;
}

TrendReport evaluate_trends(const AggregateMap& agg) {
    std::set<std::pair<double, int>> cells;
    int min_load = std::numeric_limits<int>::max();
    for (const auto& [key, c] : agg) {
        cells.insert({std::get<1>(key), std::get<2>(key)});
        min_load = std::min(min_load, std::get<2>(key));
    }
    if (cells.empty()) throw std::runtime_error("aggregate holds no cells");

    TrendReport rep;
    rep.pass = true;
    std::ostringstream out;
    for (const auto& [v, load] : cells) {
        auto b = agg.find(AggKey{"baseline", v, load});
        auto a = agg.find(AggKey{"adaptive", v, load});
        if (b == agg.end() || a == agg.end())
            throw std::runtime_error(tfmt("aggregate missing a policy at v_max=%g load=%d", v,
                                          load));
        struct Check {
            const char* name;
            double base;
            double adapt;
            bool higher_is_better;
            bool gated;
        };
        Check checks[] = {
            {"link_failures", b->second.lf_mean, a->second.lf_mean, false, true},
            {"nrl", b->second.nrl_mean, a->second.nrl_mean, false, true},
            {"throughput_pps", b->second.tpt_mean, a->second.tpt_mean, true, true},
            {"avg_delay_s", b->second.delay_mean, a->second.delay_mean, false,
             load == min_load},
        };
        for (const Check& ck : checks) {
            bool ok = ck.higher_is_better ? ck.adapt > ck.base : ck.adapt < ck.base;
            const char* flag = !ck.gated ? "REPORT" : (ok ? "PASS" : "FAIL");
            if (ck.gated && !ok) rep.pass = false;
            out << tfmt("v_max=%g load=%d %s baseline=%s adaptive=%s %s", v, load, ck.name,
                        format_metric(ck.base).c_str(), format_metric(ck.adapt).c_str(), flag)
                << "\n";
        }
    }
    out << (rep.pass ? "TREND PASS" : "TREND FAIL") << "\n";
    rep.text = out.str();
    return rep;
}

}  // namespace manetsim
