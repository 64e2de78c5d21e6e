// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria 5 through 8 share a single comparison sweep.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "harness.hpp"
#include "manetsim/runner.hpp"
#include "trace_scan.hpp"

using namespace manetsim;
using namespace manetsim::testing;

namespace {

struct Criterion {
    int id;
    std::string name;
    bool pass;
    std::string detail;
};

bool close_rel(double a, double b, double rel) {
    if (a == b) return true;
    return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b));
}

struct Checker {
    int failures = 0;
    std::string first_fail;

    void expect(bool ok, const std::string& what) {
        if (ok) return;
        ++failures;
        if (first_fail.empty()) first_fail = what;
    }
};

// ---------------------------------------------------------------- 1

Criterion path_loss_hand_values() {
    Checker c;
    RadioParams u;
    u.pt = u.gt = u.gr = u.ht = u.hr = u.sys_loss = 1.0;
    c.expect(received_power(u, 1.0) == 1.0, "unit params at 1 m");
    c.expect(close_rel(received_power(u, 2.0), 0.0625, 1e-12), "unit params at 2 m");
    RadioParams r = u;
    r.pt = 2.0;
    r.ht = r.hr = 1.5;
    c.expect(close_rel(received_power(r, 10.0), 1.0125e-3, 1e-12), "raised antennas at 10 m");
    c.expect(received_power(u, 0.0) == 1.0, "cap at zero distance");

    c.expect(close_rel(range_from_threshold(u, 1.0), 1.0, 1e-12), "inverse at the cap");
    c.expect(close_rel(range_from_threshold(u, 0.0625), 2.0, 1e-12), "inverse at 2 m");
    RngStream gen(21, "acc-roundtrip");
    for (int i = 0; i < 200; ++i) {
        RadioParams p;
        p.pt = 0.01 + gen.uniform01() * 10.0;
        p.gt = 0.5 + gen.uniform01();
        p.gr = 0.5 + gen.uniform01();
        p.ht = 0.5 + gen.uniform01() * 2.5;
        p.hr = 0.5 + gen.uniform01() * 2.5;
        p.sys_loss = 1.0 + gen.uniform01();
        double thresh = p.pt * std::pow(10.0, -(0.5 + gen.uniform01() * 7.5));
        double d = range_from_threshold(p, thresh);
        c.expect(close_rel(received_power(p, d), thresh, 1e-9), "threshold round trip");
    }
    ScenarioConfig cfg;
    RadioParams derived = make_radio_params(cfg);
    c.expect(close_rel(range_from_threshold(derived, derived.rx_thresh), 250.0, 1e-9),
             "derived receive range");
    c.expect(close_rel(range_from_threshold(derived, derived.cs_thresh), 550.0, 1e-9),
             "derived sense range");
    return {1, "path loss matches hand-evaluated points and inverts cleanly", c.failures == 0,
            c.failures == 0 ? "208 checks" : c.first_fail};
}

// ---------------------------------------------------------------- 2

Criterion retry_limit_decision_table() {
    Checker c;
    const double tx_range = 250.0;
    const SimTime now = 2e6;
    int cases = 0;
    for (double speed : {0.0, 0.05, 4.0, 25.0}) {
        for (double factor : {1.0, 2.0}) {
            ArlParams p;
            p.signal_threshold = 1e-9;
            p.time_factor = factor;
            double tstar = speed <= 0.0
                               ? p.time_cap
                               : std::min(p.time_cap,
                                          factor * tx_range / std::max(speed, p.speed_floor));
            c.expect(arl_time_threshold(speed, tx_range, p) == tstar, "time threshold");
            double ages[] = {0.0, tstar * 0.5, tstar * (1.0 - 1e-9), tstar,
                             tstar * (1.0 + 1e-9), tstar * 2.0};
            double strengths[] = {p.signal_threshold * 0.5, p.signal_threshold * (1.0 - 1e-9),
                                  p.signal_threshold, p.signal_threshold * 2.0};
            for (double age : ages) {
                for (double rss : strengths) {
                    NeighborTable t;
                    t.observe(3, rss, now - age);
                    bool fresh = age <= tstar;
                    bool strong = rss >= p.signal_threshold;
                    const RetryLimits grid[2][2] = {{p.minimum, p.medium},
                                                    {p.medium, p.maximum}};
                    RetryLimits want = grid[fresh ? 1 : 0][strong ? 1 : 0];
                    RetryLimits got = arl_select_limits(t, 3, now, speed, tx_range, p);
                    c.expect(got.srl == want.srl && got.lrl == want.lrl, "quadrant selection");
                    ++cases;
                }
            }
            NeighborTable empty;
            RetryLimits fb = arl_select_limits(empty, 3, now, speed, tx_range, p);
            c.expect(fb.srl == p.fallback.srl && fb.lrl == p.fallback.lrl, "fallback");
            ++cases;
        }
    }
    return {2, "adaptive limit selection matches a brute-force decision table",
            c.failures == 0,
            c.failures == 0 ? std::to_string(cases) + " table cases" : c.first_fail};
}

// ---------------------------------------------------------------- 3

Criterion retry_limits_in_action() {
    Checker c;
    {
        FixedWorld w({{0.0, 0.0}, {150.0, 0.0}});
        w.mac(1).set_fault_profile(FaultProfile{false, true});
        TransportSegment seg;
        seg.bytes = 512;
        w.mac(0).enqueue(1, std::make_shared<const Packet>(DataPkt{{0, 1}, 1, seg}));
        w.sched.run_until(30.0);
        c.expect(count_lines(w.sink.lines(), {"MAC tx", "kind=RTS"}) == 7,
                 "baseline sends 7 requests");
        c.expect(w.ledger.link_failures == 1, "baseline fails once");
    }
    {
        ScenarioConfig cfg;
        cfg.mac_policy = "adaptive";
        FixedWorld w({{0.0, 0.0}, {150.0, 0.0}}, cfg);
        w.mac(1).set_fault_profile(FaultProfile{false, true});
        w.table(0).observe(1, cfg.arl_signal_factor * w.radio.rx_thresh, 0.0);
        TransportSegment seg;
        seg.bytes = 512;
        w.mac(0).enqueue(1, std::make_shared<const Packet>(DataPkt{{0, 1}, 1, seg}));
        w.sched.run_until(60.0);
        c.expect(count_lines(w.sink.lines(), {"MAC tx", "kind=RTS"}) == 16,
                 "adaptive maximum sends 16 requests");
        c.expect(w.ledger.link_failures == 1, "adaptive fails once");
    }
    {
        FixedWorld w({{0.0, 0.0}, {150.0, 0.0}});
        w.mac(1).set_fault_profile(FaultProfile{true, false});
        TransportSegment seg;
        seg.bytes = 512;
        w.mac(0).enqueue(1, std::make_shared<const Packet>(DataPkt{{0, 1}, 1, seg}));
        w.sched.run_until(30.0);
        c.expect(count_lines(w.sink.lines(), {"MAC tx", "kind=DATA"}) == 4,
                 "baseline sends 4 data attempts");
    }
    {
        ScenarioConfig cfg;
        cfg.mac_policy = "adaptive";
        FixedWorld w({{0.0, 0.0}, {100.0, 0.0}}, cfg);
        w.mac(1).set_fault_profile(FaultProfile{true, false});
        w.table(0).observe(1, cfg.arl_signal_factor * w.radio.rx_thresh, 0.0);
        TransportSegment seg;
        seg.bytes = 512;
        w.mac(0).enqueue(1, std::make_shared<const Packet>(DataPkt{{0, 1}, 1, seg}));
        w.sched.run_until(60.0);
        c.expect(count_lines(w.sink.lines(), {"MAC tx", "kind=DATA"}) == 8,
                 "adaptive maximum sends 8 data attempts");
    }
    return {3, "retry limits govern observable attempt counts (7 vs 16, 4 vs 8)",
            c.failures == 0, c.failures == 0 ? "4 scenarios" : c.first_fail};
}

// ---------------------------------------------------------------- 4

Criterion static_pair_sanity() {
    Checker c;
    std::string detail;
    for (const char* policy : {"baseline", "adaptive"}) {
        ScenarioConfig cfg;
        cfg.n_nodes = 2;
        cfg.conn_pairs = "0-1";
        cfg.connections = 1;
        cfg.v_max = 0.0;
        cfg.duration = 300.0;
        cfg.arena_width = 150.0;
        cfg.arena_height = 150.0;
        cfg.mac_policy = policy;
        Simulator sim(cfg, nullptr);
        RunMetrics m = sim.run();
        c.expect(m.link_failures == 0, std::string(policy) + ": link failures");
        c.expect(sim.ledger().data_delivered > 10000, std::string(policy) + ": volume");
        c.expect(m.nrl < 0.01, std::string(policy) + ": routing load");
        c.expect(m.avg_delay_s < 0.5, std::string(policy) + ": delay");
        if (detail.empty())
            detail = tfmt("%lld pkts, nrl %.5f, delay %.4fs",
                          static_cast<long long>(sim.ledger().data_delivered), m.nrl,
                          m.avg_delay_s);
    }
    return {4, "a static in-range pair streams for 300 s with zero link failures",
            c.failures == 0, c.failures == 0 ? detail : c.first_fail};
}

// ---------------------------------------------------------------- 5-8

struct SweepOutcome {
    AggregateMap agg;
    double elapsed_s = 0.0;
    int n_seeds = 0;
};

SweepOutcome comparison_sweep() {
    ScenarioConfig base;
    SweepAxes axes;
    axes.seeds.clear();
    for (std::uint64_t s = 1; s <= 40; ++s) axes.seeds.push_back(s);
    auto t0 = std::chrono::steady_clock::now();
    std::vector<SweepRow> rows = run_sweep(base, axes, 1, "");
    auto t1 = std::chrono::steady_clock::now();
    SweepOutcome out;
    out.agg = aggregate_rows(rows);
    out.elapsed_s = std::chrono::duration<double>(t1 - t0).count();
    out.n_seeds = static_cast<int>(axes.seeds.size());
    return out;
}

struct CellPair {
    double v;
    int load;
    const AggregateCell* base;
    const AggregateCell* adapt;
};

std::vector<CellPair> paired_cells(const AggregateMap& agg) {
    std::set<std::pair<double, int>> cells;
    for (const auto& [key, c] : agg) cells.insert({std::get<1>(key), std::get<2>(key)});
    std::vector<CellPair> out;
    for (const auto& [v, load] : cells) {
        const AggregateCell& b = agg.at(AggKey{"baseline", v, load});
        const AggregateCell& a = agg.at(AggKey{"adaptive", v, load});
        out.push_back(CellPair{v, load, &b, &a});
    }
    return out;
}

Criterion link_failure_trend(const SweepOutcome& sw) {
    auto cells = paired_cells(sw.agg);
    int below = 0;
    double sep_sum = 0.0;
    for (const CellPair& c : cells) {
        if (c.adapt->lf_mean < c.base->lf_mean) ++below;
        sep_sum += (c.base->lf_mean - c.adapt->lf_mean) / c.base->lf_mean;
    }
    double mean_sep = sep_sum / static_cast<double>(cells.size());
    bool pass = below == static_cast<int>(cells.size()) && mean_sep >= 0.20 &&
                sw.n_seeds >= 10 && sw.elapsed_s < 600.0;
    return {5, "adaptive cuts link failures in every cell by at least 20% on average", pass,
            tfmt("below in %d/%zu cells, mean separation %.1f%%, %d seeds, %.0f s", below,
                 cells.size(), mean_sep * 100.0, sw.n_seeds, sw.elapsed_s)};
}

Criterion nrl_trend(const SweepOutcome& sw) {
    auto cells = paired_cells(sw.agg);
    int below = 0;
    for (const CellPair& c : cells)
        if (c.adapt->nrl_mean < c.base->nrl_mean) ++below;
    bool pass = below == static_cast<int>(cells.size());
    return {6, "adaptive lowers normalized routing load in every cell", pass,
            tfmt("below in %d/%zu cells", below, cells.size())};
}

Criterion throughput_trend(const SweepOutcome& sw) {
    auto cells = paired_cells(sw.agg);
    int above = 0;
    for (const CellPair& c : cells)
        if (c.adapt->tpt_mean > c.base->tpt_mean) ++above;
    bool pass = above == static_cast<int>(cells.size());
    return {7, "adaptive raises delivered throughput in every cell", pass,
            tfmt("above in %d/%zu cells", above, cells.size())};
}

Criterion delay_trend(const SweepOutcome& sw) {
    auto cells = paired_cells(sw.agg);
    int min_load = cells.empty() ? 0 : cells.front().load;
    for (const CellPair& c : cells) min_load = std::min(min_load, c.load);
    int light_total = 0;
    int light_below = 0;
    int heavy_below = 0;
    int heavy_total = 0;
    for (const CellPair& c : cells) {
        if (c.load == min_load) {
            ++light_total;
            if (c.adapt->delay_mean < c.base->delay_mean) ++light_below;
        } else {
            ++heavy_total;
            if (c.adapt->delay_mean < c.base->delay_mean) ++heavy_below;
        }
    }
    bool pass = light_below == light_total;
    return {8, "adaptive lowers average delay in every light-load cell", pass,
            tfmt("light below in %d/%d, heavy (reported only) below in %d/%d", light_below,
                 light_total, heavy_below, heavy_total)};
}

// ---------------------------------------------------------------- 9

Criterion determinism() {
    Checker c;
    {
        ScenarioConfig cfg;
        cfg.n_nodes = 20;
        cfg.connections = 4;
        cfg.duration = 40.0;
        cfg.v_max = 12.0;
        cfg.seed = 11;
        MemoryTraceSink s1, s2;
        Simulator a(cfg, &s1);
        Simulator b(cfg, &s2);
        RunMetrics ma = a.run();
        RunMetrics mb = b.run();
        c.expect(!s1.lines().empty(), "trace emitted");
        c.expect(s1.joined() == s2.joined(), "repeated run trace differs");
        std::string ra = metrics_csv_row(make_run_id(cfg), cfg.mac_policy, cfg.v_max,
                                         cfg.connections, cfg.seed, ma);
        std::string rb = metrics_csv_row(make_run_id(cfg), cfg.mac_policy, cfg.v_max,
                                         cfg.connections, cfg.seed, mb);
        c.expect(ra == rb, "repeated run csv differs");
    }
    {
        ScenarioConfig base;
        base.n_nodes = 10;
        base.connections = 2;
        base.duration = 15.0;
        SweepAxes axes;
        axes.speeds = {4.0, 16.0};
        axes.loads = {2};
        axes.policies = {"baseline", "adaptive"};
        axes.seeds = {1, 2};
        auto serial = run_sweep(base, axes, 1, "");
        auto threaded = run_sweep(base, axes, 3, "");
        c.expect(sweep_csv(serial) == sweep_csv(threaded),
                 "sweep csv differs across worker counts");
        c.expect(aggregate_csv(aggregate_rows(serial)) ==
                     aggregate_csv(aggregate_rows(threaded)),
                 "aggregate csv differs across worker counts");
    }
    return {9, "equal seeds reproduce byte-identical traces and csv, even threaded",
            c.failures == 0, c.failures == 0 ? "2 repeat runs, 2 sweeps" : c.first_fail};
}

// ---------------------------------------------------------------- 10

Criterion property_suite() {
    Checker c;
    {  // Event ordering against a stable sort oracle.
        RngStream gen(31, "acc-events");
        for (int trial = 0; trial < 30; ++trial) {
            Scheduler s;
            std::vector<std::pair<double, int>> plan;
            int n = 1 + static_cast<int>(gen.uniform_int(30));
            for (int i = 0; i < n; ++i)
                plan.push_back({static_cast<double>(gen.uniform_int(6)) * 0.5, i});
            std::vector<int> fired;
            for (const auto& p : plan) {
                int idx = p.second;
                s.schedule(p.first, [&fired, idx] { fired.push_back(idx); });
            }
            s.run_until(10.0);
            auto want = plan;
            std::stable_sort(want.begin(), want.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            bool ok = fired.size() == want.size();
            for (std::size_t i = 0; ok && i < want.size(); ++i)
                ok = fired[i] == want[i].second;
            c.expect(ok, "event order");
        }
    }
    {  // Propagation monotonicity.
        RngStream gen(32, "acc-mono");
        for (int i = 0; i < 100; ++i) {
            RadioParams p;
            p.pt = 0.01 + gen.uniform01() * 10.0;
            p.ht = 0.5 + gen.uniform01() * 2.5;
            p.hr = 0.5 + gen.uniform01() * 2.5;
            double d1 = 1.0 + gen.uniform01() * 400.0;
            double d2 = d1 + 0.5 + gen.uniform01() * 400.0;
            c.expect(received_power(p, d2) <= received_power(p, d1),
                     "power rises with distance");
        }
    }
    {  // Limit monotonicity and closure.
        ArlParams p;
        p.signal_threshold = 1e-9;
        RngStream gen(33, "acc-arl");
        for (int i = 0; i < 200; ++i) {
            double speed = gen.uniform01() * 25.0;
            double a1 = gen.uniform01() * 40.0;
            double a2 = a1 + gen.uniform01() * 40.0;
            double r2 = p.signal_threshold * gen.uniform01() * 3.0;
            double r1 = r2 + p.signal_threshold * gen.uniform01() * 3.0;
            NeighborTable tb, tw;
            tb.observe(0, r1, 100.0 - a1);
            tw.observe(0, r2, 100.0 - a2);
            RetryLimits better = arl_select_limits(tb, 0, 100.0, speed, 250.0, p);
            RetryLimits worse = arl_select_limits(tw, 0, 100.0, speed, 250.0, p);
            c.expect(better.srl >= worse.srl && better.lrl >= worse.lrl,
                     "limits loosen as evidence weakens");
            bool in_set = (better.srl == p.maximum.srl && better.lrl == p.maximum.lrl) ||
                          (better.srl == p.medium.srl && better.lrl == p.medium.lrl) ||
                          (better.srl == p.minimum.srl && better.lrl == p.minimum.lrl);
            c.expect(in_set, "selection leaves the tier set");
        }
    }
    {  // Cached routes are simple paths.
        RngStream gen(34, "acc-loops");
        for (int trial = 0; trial < 6; ++trial) {
            std::vector<Vec2> pos;
            for (int i = 0; i < 8; ++i)
                pos.push_back(Vec2{gen.uniform01() * 700.0, gen.uniform01() * 700.0});
            FixedWorld w(pos);
            TransportSegment seg;
            seg.bytes = 512;
            seg.seq = 1;
            w.routing(0).send(7, seg);
            w.sched.run_until(3.0);
            for (NodeId i = 0; i < 8; ++i) {
                for (NodeId d = 0; d < 8; ++d) {
                    if (!w.routing(i).has_route(d)) continue;
                    auto r = w.routing(i).cached_route(d);
                    std::set<NodeId> uniq(r.begin(), r.end());
                    c.expect(uniq.size() == r.size() && r.front() == i && r.back() == d,
                             "cached route loops");
                }
            }
        }
    }
    {  // Retransmit timer doubles geometrically to its cap.
        FixedWorld w({{0.0, 0.0}, {1500.0, 0.0}});
        w.connect(1, 0, 1);
        w.sched.run_until(300.0);
        auto rtos = grep_lines(w.sink.lines(), {"TPT rto"});
        c.expect(rtos.size() >= 8, "timer fired");
        double prev = 1.0;
        for (const auto& l : rtos) {
            double v = std::stod(field(l, "rto"));
            c.expect(close_rel(v, std::min(prev * 2.0, 64.0), 1e-6), "timer doubling");
            prev = v;
        }
    }
    {  // The trace recounts the ledger.
        ScenarioConfig cfg;
        cfg.n_nodes = 15;
        cfg.connections = 4;
        cfg.duration = 30.0;
        cfg.v_max = 15.0;
        cfg.seed = 7;
        MemoryTraceSink sink;
        Simulator sim(cfg, &sink);
        sim.run();
        const Ledger& led = sim.ledger();
        const auto& lines = sink.lines();
        c.expect(led.link_failures == count_lines(lines, {"MAC fail"}), "failure recount");
        c.expect(led.routing_control_tx == count_lines(lines, {"RTG send"}),
                 "control recount");
        c.expect(led.data_delivered == count_lines(lines, {"TPT deliver"}),
                 "delivery recount");
        std::int64_t noroute = count_lines(lines, {"RTG bufdrop"});
        for (const auto& l : grep_lines(lines, {"RTG noroute"}))
            noroute += std::stoll(field(l, "dropped"));
        c.expect(led.no_route_drops == noroute, "no-route recount");
        c.expect(led.linkfail_drops == count_lines(lines, {"RTG drop", "reason=linkfail"}),
                 "purge recount");
    }
    return {10, "standalone property suites hold (ordering, propagation, limits, routes, "
                "timers, recounts)",
            c.failures == 0, c.failures == 0 ? "6 suites" : c.first_fail};
}

}  // namespace

int main() {
    std::vector<Criterion> results;
    results.push_back(path_loss_hand_values());
    results.push_back(retry_limit_decision_table());
    results.push_back(retry_limits_in_action());
    results.push_back(static_pair_sanity());

    SweepOutcome sw = comparison_sweep();
    results.push_back(link_failure_trend(sw));
    results.push_back(nrl_trend(sw));
    results.push_back(throughput_trend(sw));
    results.push_back(delay_trend(sw));

    results.push_back(determinism());
    results.push_back(property_suite());

    std::sort(results.begin(), results.end(),
              [](const Criterion& a, const Criterion& b) { return a.id < b.id; });
    bool all = true;
    for (const Criterion& r : results) {
        std::printf("[%s] criterion %d: %s (%s)\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.detail.c_str());
        if (!r.pass) all = false;
    }
    std::printf("%s\n", all ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL");
    return all ? 0 : 1;
}
