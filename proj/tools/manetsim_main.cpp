#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "manetsim/config.hpp"
#include "manetsim/runner.hpp"

namespace {

using namespace manetsim;

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

std::vector<std::string> parse_strings(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

// "7" means seeds 1..7, "3,5,9" is taken literally.
std::vector<std::uint64_t> parse_seeds(const std::string& s) {
    std::vector<std::uint64_t> out;
    if (s.find(',') == std::string::npos) {
        std::uint64_t n = std::stoull(s);
        for (std::uint64_t i = 1; i <= n; ++i) out.push_back(i);
        return out;
    }
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoull(tok));
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

struct Options {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool trace = false;
    int workers = 1;
    std::string speeds = "4,8,12,16,20,24";
    std::string loads = "2,8";
    std::string policies = "baseline,adaptive";
    std::string seeds = "10";
    std::string aggregate_path;
};

ScenarioConfig load_base(const Options& o) {
    ScenarioConfig cfg;
    if (!o.config_path.empty()) cfg = load_config_file(o.config_path);
    if (o.seed_given) cfg.seed = o.seed;
    validate_config(cfg);
    return cfg;
}

int cmd_run(const Options& o) {
    ScenarioConfig cfg = load_base(o);
    std::filesystem::create_directories(o.out_dir);
    std::string run_id = make_run_id(cfg);

    std::unique_ptr<FileTraceSink> sink;
    if (o.trace) sink = std::make_unique<FileTraceSink>(o.out_dir + "/" + run_id + ".trace");

    Simulator sim(cfg, sink.get());
    for (const Connection& c : sim.connections())
        std::cout << "connection " << c.conn_id << ": " << c.src << " -> " << c.dst
                  << " start=" << format_metric(c.start) << "\n";
    RunMetrics m = sim.run();

    std::string csv = metrics_csv_header() + "\n" +
                      metrics_csv_row(run_id, cfg.mac_policy, cfg.v_max,
                                      static_cast<int>(sim.connections().size()), cfg.seed, m) +
                      "\n";
    write_file(o.out_dir + "/metrics.csv", csv);
    std::cout << csv;
    return 0;
}

int cmd_sweep(const Options& o) {
    ScenarioConfig base = load_base(o);
    SweepAxes axes;
    axes.speeds = parse_doubles(o.speeds);
    axes.loads = parse_ints(o.loads);
    axes.policies = parse_strings(o.policies);
    axes.seeds = parse_seeds(o.seeds);

    std::filesystem::create_directories(o.out_dir);
    std::string trace_dir;
    if (o.trace) {
        trace_dir = o.out_dir + "/traces";
        std::filesystem::create_directories(trace_dir);
    }

    std::vector<SweepRow> rows = run_sweep(base, axes, o.workers, trace_dir);
    write_file(o.out_dir + "/raw.csv", sweep_csv(rows));
    write_file(o.out_dir + "/aggregate.csv", aggregate_csv(aggregate_rows(rows)));
    std::cout << rows.size() << " runs -> " << o.out_dir << "/raw.csv, " << o.out_dir
              << "/aggregate.csv\n";
    return 0;
}

int cmd_compare(const Options& o) {
    std::ifstream in(o.aggregate_path);
    if (!in) throw std::runtime_error("cannot open " + o.aggregate_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    TrendReport rep = evaluate_trends(parse_aggregate_csv(ss.str()));
    std::cout << rep.text;
    return rep.pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ad hoc network simulator: DCF MAC with static or adaptive retry limits"};
    app.require_subcommand(1);
    Options o;

    CLI::App* run = app.add_subcommand("run", "Execute one scenario and write its metrics row");
    run->add_option("--config", o.config_path, "Scenario config file (defaults when omitted)");
    run->add_option("--seed", o.seed, "Override the config seed")
        ->each([&o](const std::string&) { o.seed_given = true; });
    run->add_option("--out-dir", o.out_dir, "Output directory");
    run->add_flag("--trace", o.trace, "Write a per-event trace file");

    CLI::App* sweep = app.add_subcommand("sweep", "Run a speed x load x policy x seed grid");
    sweep->add_option("--config", o.config_path, "Base config file");
    sweep->add_option("--out-dir", o.out_dir, "Output directory");
    sweep->add_flag("--trace", o.trace, "Write one trace file per run");
    sweep->add_option("--workers", o.workers, "Concurrent runs");
    sweep->add_option("--speeds", o.speeds, "Comma list of v_max values");
    sweep->add_option("--loads", o.loads, "Comma list of connection counts");
    sweep->add_option("--policies", o.policies, "Comma list of MAC policies");
    sweep->add_option("--seeds", o.seeds, "Comma list of seeds, or N for 1..N");

    CLI::App* compare =
        app.add_subcommand("compare", "Check adaptive-vs-baseline trends in an aggregate table");
    compare->add_option("aggregate", o.aggregate_path, "aggregate.csv written by sweep")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return cmd_run(o);
        if (sweep->parsed()) return cmd_sweep(o);
        return cmd_compare(o);
    } catch (const manetsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
