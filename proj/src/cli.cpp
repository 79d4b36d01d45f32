#include "intentlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "intentlab/error.hpp"
#include "intentlab/formats.hpp"
#include "intentlab/snapshot.hpp"
#include "intentlab/synthgen.hpp"

namespace intentlab::cli {

namespace {

namespace fs = std::filesystem;

// Usage mistakes detected after CLI11 has accepted the arguments.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& contents) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot write " + path.string());
    f << contents;
    if (!f) throw ValidationError("write failed for " + path.string());
}

EngineConfig load_config(const std::string& path) {
    return path.empty() ? EngineConfig{} : read_config_file(path);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct ReplayArgs {
    std::string log;
    std::string config;
    std::string report;
    std::string snapshot_dir;
    std::size_t jobs = 1;
    bool quiet = false;
};

int cmd_replay(const ReplayArgs& a, std::ostream& out, std::ostream& err) {
    const EngineConfig cfg = load_config(a.config);
    std::vector<std::string> warnings;
    const auto events = read_event_log_file(a.log, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << '\n';

    ReplayOptions opts;
    opts.jobs = a.jobs;
    opts.keep_engines = !a.snapshot_dir.empty();
    const ReplayReport report = replay(events, cfg, opts);

    std::ostringstream days;
    write_day_report(days, report);
    if (!a.quiet) out << days.str();
    const std::string summary = summary_json(report);
    if (!a.report.empty()) {
        write_file(a.report + ".days.csv", days.str());
        write_file(a.report + ".summary.json", summary);
        write_file(a.report + ".timing.json", timing_json(report));
    }
    if (!a.snapshot_dir.empty()) {
        fs::create_directories(a.snapshot_dir);
        for (const auto& user : report.users) {
            save_snapshot(fs::path(a.snapshot_dir) / (user.user_id + ".snap"), user.engine.store(),
                          user.engine.registry());
        }
    }
    if (!a.quiet) out << "overall_hit_ratio," << format_real(report.overall_hit_ratio) << '\n';
    return kOk;
}

struct PredictArgs {
    std::string snapshot;
    std::string config;
    std::string time;
    double lat = 0.0;
    double lon = 0.0;
    std::string recent;
};

int cmd_predict(const PredictArgs& a, std::ostream& out) {
    const EngineConfig cfg = load_config(a.config);
    Snapshot snap = load_snapshot(a.snapshot);
    RawContext ctx{parse_local_time(a.time), a.lat, a.lon};
    ctx.validate();

    IntentSequence recent;
    // Labels the snapshot never saw get fresh ids, which match nothing stored.
    IntentRegistry lookup = snap.registry;
    for (const auto& label : split_list(a.recent)) recent.items.push_back(lookup.intern(label));
    recent.window_minutes = cfg.window_minutes;

    const Engine engine(cfg, std::move(snap.store), std::move(snap.registry));
    const PredictionResult result = engine.predict(ctx, recent);
    if (result.empty()) {
        out << "no prediction\n";
        return kOk;
    }
    out << "rank,intent,node_id,spatial_score,seq_similarity,distance\n";
    std::size_t rank = 1;
    for (const auto& r : result.ranked) {
        out << rank++ << ',' << engine.registry().label(r.intent) << ',' << r.node_id << ','
            << format_real(r.spatial_score) << ',' << format_real(r.seq_similarity) << ',' << format_real(r.distance)
            << '\n';
    }
    return kOk;
}

int cmd_generate(const std::string& name, std::uint64_t seed, const std::string& path, std::ostream& out) {
    Scenario sc;
    try {
        sc = scenario(name, seed);
    } catch (const ValidationError& e) {
        throw UsageError(e.what());
    }
    const auto events = generate(sc.spec, sc.drifts);
    std::ostringstream text;
    write_event_log(text, events);
    if (path.empty()) {
        out << text.str();
    } else {
        write_file(path, text.str());
    }
    return kOk;
}

int cmd_sweep(const std::string& log, const std::string& config, const std::string& param, const std::string& values,
              const std::string& path, std::size_t jobs, std::ostream& out) {
    SweepParameter parameter;
    std::vector<double> grid;
    try {
        parameter = parse_sweep_parameter(param);
        grid = parse_values(values);
    } catch (const ValidationError& e) {
        throw UsageError(e.what());
    }
    const EngineConfig cfg = load_config(config);
    const auto events = read_event_log_file(log);
    ReplayOptions opts;
    opts.jobs = jobs;
    const auto points = sweep(events, cfg, parameter, grid, opts);
    std::ostringstream text;
    text << sweep_parameter_name(parameter) << ",overall_hit_ratio\n";
    for (const auto& p : points) text << format_real(p.value) << ',' << format_real(p.overall_hit_ratio) << '\n';
    if (path.empty()) {
        out << text.str();
    } else {
        write_file(path, text.str());
    }
    return kOk;
}

int cmd_snapshot_info(const std::string& path, bool list_nodes, std::ostream& out) {
    const Snapshot snap = load_snapshot(path);
    const NodeStore& store = snap.store;
    EngineConfig cfg;
    cfg.embedding = store.embedding_config();
    cfg.store = store.config();
    out << "version = " << kSnapshotVersion << '\n';
    out << "current_day = " << store.current_day() << '\n';
    out << "next_id = " << store.next_id() << '\n';
    out << "nodes = " << store.size() << '\n';
    out << "intents = " << snap.registry.size() << '\n';
    std::ostringstream conf;
    write_config(conf, cfg);
    // Only the persisted sections are meaningful here.
    std::istringstream lines(conf.str());
    for (std::string line; std::getline(lines, line);) {
        const std::string key = line.substr(0, line.find(' '));
        static const char* persisted[] = {"geo_scale",     "time_weight",          "week_weight", "dims",
                                          "decay_k",       "decay_period",         "prune_threshold",
                                          "fusion_radius", "store_neighbor_count", "sequence_capacity",
                                          "drift_enabled", "rebuild_fraction"};
        if (std::find(std::begin(persisted), std::end(persisted), key) != std::end(persisted)) out << line << '\n';
    }
    if (list_nodes) {
        out << "node_id,intent,weight,last_touch_day,minute_of_day,minute_of_week,lat,lon,sequences\n";
        for (const auto& [id, n] : store.nodes()) {
            out << id << ',' << snap.registry.label(n.intent) << ',' << format_real(n.weight) << ','
                << n.last_touch_day << ',' << format_real(n.raw_minutes_of_day) << ','
                << format_real(n.raw_minutes_of_week) << ',' << format_real(n.raw_lat) << ','
                << format_real(n.raw_lon) << ',' << n.sequences.size() << '\n';
        }
    }
    return kOk;
}

}  // namespace

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> values;
    auto number = [](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() || !std::isfinite(v)) throw ValidationError("bad number '" + s + "'");
        return v;
    };
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw ValidationError("range must be start:stop:step");
        const double start = number(parts[0]);
        const double stop = number(parts[1]);
        const double step = number(parts[2]);
        if (step <= 0.0 || stop < start) throw ValidationError("range needs step > 0 and stop >= start");
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i) {
            // Round away accumulated binary error so 0.4 + 2*0.1 prints and compares as 0.6.
            values.push_back(std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9);
        }
    } else {
        for (const auto& item : split_list(text)) values.push_back(number(item));
    }
    if (values.empty()) throw ValidationError("no values given");
    return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Context- and sequence-aware intent prediction: replay, predict, generate, sweep"};
    app.require_subcommand(1);

    ReplayArgs replay_args;
    auto* replay_cmd = app.add_subcommand("replay", "Prequential replay of an event log");
    replay_cmd->add_option("log", replay_args.log, "Event log CSV")->required();
    replay_cmd->add_option("--config", replay_args.config, "Engine config file");
    replay_cmd->add_option("--report", replay_args.report, "Output prefix for .days.csv/.summary.json/.timing.json");
    replay_cmd->add_option("--jobs", replay_args.jobs, "Users replayed in parallel")->check(CLI::PositiveNumber);
    replay_cmd->add_option("--snapshot-dir", replay_args.snapshot_dir, "Write <user>.snap per user here");
    replay_cmd->add_flag("--quiet", replay_args.quiet, "Do not echo the day series");

    PredictArgs predict_args;
    auto* predict_cmd = app.add_subcommand("predict", "Rank intents for one context against a snapshot");
    predict_cmd->add_option("snapshot", predict_args.snapshot, "Snapshot file")->required();
    predict_cmd->add_option("--config", predict_args.config, "Predictor settings (store settings come from the snapshot)");
    predict_cmd->add_option("--time", predict_args.time, "Local time YYYY-MM-DDTHH:MM")->required();
    predict_cmd->add_option("--lat", predict_args.lat, "Latitude")->required();
    predict_cmd->add_option("--lon", predict_args.lon, "Longitude")->required();
    predict_cmd->add_option("--recent", predict_args.recent, "Preceding intents, most recent first, comma separated");

    std::string gen_name;
    std::string gen_out;
    std::uint64_t seed = 42;
    auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic scenario as an event log");
    gen_cmd->add_option("scenario", gen_name, "Scenario name")->required();
    gen_cmd->add_option("--seed", seed, "RNG seed");
    gen_cmd->add_option("--out", gen_out, "Output path (stdout if omitted)");

    std::string sweep_log;
    std::string sweep_config;
    std::string sweep_param;
    std::string sweep_values;
    std::string sweep_out;
    std::size_t sweep_jobs = 1;
    auto* sweep_cmd = app.add_subcommand("sweep", "Replay once per parameter value");
    sweep_cmd->add_option("log", sweep_log, "Event log CSV")->required();
    sweep_cmd->add_option("--config", sweep_config, "Base engine config");
    sweep_cmd->add_option("--param", sweep_param, "decay_k or cutoff_c")->required();
    sweep_cmd->add_option("--values", sweep_values, "a,b,c or start:stop:step")->required();
    sweep_cmd->add_option("--out", sweep_out, "Output path (stdout if omitted)");
    sweep_cmd->add_option("--jobs", sweep_jobs, "Users replayed in parallel")->check(CLI::PositiveNumber);

    std::string info_path;
    bool info_nodes = false;
    auto* info_cmd = app.add_subcommand("snapshot-info", "Describe a snapshot");
    info_cmd->add_option("snapshot", info_path, "Snapshot file")->required();
    info_cmd->add_flag("--nodes", info_nodes, "List every node");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*replay_cmd) return cmd_replay(replay_args, out, err);
        if (*predict_cmd) return cmd_predict(predict_args, out);
        if (*gen_cmd) return cmd_generate(gen_name, seed, gen_out, out);
        if (*sweep_cmd) return cmd_sweep(sweep_log, sweep_config, sweep_param, sweep_values, sweep_out, sweep_jobs, out);
        if (*info_cmd) return cmd_snapshot_info(info_path, info_nodes, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        err << "parse error:\n" << e.what() << '\n';
        return kDataError;
    } catch (const SnapshotError& e) {
        err << "snapshot error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
    return kUsage;
}

}  // namespace intentlab::cli
