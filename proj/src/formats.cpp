#include "intentlab/formats.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "intentlab/error.hpp"

namespace intentlab {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t begin = 0;
    while (true) {
        const auto comma = line.find(',', begin);
        fields.push_back(trim(std::string_view(line).substr(begin, comma == std::string::npos ? std::string::npos
                                                                                              : comma - begin)));
        if (comma == std::string::npos) break;
        begin = comma + 1;
    }
    return fields;
}

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = first + text.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && std::isfinite(out);
}

template <typename Int>
bool parse_int(const std::string& text, Int& out) {
    if (text.empty()) return false;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

bool parse_bool(const std::string& text, bool& out) {
    if (text == "true" || text == "1" || text == "yes") {
        out = true;
        return true;
    }
    if (text == "false" || text == "0" || text == "no") {
        out = false;
        return true;
    }
    return false;
}

std::string render_double(double v) {
    // Shortest representation that round-trips.
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

using Setter = std::function<bool(EngineConfig&, const std::string&)>;

struct Key {
    const char* name;
    Setter set;
    std::function<std::string(const EngineConfig&)> get;
};

template <typename Field>
Key real_key(const char* name, Field field) {
    return {name, [field](EngineConfig& c, const std::string& v) { return parse_double(v, field(c)); },
            [field](const EngineConfig& c) { return render_double(field(const_cast<EngineConfig&>(c))); }};
}

template <typename Field>
Key count_key(const char* name, Field field) {
    return {name,
            [field](EngineConfig& c, const std::string& v) {
                std::size_t parsed = 0;
                if (!parse_int(v, parsed)) return false;
                field(c) = parsed;
                return true;
            },
            [field](const EngineConfig& c) { return std::to_string(field(const_cast<EngineConfig&>(c))); }};
}

template <typename Field>
Key bool_key(const char* name, Field field) {
    return {name, [field](EngineConfig& c, const std::string& v) { return parse_bool(v, field(c)); },
            [field](const EngineConfig& c) { return std::string(field(const_cast<EngineConfig&>(c)) ? "true" : "false"); }};
}

const std::vector<Key>& config_keys() {
    static const std::vector<Key> keys = {
        real_key("geo_scale", [](EngineConfig& c) -> double& { return c.embedding.geo_scale; }),
        real_key("time_weight", [](EngineConfig& c) -> double& { return c.embedding.time_weight; }),
        real_key("week_weight", [](EngineConfig& c) -> double& { return c.embedding.week_weight; }),
        count_key("dims", [](EngineConfig& c) -> std::size_t& { return c.embedding.dims; }),
        real_key("decay_k", [](EngineConfig& c) -> double& { return c.store.decay_k; }),
        {"decay_period",
         [](EngineConfig& c, const std::string& v) {
             if (v == "daily") c.store.decay_period = DecayPeriod::Daily;
             else if (v == "weekly") c.store.decay_period = DecayPeriod::Weekly;
             else return false;
             return true;
         },
         [](const EngineConfig& c) {
             return std::string(c.store.decay_period == DecayPeriod::Daily ? "daily" : "weekly");
         }},
        real_key("prune_threshold", [](EngineConfig& c) -> double& { return c.store.prune_threshold; }),
        real_key("fusion_radius", [](EngineConfig& c) -> double& { return c.store.fusion_radius; }),
        count_key("store_neighbor_count", [](EngineConfig& c) -> std::size_t& { return c.store.neighbor_count; }),
        count_key("sequence_capacity", [](EngineConfig& c) -> std::size_t& { return c.store.sequence_capacity; }),
        bool_key("drift_enabled", [](EngineConfig& c) -> bool& { return c.store.drift_enabled; }),
        real_key("rebuild_fraction", [](EngineConfig& c) -> double& { return c.store.rebuild_fraction; }),
        count_key("neighbor_count", [](EngineConfig& c) -> std::size_t& { return c.predictor.neighbor_count; }),
        real_key("score_cutoff", [](EngineConfig& c) -> double& { return c.predictor.score_cutoff; }),
        real_key("distance_epsilon", [](EngineConfig& c) -> double& { return c.predictor.distance_epsilon; }),
        count_key("top_n_output", [](EngineConfig& c) -> std::size_t& { return c.predictor.top_n_output; }),
        bool_key("use_sequence", [](EngineConfig& c) -> bool& { return c.predictor.use_sequence; }),
        bool_key("age_weights", [](EngineConfig& c) -> bool& { return c.predictor.age_weights; }),
        real_key("prefix_scale", [](EngineConfig& c) -> double& { return c.predictor.prefix_scale; }),
        count_key("prefix_cap", [](EngineConfig& c) -> std::size_t& { return c.predictor.prefix_cap; }),
        {"window_minutes",
         [](EngineConfig& c, const std::string& v) { return parse_int(v, c.window_minutes) && c.window_minutes >= 0; },
         [](const EngineConfig& c) { return std::to_string(c.window_minutes); }},
    };
    return keys;
}

}  // namespace

std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

std::vector<ContextEvent> read_event_log(std::istream& in, std::vector<std::string>* warnings) {
    std::vector<ParseError::Issue> issues;
    std::vector<ContextEvent> events;
    std::string line;
    std::size_t line_no = 0;

    std::map<std::string, std::size_t> column;
    std::size_t width = 0;
    bool have_header = false;
    std::map<std::string, LocalTime> last_time;

    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;
        const auto fields = split_csv(line);
        if (!have_header) {
            have_header = true;
            width = fields.size();
            for (std::size_t i = 0; i < fields.size(); ++i) column.emplace(fields[i], i);
            for (const char* required : {"user_id", "intent", "timestamp", "lat", "lon"}) {
                if (column.count(required) == 0) {
                    issues.push_back({line_no, std::string("missing required column '") + required + "'"});
                }
            }
            if (!issues.empty()) throw ParseError(std::move(issues));
            for (const auto& [name, idx] : column) {
                if (name != "user_id" && name != "intent" && name != "timestamp" && name != "lat" && name != "lon" &&
                    warnings != nullptr) {
                    warnings->push_back("ignoring unknown column '" + name + "'");
                }
            }
            continue;
        }
        if (fields.size() != width) {
            issues.push_back({line_no, "expected " + std::to_string(width) + " fields, found " +
                                           std::to_string(fields.size())});
            continue;
        }
        ContextEvent ev;
        ev.user_id = fields[column["user_id"]];
        ev.intent = fields[column["intent"]];
        if (ev.user_id.empty() || ev.intent.empty()) {
            issues.push_back({line_no, "user_id and intent must be non-empty"});
            continue;
        }
        try {
            ev.time = parse_local_time(fields[column["timestamp"]]);
        } catch (const Error& e) {
            issues.push_back({line_no, e.what()});
            continue;
        }
        if (!parse_double(fields[column["lat"]], ev.latitude) || !parse_double(fields[column["lon"]], ev.longitude)) {
            issues.push_back({line_no, "lat/lon must be finite numbers"});
            continue;
        }
        try {
            ev.context().validate();
        } catch (const Error& e) {
            issues.push_back({line_no, e.what()});
            continue;
        }
        auto [it, fresh] = last_time.emplace(ev.user_id, ev.time);
        if (!fresh) {
            if (ev.time < it->second) {
                issues.push_back({line_no, "timestamp goes backwards for user '" + ev.user_id + "'"});
                continue;
            }
            it->second = ev.time;
        }
        events.push_back(std::move(ev));
    }
    if (!have_header) {
        // An empty file is an empty log.
        return events;
    }
    if (!issues.empty()) throw ParseError(std::move(issues));
    return events;
}

std::vector<ContextEvent> read_event_log_file(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open event log " + path);
    return read_event_log(in, warnings);
}

void write_event_log(std::ostream& out, std::span<const ContextEvent> events) {
    out << kEventLogHeader << '\n';
    char coords[96];
    for (const auto& ev : events) {
        if (ev.intent.find(',') != std::string::npos || ev.user_id.find(',') != std::string::npos) {
            throw ValidationError("labels containing ',' cannot be written to the event log");
        }
        std::snprintf(coords, sizeof coords, "%.6f,%.6f", ev.latitude, ev.longitude);
        out << ev.user_id << ',' << ev.intent << ',' << format_local_time(ev.time) << ',' << coords << '\n';
    }
}

EngineConfig read_config(std::istream& in) {
    EngineConfig cfg;
    std::vector<ParseError::Issue> issues;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back({line_no, "expected key = value"});
            continue;
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const auto& keys = config_keys();
        const auto it = std::find_if(keys.begin(), keys.end(), [&](const Key& k) { return key == k.name; });
        if (it == keys.end()) {
            issues.push_back({line_no, "unknown config key '" + key + "'"});
            continue;
        }
        if (!it->set(cfg, value)) issues.push_back({line_no, "bad value '" + value + "' for " + key});
    }
    if (!issues.empty()) throw ParseError(std::move(issues));
    try {
        cfg.validate();
    } catch (const Error& e) {
        throw ParseError(line_no, std::string("invalid configuration: ") + e.what());
    }
    return cfg;
}

EngineConfig read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config " + path);
    return read_config(in);
}

void write_config(std::ostream& out, const EngineConfig& config) {
    for (const auto& key : config_keys()) out << key.name << " = " << key.get(config) << '\n';
}

void write_day_report(std::ostream& out, const ReplayReport& report) {
    out << "day,instances,hits,ratio,live_nodes\n";
    for (const auto& d : report.per_day) {
        out << d.day << ',' << d.instances << ',' << d.hits << ',' << format_real(d.ratio) << ',' << d.live_nodes
            << '\n';
    }
}

std::string summary_json(const ReplayReport& report) {
    nlohmann::ordered_json j;
    j["instances"] = report.instances;
    j["hits"] = report.hits;
    j["overall_hit_ratio"] = report.overall_hit_ratio;
    j["days"] = report.per_day.size();
    auto& prec = j["precision_at"];
    prec = nlohmann::ordered_json::object();
    for (const auto& [n, v] : report.precision_at) prec[std::to_string(n)] = v;
    auto& conv = j["conventional_precision_at"];
    conv = nlohmann::ordered_json::object();
    for (const auto& [n, v] : report.conventional_precision_at) conv[std::to_string(n)] = v;
    j["final_live_nodes"] = report.per_day.empty() ? 0 : report.per_day.back().live_nodes;
    return j.dump(2) + "\n";
}

std::string timing_json(const ReplayReport& report) {
    nlohmann::ordered_json j;
    j["instances"] = report.instances;
    j["avg_predict_micros"] = report.avg_predict_micros;
    return j.dump(2) + "\n";
}

}  // namespace intentlab
