#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "intentlab/engine.hpp"

namespace intentlab {

/// One timestamped, geo-tagged, intent-labelled user action.
struct ContextEvent {
    std::string user_id;
    std::string intent;
    LocalTime time;
    double latitude = 0.0;
    double longitude = 0.0;

    RawContext context() const { return {time, latitude, longitude}; }

    friend bool operator==(const ContextEvent&, const ContextEvent&) = default;
};

struct DayRecord {
    /// Days since the first event of the stream (per user).
    std::int64_t day = 0;
    std::size_t instances = 0;
    std::size_t hits = 0;
    double ratio = 0.0;
    /// Live nodes after the day's last observation.
    std::size_t live_nodes = 0;
};

/// Top-N lists and ground truth for one user's replay instances.
struct UserInstances {
    std::vector<std::vector<IntentId>> recommendations;
    std::vector<IntentId> truths;
};

/// Precision@N as literally defined for the Foursquare comparison: per
/// instance |R_N ∩ R*| / |R*| with R* the instance's ground truth, averaged
/// per user, then over users. Users without instances are skipped.
/// Throws RangeError when n < 1.
double precision_at_n(std::span<const UserInstances> users, std::size_t n);

/// Conventional top-N precision |R_N ∩ R*| / N, same averaging. Not the
/// literal definition above; reported alongside it for comparison with other work.
double conventional_precision_at_n(std::span<const UserInstances> users, std::size_t n);

struct UserReplay {
    std::string user_id;
    std::vector<DayRecord> days;
    std::size_t instances = 0;
    std::size_t hits = 0;
    double overall_hit_ratio = 0.0;
    UserInstances instances_detail;
    double total_predict_micros = 0.0;
    Engine engine;
};

struct ReplayOptions {
    std::size_t jobs = 1;
    std::vector<std::size_t> precision_ns{1, 5, 10};
    /// Keep each user's trained engine in the report (for snapshots).
    bool keep_engines = false;
};

struct ReplayReport {
    /// Days aggregated over users: instance and hit counts are summed, ratio
    /// is the mean of per-user ratios, live_nodes is summed.
    std::vector<DayRecord> per_day;
    std::size_t instances = 0;
    std::size_t hits = 0;
    /// Mean of per-user overall ratios (hits / instances for a single user).
    double overall_hit_ratio = 0.0;
    std::map<std::size_t, double> precision_at;
    std::map<std::size_t, double> conventional_precision_at;
    double avg_predict_micros = 0.0;
    std::vector<UserReplay> users;
};

/// Prequential replay of one user's stream: predict, score top-1, then
/// observe. Throws ValidationError when events go back in time.
UserReplay replay_user(std::span<const ContextEvent> events, const EngineConfig& config);

/// Splits `events` by user (sorted by user id), replays each user on an
/// isolated engine, possibly in parallel, and aggregates.
ReplayReport replay(std::span<const ContextEvent> events, const EngineConfig& config,
                    const ReplayOptions& options = {});

enum class SweepParameter { DecayK, CutoffC };

struct SweepPoint {
    double value = 0.0;
    double overall_hit_ratio = 0.0;
};

/// One replay per value with everything else held fixed.
std::vector<SweepPoint> sweep(std::span<const ContextEvent> events, const EngineConfig& base,
                              SweepParameter parameter, std::span<const double> values,
                              const ReplayOptions& options = {});

/// Throws ValidationError for anything but "decay_k" / "cutoff_c".
SweepParameter parse_sweep_parameter(const std::string& name);
const char* sweep_parameter_name(SweepParameter parameter);

}  // namespace intentlab
