#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "intentlab/evaluation.hpp"

namespace intentlab {

struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// One weekly-recurring activity.
struct RoutineSlot {
    std::string intent;
    /// Minutes past Sunday 00:00.
    int mean_time_of_week = 0;
    double time_jitter_sd = 0.0;
    GeoPoint location;
    double occurrence_prob = 1.0;
    /// Slots sharing a branch group pick alternatives[b] with one uniform
    /// draw of b per day, so correlated A/B routines can be expressed.
    /// -1 means `intent` is always used.
    int branch_group = -1;
    std::vector<std::string> alternatives;
    /// Day offsets (from the stream start) bounding when the slot is active.
    int active_from_day = 0;
    std::optional<int> active_until_day;
};

/// Random one-off events at uniformly random daytime instants and places.
struct NoiseSpec {
    double events_per_day = 0.0;
    std::vector<std::string> intents;
    GeoPoint center;
    double spread_deg = 0.05;
    int earliest_minute = 7 * 60;
    int latest_minute = 23 * 60;
};

struct RoutineSpec {
    std::string user_id = "user1";
    std::vector<RoutineSlot> slots;
    int duration_days = 21;
    std::uint64_t seed = 42;
    /// Local midnight the stream starts on.
    LocalTime start = LocalTime{0};
    NoiseSpec noise;
};

struct DriftSpec {
    enum class Kind { Gradual, Sudden };

    Kind kind = Kind::Gradual;
    std::size_t target_slot = 0;
    /// Gradual: the slot moves by this many minutes per elapsed day from start_day.
    double shift_minutes_per_day = 0.0;
    int start_day = 0;
    /// Sudden: from shift_day on, any present field replaces the slot's own.
    int shift_day = 0;
    std::optional<int> new_time_of_week;
    std::optional<GeoPoint> new_location;
    std::optional<std::string> new_intent;
};

/// Throws ValidationError on an inconsistent spec.
void validate(const RoutineSpec& spec, const std::vector<DriftSpec>& drifts);

/// Deterministic for a fixed seed; events are strictly increasing in time.
///
/// Randomness: std::mt19937_64 seeded with `seed`; uniforms take the top 53
/// bits; normals use Box-Muller and are resampled outside ±3σ.
std::vector<ContextEvent> generate(const RoutineSpec& spec, const std::vector<DriftSpec>& drifts = {});

/// Seven slots, one per weekday, at the same clock time.
std::vector<RoutineSlot> daily_slots(const std::string& intent, int minute_of_day, double jitter_sd,
                                     GeoPoint location, double occurrence_prob = 1.0);

struct Scenario {
    RoutineSpec spec;
    std::vector<DriftSpec> drifts;
};

/// Canned scenarios: steady, gradual_drift, sudden_shift,
/// branching_sequence, one_off_noise. A base name may carry a
/// "+one_off_noise" overlay (e.g. "gradual_drift+one_off_noise").
/// Throws ValidationError for unknown names.
Scenario scenario(std::string_view name, std::uint64_t seed = 42);

std::vector<std::string> scenario_names();

}  // namespace intentlab
