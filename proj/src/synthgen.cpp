#include "intentlab/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "intentlab/error.hpp"

namespace intentlab {

namespace {

/// Portable draws on top of mt19937_64 (whose output sequence is fixed by
/// the standard, unlike std::*_distribution).
class Random {
public:
    explicit Random(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double truncated_normal(double sd) {
        if (sd <= 0.0) return 0.0;
        double z = normal();
        while (std::abs(z) > 3.0) z = normal();
        return z * sd;
    }

    std::size_t index(std::size_t n) { return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n))); }

private:
    std::mt19937_64 engine_;
};

struct Pending {
    LocalTime time;
    std::size_t order;
    std::string intent;
    GeoPoint location;
};

const GeoPoint kHome{12.970, 77.692};
const GeoPoint kTransit{13.020, 77.650};
const GeoPoint kOffice{13.070, 77.610};
const GeoPoint kCafe{13.040, 77.720};
const GeoPoint kGym{12.920, 77.640};
const GeoPoint kNewHome{12.880, 77.560};
const GeoPoint kNewOffice{12.840, 77.660};

void append(std::vector<RoutineSlot>& slots, std::vector<RoutineSlot> more) {
    slots.insert(slots.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

RoutineSpec base_spec(std::uint64_t seed) {
    RoutineSpec spec;
    spec.seed = seed;
    spec.start = make_local_time(2021, 3, 1, 0, 0);  // a Monday
    spec.noise.center = kHome;
    return spec;
}

/// Six activities spread over the day, consecutive ones at different places.
std::vector<RoutineSlot> weekday_routine(double jitter) {
    std::vector<RoutineSlot> slots;
    append(slots, daily_slots("Check Mail", 6 * 60 + 30, jitter, kHome));
    append(slots, daily_slots("Commutes to Office", 9 * 60 + 30, jitter, kTransit));
    append(slots, daily_slots("Call Contact", 12 * 60 + 30, jitter, kOffice));
    append(slots, daily_slots("Read News", 15 * 60 + 30, jitter, kCafe));
    append(slots, daily_slots("Social Connect", 18 * 60 + 30, jitter, kGym));
    append(slots, daily_slots("Listen Music", 21 * 60 + 30, jitter, kHome));
    return slots;
}

Scenario steady(std::uint64_t seed) {
    Scenario s{base_spec(seed), {}};
    s.spec.duration_days = 21;
    s.spec.slots = weekday_routine(0.0);
    return s;
}

Scenario gradual_drift(std::uint64_t seed) {
    Scenario s{base_spec(seed), {}};
    s.spec.duration_days = 42;
    constexpr double kJitter = 10.0;
    constexpr int kNewsDropped = 21;
    auto& slots = s.spec.slots;
    append(slots, daily_slots("Check Mail", 6 * 60 + 30, kJitter, kHome));
    append(slots, daily_slots("Commutes to Office", 8 * 60, kJitter, kTransit));
    // Same place, later in the morning: the commute drifts towards it, and
    // it is dropped before the commute arrives, leaving stale nodes behind.
    std::vector<RoutineSlot> news = daily_slots("Read News", 9 * 60 + 50, kJitter, kTransit);
    for (auto& slot : news) slot.active_until_day = kNewsDropped;
    append(slots, std::move(news));
    append(slots, daily_slots("Call Contact", 12 * 60 + 30, kJitter, kOffice));
    append(slots, daily_slots("Social Connect", 18 * 60 + 30, kJitter, kGym));
    append(slots, daily_slots("Listen Music", 21 * 60 + 30, kJitter, kHome));
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].intent == "Commutes to Office") {
            s.drifts.push_back({.kind = DriftSpec::Kind::Gradual, .target_slot = i, .shift_minutes_per_day = 5.0,
                                .start_day = 3});
        }
    }
    return s;
}

Scenario sudden_shift(std::uint64_t seed) {
    Scenario s{base_spec(seed), {}};
    s.spec.duration_days = 49;
    constexpr int kShiftDay = 21;
    s.spec.slots = weekday_routine(10.0);
    for (std::size_t i = 0; i < s.spec.slots.size(); ++i) {
        auto& slot = s.spec.slots[i];
        DriftSpec d{.kind = DriftSpec::Kind::Sudden, .target_slot = i, .shift_day = kShiftDay};
        if (slot.location == kHome) d.new_location = kNewHome;
        if (slot.location == kOffice) d.new_location = kNewOffice;
        if (slot.intent == "Commutes to Office") d.new_time_of_week = slot.mean_time_of_week + 60;
        if (slot.intent == "Read News") d.new_intent = "Social Connect";
        if (slot.intent == "Social Connect") d.new_intent = "Read News";
        s.drifts.push_back(d);
    }
    return s;
}

Scenario branching_sequence(std::uint64_t seed) {
    Scenario s{base_spec(seed), {}};
    s.spec.duration_days = 56;
    constexpr double kJitter = 3.0;
    auto& slots = s.spec.slots;
    append(slots, daily_slots("Check Mail", 7 * 60, kJitter, kHome));
    std::vector<RoutineSlot> first = daily_slots("", 7 * 60 + 25, kJitter, kHome);
    std::vector<RoutineSlot> second = daily_slots("", 8 * 60 + 35, kJitter, kTransit);
    for (auto& slot : first) {
        slot.branch_group = 0;
        slot.alternatives = {"Read News", "Call Contact"};
        slot.intent = slot.alternatives.front();
    }
    for (auto& slot : second) {
        slot.branch_group = 0;
        slot.alternatives = {"Listen Music", "Read News"};
        slot.intent = slot.alternatives.front();
    }
    append(slots, std::move(first));
    append(slots, daily_slots("Commutes to Office", 8 * 60, kJitter, kTransit));
    append(slots, std::move(second));
    append(slots, daily_slots("Social Connect", 13 * 60, kJitter, kOffice));
    append(slots, daily_slots("Listen Music", 20 * 60, kJitter, kHome));
    return s;
}

void add_noise(Scenario& s) {
    s.spec.noise.events_per_day = 1.0;
    s.spec.noise.intents = {"Play Game", "Book Cab", "Order Food", "Shop Online", "Watch Video", "Pay Bill"};
    s.spec.noise.center = kHome;
    s.spec.noise.spread_deg = 0.15;
}

}  // namespace

std::vector<RoutineSlot> daily_slots(const std::string& intent, int minute_of_day, double jitter_sd,
                                     GeoPoint location, double occurrence_prob) {
    std::vector<RoutineSlot> out;
    for (int weekday = 0; weekday < 7; ++weekday) {
        RoutineSlot slot;
        slot.intent = intent;
        slot.mean_time_of_week = weekday * kMinutesPerDay + minute_of_day;
        slot.time_jitter_sd = jitter_sd;
        slot.location = location;
        slot.occurrence_prob = occurrence_prob;
        out.push_back(std::move(slot));
    }
    return out;
}

void validate(const RoutineSpec& spec, const std::vector<DriftSpec>& drifts) {
    if (spec.duration_days <= 0) throw ValidationError("duration_days must be > 0");
    if (spec.user_id.empty()) throw ValidationError("user_id must not be empty");
    if (minute_of_day(spec.start) != 0) throw ValidationError("stream must start at local midnight");
    std::map<int, std::size_t> branch_sizes;
    for (const auto& slot : spec.slots) {
        if (slot.mean_time_of_week < 0 || slot.mean_time_of_week >= kMinutesPerWeek) {
            throw ValidationError("slot time outside [0, 10080)");
        }
        if (!(slot.occurrence_prob >= 0.0 && slot.occurrence_prob <= 1.0)) {
            throw ValidationError("occurrence_prob outside [0, 1]");
        }
        if (!(slot.time_jitter_sd >= 0.0)) throw ValidationError("time_jitter_sd must be >= 0");
        RawContext{LocalTime{}, slot.location.lat, slot.location.lon}.validate();
        if (slot.branch_group >= 0) {
            if (slot.alternatives.empty()) throw ValidationError("branching slot without alternatives");
            auto [it, fresh] = branch_sizes.emplace(slot.branch_group, slot.alternatives.size());
            if (!fresh && it->second != slot.alternatives.size()) {
                throw ValidationError("slots of one branch group disagree on alternative count");
            }
            for (const auto& a : slot.alternatives) {
                if (a.empty()) throw ValidationError("empty alternative intent");
            }
        } else if (slot.intent.empty()) {
            throw ValidationError("slot intent must not be empty");
        }
    }
    if (spec.noise.events_per_day < 0.0) throw ValidationError("noise rate must be >= 0");
    if (spec.noise.events_per_day > 0.0) {
        if (spec.noise.intents.empty()) throw ValidationError("noise needs an intent vocabulary");
        if (spec.noise.earliest_minute < 0 || spec.noise.latest_minute > kMinutesPerDay ||
            spec.noise.earliest_minute >= spec.noise.latest_minute) {
            throw ValidationError("noise minute range invalid");
        }
    }
    for (const auto& d : drifts) {
        if (d.target_slot >= spec.slots.size()) throw ValidationError("drift targets a missing slot");
        const auto& slot = spec.slots[d.target_slot];
        if (d.kind == DriftSpec::Kind::Gradual) {
            const double span = std::max(0, spec.duration_days - d.start_day);
            const double end = slot.mean_time_of_week + d.shift_minutes_per_day * span;
            if (end < 0.0 || end >= kMinutesPerWeek) throw ValidationError("gradual drift leaves the week");
        } else {
            if (d.new_time_of_week && (*d.new_time_of_week < 0 || *d.new_time_of_week >= kMinutesPerWeek)) {
                throw ValidationError("sudden drift time outside [0, 10080)");
            }
            if (d.new_location) RawContext{LocalTime{}, d.new_location->lat, d.new_location->lon}.validate();
            if (d.new_intent && d.new_intent->empty()) throw ValidationError("sudden drift to empty intent");
        }
    }
}

std::vector<ContextEvent> generate(const RoutineSpec& spec, const std::vector<DriftSpec>& drifts) {
    validate(spec, drifts);
    Random rng(spec.seed);

    std::map<std::size_t, std::vector<const DriftSpec*>> drifts_by_slot;
    for (const auto& d : drifts) drifts_by_slot[d.target_slot].push_back(&d);

    std::set<int> groups;
    for (const auto& slot : spec.slots) {
        if (slot.branch_group >= 0) groups.insert(slot.branch_group);
    }
    std::map<int, std::size_t> group_size;
    for (const auto& slot : spec.slots) {
        if (slot.branch_group >= 0) group_size[slot.branch_group] = slot.alternatives.size();
    }

    const int start_weekday = minute_of_week(spec.start) / kMinutesPerDay;
    std::vector<Pending> pending;
    std::size_t order = 0;

    for (int day = 0; day < spec.duration_days; ++day) {
        const int weekday = (start_weekday + day) % 7;
        const LocalTime midnight = spec.start + static_cast<std::int64_t>(day) * kMinutesPerDay;

        std::map<int, std::size_t> branch;
        for (const int g : groups) branch[g] = rng.index(group_size[g]);

        for (std::size_t i = 0; i < spec.slots.size(); ++i) {
            const RoutineSlot& slot = spec.slots[i];
            if (slot.mean_time_of_week / kMinutesPerDay != weekday) continue;
            if (day < slot.active_from_day || (slot.active_until_day && day >= *slot.active_until_day)) continue;

            double mean = slot.mean_time_of_week;
            GeoPoint location = slot.location;
            std::string intent = slot.branch_group >= 0 ? slot.alternatives[branch[slot.branch_group]] : slot.intent;
            if (auto it = drifts_by_slot.find(i); it != drifts_by_slot.end()) {
                for (const DriftSpec* d : it->second) {
                    if (d->kind == DriftSpec::Kind::Gradual) {
                        mean += d->shift_minutes_per_day * std::max(0, day - d->start_day);
                    } else if (day >= d->shift_day) {
                        if (d->new_time_of_week) mean = *d->new_time_of_week;
                        if (d->new_location) location = *d->new_location;
                        if (d->new_intent) intent = *d->new_intent;
                    }
                }
            }

            // Both draws are always taken so one slot's outcome never shifts another's randomness.
            const double occurs = rng.uniform();
            const double jitter = rng.truncated_normal(slot.time_jitter_sd);
            if (occurs >= slot.occurrence_prob) continue;

            const double offset_in_day = mean - static_cast<double>(weekday) * kMinutesPerDay + jitter;
            const auto minute = static_cast<std::int64_t>(std::llround(offset_in_day));
            pending.push_back({midnight + minute, order++, std::move(intent), location});
        }

        if (spec.noise.events_per_day > 0.0) {
            const double rate = spec.noise.events_per_day;
            auto count = static_cast<int>(std::floor(rate));
            if (rng.uniform() < rate - std::floor(rate)) ++count;
            for (int k = 0; k < count; ++k) {
                const int span = spec.noise.latest_minute - spec.noise.earliest_minute;
                const int minute = spec.noise.earliest_minute + static_cast<int>(rng.index(static_cast<std::size_t>(span)));
                const double lat = spec.noise.center.lat + (rng.uniform() * 2.0 - 1.0) * spec.noise.spread_deg;
                const double lon = spec.noise.center.lon + (rng.uniform() * 2.0 - 1.0) * spec.noise.spread_deg;
                const auto& intent = spec.noise.intents[rng.index(spec.noise.intents.size())];
                pending.push_back({midnight + minute, order++, intent,
                                   GeoPoint{std::clamp(lat, -90.0, 90.0), std::clamp(lon, -180.0, 180.0)}});
            }
        }
    }

    std::sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
        return a.time != b.time ? a.time < b.time : a.order < b.order;
    });
    std::vector<ContextEvent> events;
    events.reserve(pending.size());
    for (auto& p : pending) {
        LocalTime t = p.time;
        if (!events.empty() && t <= events.back().time) t = events.back().time + 1;
        events.push_back({spec.user_id, std::move(p.intent), t, p.location.lat, p.location.lon});
    }
    return events;
}

Scenario scenario(std::string_view name, std::uint64_t seed) {
    std::string_view base = name;
    bool noise = false;
    constexpr std::string_view kOverlay = "+one_off_noise";
    if (base.size() > kOverlay.size() && base.substr(base.size() - kOverlay.size()) == kOverlay) {
        base.remove_suffix(kOverlay.size());
        noise = true;
    }
    Scenario s;
    if (base == "steady") {
        s = steady(seed);
    } else if (base == "gradual_drift") {
        s = gradual_drift(seed);
    } else if (base == "sudden_shift") {
        s = sudden_shift(seed);
    } else if (base == "branching_sequence") {
        s = branching_sequence(seed);
    } else if (base == "one_off_noise") {
        s = steady(seed);
        noise = true;
    } else {
        throw ValidationError("unknown scenario '" + std::string(name) + "'");
    }
    if (noise) add_noise(s);
    return s;
}

std::vector<std::string> scenario_names() {
    return {"steady", "gradual_drift", "sudden_shift", "branching_sequence", "one_off_noise"};
}

}  // namespace intentlab
