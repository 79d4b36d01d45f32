#include "intentlab/embedding.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "intentlab/error.hpp"

namespace intentlab {

namespace {

CyclicPair cyclic(double fraction) {
    const double angle = 2.0 * std::numbers::pi * fraction;
    return {std::sin(angle), std::cos(angle)};
}

void reproject_pair(ContextVector& v, const ContextVector& fallback, std::size_t s, std::size_t c,
                    double radius) {
    const double norm = std::hypot(v[s], v[c]);
    // Below this the direction is numerical noise; keep the old angle.
    constexpr double kCollapsed = 1e-12;
    if (norm < kCollapsed * radius) {
        const double fb = std::hypot(fallback[s], fallback[c]);
        v[s] = fallback[s] / fb * radius;
        v[c] = fallback[c] / fb * radius;
        return;
    }
    v[s] = v[s] / norm * radius;
    v[c] = v[c] / norm * radius;
}

}  // namespace

void RawContext::validate() const {
    if (!std::isfinite(latitude) || latitude < -90.0 || latitude > 90.0) {
        throw ValidationError("latitude " + std::to_string(latitude) + " outside [-90, 90]");
    }
    if (!std::isfinite(longitude) || longitude < -180.0 || longitude > 180.0) {
        throw ValidationError("longitude " + std::to_string(longitude) + " outside [-180, 180]");
    }
}

void EmbeddingConfig::validate() const {
    if (!(geo_scale > 0.0) || !std::isfinite(geo_scale)) throw ValidationError("geo_scale must be > 0");
    if (!(time_weight > 0.0) || !std::isfinite(time_weight)) throw ValidationError("time_weight must be > 0");
    if (!(week_weight > 0.0) || !std::isfinite(week_weight)) throw ValidationError("week_weight must be > 0");
    if (dims != kContextDims) {
        throw ValidationError("only the " + std::to_string(kContextDims) +
                              "-dimensional time+geo embedding is supported, got dims=" + std::to_string(dims));
    }
}

CyclicPair embed_time_of_day(int minutes_past_midnight) {
    if (minutes_past_midnight < 0 || minutes_past_midnight >= kMinutesPerDay) {
        throw RangeError("minute of day " + std::to_string(minutes_past_midnight) + " outside [0, 1440)");
    }
    return cyclic(static_cast<double>(minutes_past_midnight) / kMinutesPerDay);
}

CyclicPair embed_time_of_week(int minutes_past_sunday_midnight) {
    if (minutes_past_sunday_midnight < 0 || minutes_past_sunday_midnight >= kMinutesPerWeek) {
        throw RangeError("minute of week " + std::to_string(minutes_past_sunday_midnight) + " outside [0, 10080)");
    }
    return cyclic(static_cast<double>(minutes_past_sunday_midnight) / kMinutesPerWeek);
}

ContextVector embed(const RawContext& raw, const EmbeddingConfig& cfg) {
    raw.validate();
    cfg.validate();
    const CyclicPair day = embed_time_of_day(minute_of_day(raw.time));
    const CyclicPair week = embed_time_of_week(minute_of_week(raw.time));
    ContextVector v(cfg.dims);
    v[kDaySin] = cfg.time_weight * day.sin;
    v[kDayCos] = cfg.time_weight * day.cos;
    const double week_radius = cfg.time_weight * cfg.week_weight;
    v[kWeekSin] = week_radius * week.sin;
    v[kWeekCos] = week_radius * week.cos;
    v[kLatitude] = cfg.geo_scale * raw.latitude;
    v[kLongitude] = cfg.geo_scale * raw.longitude;
    return v;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionError("dimension mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        sum += diff * diff;
    }
    return sum;
}

double euclidean_distance(const ContextVector& a, const ContextVector& b) {
    return std::sqrt(squared_distance(a.coords(), b.coords()));
}

void reproject_cyclic(ContextVector& v, const ContextVector& fallback, const EmbeddingConfig& cfg) {
    if (v.size() < kContextDims || fallback.size() != v.size()) {
        throw DimensionError("re-projection needs matching vectors with the time+geo layout");
    }
    reproject_pair(v, fallback, kDaySin, kDayCos, cfg.time_weight);
    reproject_pair(v, fallback, kWeekSin, kWeekCos, cfg.time_weight * cfg.week_weight);
}

double cyclic_minutes(double sin_value, double cos_value, double period_minutes) {
    double angle = std::atan2(sin_value, cos_value);
    if (angle < 0.0) angle += 2.0 * std::numbers::pi;
    double minutes = angle / (2.0 * std::numbers::pi) * period_minutes;
    if (minutes >= period_minutes) minutes -= period_minutes;
    return minutes;
}

}  // namespace intentlab
