#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "intentlab/local_time.hpp"

namespace intentlab {

/// Event context before embedding.
struct RawContext {
    LocalTime time;
    double latitude = 0.0;
    double longitude = 0.0;

    /// Throws ValidationError when coordinates are out of range or non-finite.
    void validate() const;
};

/// Layout of the default embedding. The two (sin, cos) pairs are cyclic
/// and are kept on circles (see EmbeddingConfig for the radii).
enum ContextAxis : std::size_t {
    kDaySin = 0,
    kDayCos = 1,
    kWeekSin = 2,
    kWeekCos = 3,
    kLatitude = 4,
    kLongitude = 5,
};

inline constexpr std::size_t kContextDims = 6;

/// A point in the embedding space.
class ContextVector {
public:
    ContextVector() = default;
    explicit ContextVector(std::size_t dims) : coords_(dims, 0.0) {}
    explicit ContextVector(std::vector<double> coords) : coords_(std::move(coords)) {}
    ContextVector(std::initializer_list<double> coords) : coords_(coords) {}

    std::size_t size() const noexcept { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    double& operator[](std::size_t i) { return coords_[i]; }

    std::span<const double> coords() const noexcept { return coords_; }
    std::span<double> coords() noexcept { return coords_; }

    friend bool operator==(const ContextVector&, const ContextVector&) = default;

private:
    std::vector<double> coords_;
};

struct EmbeddingConfig {
    /// Multiplier applied to raw degrees. At 10 per degree, ~1 km of
    /// displacement is ~0.09 units, the same order as an hour on the day circle.
    double geo_scale = 10.0;
    /// Radius of the day circle; the week circle has radius time_weight * week_weight.
    double time_weight = 1.0;
    /// Relative scale of the week pair. At 1.0 the same clock time on
    /// adjacent days is 0.868 * time_weight apart.
    double week_weight = 1.0;
    std::size_t dims = kContextDims;

    void validate() const;

    friend bool operator==(const EmbeddingConfig&, const EmbeddingConfig&) = default;
};

struct CyclicPair {
    double sin = 0.0;
    double cos = 1.0;
};

/// (sin 2πx, cos 2πx) with x = minutes / 1440. Throws RangeError outside [0, 1440).
CyclicPair embed_time_of_day(int minutes_past_midnight);

/// (sin 2πx, cos 2πx) with x = minutes / 10080. Throws RangeError outside [0, 10080).
CyclicPair embed_time_of_week(int minutes_past_sunday_midnight);

ContextVector embed(const RawContext& raw, const EmbeddingConfig& cfg);

/// Throws DimensionError on mismatched sizes.
double squared_distance(std::span<const double> a, std::span<const double> b);
double euclidean_distance(const ContextVector& a, const ContextVector& b);

/// Pushes both cyclic pairs of `v` back onto their circles. A pair whose
/// norm has collapsed (antipodal average) takes its direction from
/// `fallback` instead.
void reproject_cyclic(ContextVector& v, const ContextVector& fallback, const EmbeddingConfig& cfg);

/// Inverse of the cyclic maps: angle of a (sin, cos) pair expressed in
/// minutes of a period, in [0, period).
double cyclic_minutes(double sin_value, double cos_value, double period_minutes);

}  // namespace intentlab
