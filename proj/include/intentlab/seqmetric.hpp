#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "intentlab/local_time.hpp"

namespace intentlab {

/// Interned intent label.
struct IntentId {
    std::uint32_t value = 0;

    friend constexpr auto operator<=>(IntentId, IntentId) = default;
};

/// Bijective label <-> id mapping. Ids are dense and assigned in order of
/// first sight.
class IntentRegistry {
public:
    IntentId intern(std::string_view label);
    std::optional<IntentId> find(std::string_view label) const;
    /// Throws ValidationError for an id this registry never issued.
    const std::string& label(IntentId id) const;
    bool contains(IntentId id) const noexcept { return id.value < labels_.size(); }
    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    friend bool operator==(const IntentRegistry& a, const IntentRegistry& b) { return a.labels_ == b.labels_; }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, std::uint32_t> ids_;
};

/// Preceding intents, most recent first (index 0 immediately precedes the anchor).
struct IntentSequence {
    std::vector<IntentId> items;
    int window_minutes = 90;

    bool empty() const noexcept { return items.empty(); }
    std::size_t size() const noexcept { return items.size(); }

    friend bool operator==(const IntentSequence&, const IntentSequence&) = default;
};

inline constexpr int kDefaultWindowMinutes = 90;

struct TimedIntent {
    IntentId intent;
    LocalTime time;
};

/// Every history entry with anchor - time <= window_minutes, most recent
/// first. `history` must be ascending and end at or before `anchor`;
/// otherwise ValidationError.
IntentSequence build_sequence(std::span<const TimedIntent> history, LocalTime anchor,
                              int window_minutes = kDefaultWindowMinutes);

/// Unit-cost edit distance.
std::size_t levenshtein(std::span<const IntentId> a, std::span<const IntentId> b);

/// Jaro similarity in [0, 1]; 0 when nothing matches, including empty inputs.
double jaro(std::span<const IntentId> a, std::span<const IntentId> b);

inline constexpr double kDefaultPrefixScale = 0.1;
inline constexpr std::size_t kDefaultPrefixCap = 4;

/// Jaro similarity boosted by the common prefix (capped at `prefix_cap`).
/// Since sequences are most-recent-first, the bonus rewards agreement on the
/// latest intents. Throws RangeError unless 0 <= p <= 1/prefix_cap, which
/// keeps the result in [0, 1].
double jaro_winkler(std::span<const IntentId> a, std::span<const IntentId> b, double p = kDefaultPrefixScale,
                    std::size_t prefix_cap = kDefaultPrefixCap);

inline std::size_t levenshtein(const IntentSequence& a, const IntentSequence& b) {
    return levenshtein(a.items, b.items);
}
inline double jaro(const IntentSequence& a, const IntentSequence& b) { return jaro(a.items, b.items); }
inline double jaro_winkler(const IntentSequence& a, const IntentSequence& b, double p = kDefaultPrefixScale,
                           std::size_t prefix_cap = kDefaultPrefixCap) {
    return jaro_winkler(a.items, b.items, p, prefix_cap);
}

}  // namespace intentlab
