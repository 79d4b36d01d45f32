#include "intentlab/seqmetric.hpp"

#include <algorithm>
#include <numeric>

#include "intentlab/error.hpp"

namespace intentlab {

IntentId IntentRegistry::intern(std::string_view label) {
    if (label.empty()) throw ValidationError("intent label must not be empty");
    std::string key(label);
    if (auto it = ids_.find(key); it != ids_.end()) return IntentId{it->second};
    const auto id = static_cast<std::uint32_t>(labels_.size());
    labels_.push_back(key);
    ids_.emplace(std::move(key), id);
    return IntentId{id};
}

std::optional<IntentId> IntentRegistry::find(std::string_view label) const {
    if (auto it = ids_.find(std::string(label)); it != ids_.end()) return IntentId{it->second};
    return std::nullopt;
}

const std::string& IntentRegistry::label(IntentId id) const {
    if (!contains(id)) throw ValidationError("unknown intent id " + std::to_string(id.value));
    return labels_[id.value];
}

IntentSequence build_sequence(std::span<const TimedIntent> history, LocalTime anchor, int window_minutes) {
    if (window_minutes < 0) throw RangeError("window_minutes must be >= 0");
    for (std::size_t i = 1; i < history.size(); ++i) {
        if (history[i].time < history[i - 1].time) throw ValidationError("history is not sorted by time");
    }
    if (!history.empty() && history.back().time > anchor) {
        throw ValidationError("history extends past the anchor instant");
    }
    IntentSequence seq;
    seq.window_minutes = window_minutes;
    for (auto it = history.rbegin(); it != history.rend(); ++it) {
        if (anchor - it->time > window_minutes) break;
        seq.items.push_back(it->intent);
    }
    return seq;
}

std::size_t levenshtein(std::span<const IntentId> a, std::span<const IntentId> b) {
    if (a.size() < b.size()) std::swap(a, b);
    std::vector<std::size_t> row(b.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({up + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

double jaro(std::span<const IntentId> a, std::span<const IntentId> b) {
    if (a.empty() || b.empty()) return 0.0;
    const std::size_t longest = std::max(a.size(), b.size());
    const std::size_t window = longest / 2 >= 1 ? longest / 2 - 1 : 0;

    std::vector<char> a_matched(a.size(), 0);
    std::vector<char> b_matched(b.size(), 0);
    std::size_t matches = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t lo = i > window ? i - window : 0;
        const std::size_t hi = std::min(b.size(), i + window + 1);
        for (std::size_t j = lo; j < hi; ++j) {
            if (!b_matched[j] && a[i] == b[j]) {
                a_matched[i] = b_matched[j] = 1;
                ++matches;
                break;
            }
        }
    }
    if (matches == 0) return 0.0;

    std::size_t half_transpositions = 0;
    for (std::size_t i = 0, j = 0; i < a.size(); ++i) {
        if (!a_matched[i]) continue;
        while (!b_matched[j]) ++j;
        if (a[i] != b[j]) ++half_transpositions;
        ++j;
    }
    const double m = static_cast<double>(matches);
    const double t = static_cast<double>(half_transpositions) / 2.0;
    return (m / static_cast<double>(a.size()) + m / static_cast<double>(b.size()) + (m - t) / m) / 3.0;
}

double jaro_winkler(std::span<const IntentId> a, std::span<const IntentId> b, double p, std::size_t prefix_cap) {
    if (prefix_cap == 0 && p != 0.0) throw RangeError("prefix scale must be 0 when the prefix cap is 0");
    if (!(p >= 0.0) || (prefix_cap > 0 && p * static_cast<double>(prefix_cap) > 1.0)) {
        throw RangeError("prefix scale p must lie in [0, 1/prefix_cap]");
    }
    const double sim = jaro(a, b);
    const std::size_t limit = std::min({prefix_cap, a.size(), b.size()});
    std::size_t prefix = 0;
    while (prefix < limit && a[prefix] == b[prefix]) ++prefix;
    return sim + static_cast<double>(prefix) * p * (1.0 - sim);
}

}  // namespace intentlab
