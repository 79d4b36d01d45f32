#pragma once

// Slow reference implementations used only by tests. Written independently of
// src/ so a shared bug cannot make both sides agree.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "intentlab/nodestore.hpp"
#include "intentlab/seqmetric.hpp"

namespace oracle {

inline std::vector<intentlab::IntentId> ids(const std::string& text) {
    std::vector<intentlab::IntentId> out;
    for (const unsigned char c : text) out.push_back({c});
    return out;
}

inline std::vector<intentlab::IntentId> ids(const std::vector<int>& values) {
    std::vector<intentlab::IntentId> out;
    for (const int v : values) out.push_back({static_cast<std::uint32_t>(v)});
    return out;
}

/// Textbook recursion over suffixes, memoized on (i, j).
inline std::size_t levenshtein(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
    std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
        if (i == a.size()) return b.size() - j;
        if (j == b.size()) return a.size() - i;
        const auto key = std::make_pair(i, j);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        std::size_t best;
        if (a[i] == b[j]) {
            best = go(i + 1, j + 1);
        } else {
            best = 1 + std::min({go(i + 1, j), go(i, j + 1), go(i + 1, j + 1)});
        }
        memo[key] = best;
        return best;
    };
    return go(0, 0);
}

/// Jaro from the definition: matching window floor(max/2)-1, transpositions
/// as half the mismatches between the two matched subsequences.
inline double jaro(const std::vector<std::uint32_t>& s1, const std::vector<std::uint32_t>& s2) {
    if (s1.empty() || s2.empty()) return 0.0;
    const long len1 = static_cast<long>(s1.size());
    const long len2 = static_cast<long>(s2.size());
    const long window = std::max(0L, std::max(len1, len2) / 2 - 1);
    std::vector<bool> used(s2.size(), false);
    std::vector<std::uint32_t> matched1;
    std::vector<long> matched_pos2;
    for (long i = 0; i < len1; ++i) {
        for (long j = std::max(0L, i - window); j <= std::min(len2 - 1, i + window); ++j) {
            if (!used[static_cast<std::size_t>(j)] && s1[static_cast<std::size_t>(i)] == s2[static_cast<std::size_t>(j)]) {
                used[static_cast<std::size_t>(j)] = true;
                matched1.push_back(s1[static_cast<std::size_t>(i)]);
                break;
            }
        }
    }
    std::vector<std::uint32_t> matched2;
    for (long j = 0; j < len2; ++j) {
        if (used[static_cast<std::size_t>(j)]) matched2.push_back(s2[static_cast<std::size_t>(j)]);
    }
    const double m = static_cast<double>(matched1.size());
    if (m == 0.0) return 0.0;
    double mismatched = 0.0;
    for (std::size_t k = 0; k < matched1.size(); ++k) {
        if (matched1[k] != matched2[k]) mismatched += 1.0;
    }
    const double t = mismatched / 2.0;
    return (m / static_cast<double>(len1) + m / static_cast<double>(len2) + (m - t) / m) / 3.0;
}

inline double jaro_winkler(const std::vector<std::uint32_t>& s1, const std::vector<std::uint32_t>& s2,
                           double p = 0.1, std::size_t cap = 4) {
    const double j = jaro(s1, s2);
    std::size_t l = 0;
    while (l < cap && l < s1.size() && l < s2.size() && s1[l] == s2[l]) ++l;
    return j + static_cast<double>(l) * p * (1.0 - j);
}

inline std::vector<std::uint32_t> raw(const std::vector<intentlab::IntentId>& v) {
    std::vector<std::uint32_t> out;
    for (const auto id : v) out.push_back(id.value);
    return out;
}

/// Full scan of the store, sorted by (distance, weight desc, id).
inline std::vector<intentlab::NodeId> nearest(const intentlab::NodeStore& store, const intentlab::ContextVector& q,
                                              std::size_t n) {
    struct Row {
        double d2;
        double w;
        intentlab::NodeId id;
    };
    std::vector<Row> rows;
    for (const auto& [id, node] : store.nodes()) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) d2 += (q[i] - node.position[i]) * (q[i] - node.position[i]);
        rows.push_back({d2, node.weight, id});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.d2 != b.d2) return a.d2 < b.d2;
        if (a.w != b.w) return a.w > b.w;
        return a.id < b.id;
    });
    std::vector<intentlab::NodeId> out;
    for (std::size_t i = 0; i < rows.size() && i < n; ++i) out.push_back(rows[i].id);
    return out;
}

}  // namespace oracle
