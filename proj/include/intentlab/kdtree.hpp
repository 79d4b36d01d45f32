#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace intentlab {

/// Point index over live node positions.
///
/// Inserts attach a leaf in O(depth). Deletes tombstone the entry; the tree
/// is rebuilt (median splits on the widest axis) once tombstones exceed
/// `rebuild_fraction` of live entries, or once incremental inserts have
/// doubled the tree since the last rebuild.
///
/// Neighbor order is total: distance ascending, then weight descending,
/// then id ascending. Weights are carried per entry so ties are resolved
/// inside the search rather than after it.
class KdTree {
public:
    struct Neighbor {
        std::uint64_t id = 0;
        double distance = 0.0;
    };

    struct SearchStats {
        std::size_t visited = 0;
    };

    explicit KdTree(std::size_t dims, double rebuild_fraction = 0.25);

    std::size_t dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return live_; }
    std::size_t tombstones() const noexcept { return entries_.size() - live_; }
    bool contains(std::uint64_t id) const { return slot_.count(id) != 0; }

    /// Throws ValidationError when `id` is already present.
    void insert(std::uint64_t id, std::span<const double> position, double weight);
    /// Returns false when `id` is not present.
    bool erase(std::uint64_t id);
    void relocate(std::uint64_t id, std::span<const double> position);
    void set_weight(std::uint64_t id, double weight);
    void clear();

    /// Up to `n` nearest live entries in neighbor order.
    std::vector<Neighbor> nearest(std::span<const double> query, std::size_t n, SearchStats* stats = nullptr) const;

    /// Every live entry within `radius` (inclusive), in neighbor order.
    std::vector<Neighbor> within(std::span<const double> query, double radius, SearchStats* stats = nullptr) const;

    void rebuild();

    /// Longest root-to-leaf path; exposed for tests.
    std::size_t depth() const;

private:
    struct Entry {
        std::uint64_t id = 0;
        double weight = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::uint32_t axis = 0;
        bool alive = true;
    };

    struct Candidate {
        double dist2;
        double weight;
        std::uint64_t id;
    };
    static bool before(const Candidate& a, const Candidate& b);

    std::span<const double> point(std::size_t entry) const { return {points_.data() + entry * dims_, dims_}; }
    std::int32_t build(std::vector<std::size_t>& order, std::size_t lo, std::size_t hi);
    void maybe_rebuild();
    void check_query(std::span<const double> query) const;

    void knn(std::int32_t node, std::span<const double> query, std::size_t n, std::vector<Candidate>& best,
             SearchStats& stats) const;
    void range(std::int32_t node, std::span<const double> query, double radius2, std::vector<Candidate>& out,
               SearchStats& stats) const;

    std::size_t dims_;
    double rebuild_fraction_;
    std::vector<Entry> entries_;
    std::vector<double> points_;
    std::unordered_map<std::uint64_t, std::size_t> slot_;
    std::int32_t root_ = -1;
    std::size_t live_ = 0;
    std::size_t size_at_rebuild_ = 0;
};

}  // namespace intentlab
