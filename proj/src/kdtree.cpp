#include "intentlab/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "intentlab/embedding.hpp"
#include "intentlab/error.hpp"

namespace intentlab {

KdTree::KdTree(std::size_t dims, double rebuild_fraction) : dims_(dims), rebuild_fraction_(rebuild_fraction) {
    if (dims == 0) throw ValidationError("k-d tree needs at least one dimension");
    if (!(rebuild_fraction > 0.0)) throw ValidationError("rebuild_fraction must be > 0");
}

bool KdTree::before(const Candidate& a, const Candidate& b) {
    if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.id < b.id;
}

void KdTree::check_query(std::span<const double> query) const {
    if (query.size() != dims_) {
        throw DimensionError("query has " + std::to_string(query.size()) + " dims, index has " +
                             std::to_string(dims_));
    }
}

void KdTree::insert(std::uint64_t id, std::span<const double> position, double weight) {
    check_query(position);
    if (slot_.count(id) != 0) throw ValidationError("duplicate id " + std::to_string(id) + " in k-d tree");

    const std::size_t index = entries_.size();
    Entry entry;
    entry.id = id;
    entry.weight = weight;
    points_.insert(points_.end(), position.begin(), position.end());

    if (root_ < 0) {
        entry.axis = 0;
        entries_.push_back(entry);
        root_ = static_cast<std::int32_t>(index);
    } else {
        std::int32_t node = root_;
        std::uint32_t depth = 0;
        while (true) {
            Entry& parent = entries_[static_cast<std::size_t>(node)];
            const bool go_left = position[parent.axis] < point(static_cast<std::size_t>(node))[parent.axis];
            std::int32_t& child = go_left ? parent.left : parent.right;
            ++depth;
            if (child < 0) {
                child = static_cast<std::int32_t>(index);
                entry.axis = (parent.axis + 1) % static_cast<std::uint32_t>(dims_);
                break;
            }
            node = child;
        }
        entries_.push_back(entry);
    }
    slot_.emplace(id, index);
    ++live_;
    maybe_rebuild();
}

bool KdTree::erase(std::uint64_t id) {
    auto it = slot_.find(id);
    if (it == slot_.end()) return false;
    entries_[it->second].alive = false;
    slot_.erase(it);
    --live_;
    maybe_rebuild();
    return true;
}

void KdTree::relocate(std::uint64_t id, std::span<const double> position) {
    auto it = slot_.find(id);
    if (it == slot_.end()) throw ValidationError("relocate of unknown id " + std::to_string(id));
    const double weight = entries_[it->second].weight;
    erase(id);
    insert(id, position, weight);
}

void KdTree::set_weight(std::uint64_t id, double weight) {
    auto it = slot_.find(id);
    if (it == slot_.end()) throw ValidationError("set_weight of unknown id " + std::to_string(id));
    entries_[it->second].weight = weight;
}

void KdTree::clear() {
    entries_.clear();
    points_.clear();
    slot_.clear();
    root_ = -1;
    live_ = 0;
    size_at_rebuild_ = 0;
}

void KdTree::maybe_rebuild() {
    const std::size_t dead = entries_.size() - live_;
    const bool too_many_tombstones = static_cast<double>(dead) > rebuild_fraction_ * static_cast<double>(live_);
    const bool grown = entries_.size() > 2 * size_at_rebuild_ + 16;
    if ((dead > 0 && too_many_tombstones) || grown) rebuild();
}

void KdTree::rebuild() {
    std::vector<Entry> old_entries;
    std::vector<double> old_points;
    old_entries.swap(entries_);
    old_points.swap(points_);
    slot_.clear();
    root_ = -1;

    entries_.reserve(live_);
    points_.reserve(live_ * dims_);
    for (std::size_t i = 0; i < old_entries.size(); ++i) {
        if (!old_entries[i].alive) continue;
        Entry e;
        e.id = old_entries[i].id;
        e.weight = old_entries[i].weight;
        slot_.emplace(e.id, entries_.size());
        entries_.push_back(e);
        points_.insert(points_.end(), old_points.begin() + static_cast<std::ptrdiff_t>(i * dims_),
                       old_points.begin() + static_cast<std::ptrdiff_t>((i + 1) * dims_));
    }
    std::vector<std::size_t> order(entries_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    root_ = build(order, 0, order.size());
    size_at_rebuild_ = entries_.size();
}

std::int32_t KdTree::build(std::vector<std::size_t>& order, std::size_t lo, std::size_t hi) {
    if (lo >= hi) return -1;
    std::uint32_t axis = 0;
    double widest = -1.0;
    for (std::size_t d = 0; d < dims_; ++d) {
        double mn = point(order[lo])[d];
        double mx = mn;
        for (std::size_t i = lo + 1; i < hi; ++i) {
            const double v = point(order[i])[d];
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        if (mx - mn > widest) {
            widest = mx - mn;
            axis = static_cast<std::uint32_t>(d);
        }
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    const auto first = order.begin() + static_cast<std::ptrdiff_t>(lo);
    std::nth_element(first, order.begin() + static_cast<std::ptrdiff_t>(mid),
                     order.begin() + static_cast<std::ptrdiff_t>(hi), [&](std::size_t a, std::size_t b) {
                         return point(a)[axis] < point(b)[axis];
                     });
    // nth_element leaves left <= pivot <= right, which is all the pruning needs.
    const auto node_index = order[mid];
    entries_[node_index].axis = axis;
    const std::int32_t left = build(order, lo, mid);
    const std::int32_t right = build(order, mid + 1, hi);
    entries_[node_index].left = left;
    entries_[node_index].right = right;
    return static_cast<std::int32_t>(node_index);
}

void KdTree::knn(std::int32_t node, std::span<const double> query, std::size_t n, std::vector<Candidate>& best,
                 SearchStats& stats) const {
    if (node < 0) return;
    const auto index = static_cast<std::size_t>(node);
    const Entry& e = entries_[index];
    ++stats.visited;
    const auto p = point(index);
    if (e.alive) {
        const Candidate c{squared_distance(query, p), e.weight, e.id};
        if (best.size() < n || before(c, best.back())) {
            best.insert(std::upper_bound(best.begin(), best.end(), c, before), c);
            if (best.size() > n) best.pop_back();
        }
    }
    const double diff = query[e.axis] - p[e.axis];
    const std::int32_t near_side = diff < 0.0 ? e.left : e.right;
    const std::int32_t far_side = diff < 0.0 ? e.right : e.left;
    knn(near_side, query, n, best, stats);
    // Equality is not pruned: an equidistant entry can still win on weight or id.
    if (best.size() < n || diff * diff <= best.back().dist2) knn(far_side, query, n, best, stats);
}

void KdTree::range(std::int32_t node, std::span<const double> query, double radius2, std::vector<Candidate>& out,
                   SearchStats& stats) const {
    if (node < 0) return;
    const auto index = static_cast<std::size_t>(node);
    const Entry& e = entries_[index];
    ++stats.visited;
    const auto p = point(index);
    if (e.alive) {
        const double d2 = squared_distance(query, p);
        if (d2 <= radius2) out.push_back({d2, e.weight, e.id});
    }
    const double diff = query[e.axis] - p[e.axis];
    if (diff < 0.0 || diff * diff <= radius2) range(e.left, query, radius2, out, stats);
    if (diff >= 0.0 || diff * diff <= radius2) range(e.right, query, radius2, out, stats);
}

std::vector<KdTree::Neighbor> KdTree::nearest(std::span<const double> query, std::size_t n,
                                              SearchStats* stats) const {
    check_query(query);
    SearchStats local;
    std::vector<Candidate> best;
    if (n > 0) {
        best.reserve(n + 1);
        knn(root_, query, n, best, local);
    }
    if (stats != nullptr) *stats = local;
    std::vector<Neighbor> result;
    result.reserve(best.size());
    for (const auto& c : best) result.push_back({c.id, std::sqrt(c.dist2)});
    return result;
}

std::vector<KdTree::Neighbor> KdTree::within(std::span<const double> query, double radius,
                                             SearchStats* stats) const {
    check_query(query);
    SearchStats local;
    std::vector<Candidate> found;
    if (radius >= 0.0) range(root_, query, radius * radius, found, local);
    std::sort(found.begin(), found.end(), before);
    if (stats != nullptr) *stats = local;
    std::vector<Neighbor> result;
    result.reserve(found.size());
    for (const auto& c : found) result.push_back({c.id, std::sqrt(c.dist2)});
    return result;
}

std::size_t KdTree::depth() const {
    std::size_t deepest = 0;
    std::vector<std::pair<std::int32_t, std::size_t>> stack;
    if (root_ >= 0) stack.emplace_back(root_, 1);
    while (!stack.empty()) {
        auto [node, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        const Entry& e = entries_[static_cast<std::size_t>(node)];
        if (e.left >= 0) stack.emplace_back(e.left, d + 1);
        if (e.right >= 0) stack.emplace_back(e.right, d + 1);
    }
    return deepest;
}

}  // namespace intentlab
