#include "intentlab/nodestore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "intentlab/error.hpp"

namespace intentlab {

void StoreConfig::validate() const {
    if (!(decay_k >= 0.4 && decay_k <= 1.0)) throw ValidationError("decay_k must lie in [0.4, 1]");
    if (!(prune_threshold >= 0.0)) throw ValidationError("prune_threshold must be >= 0");
    if (!(fusion_radius > 0.0) || !std::isfinite(fusion_radius)) throw ValidationError("fusion_radius must be > 0");
    if (neighbor_count < 1) throw ValidationError("neighbor_count must be >= 1");
    if (sequence_capacity < 1) throw ValidationError("sequence_capacity must be >= 1");
    if (!(rebuild_fraction > 0.0)) throw ValidationError("rebuild_fraction must be > 0");
}

double decay_weight(double w_old, double k, std::int64_t d) {
    return std::pow(k, static_cast<double>(d)) * w_old + 1.0;
}

void drift_node(IntentNode& node, const RawContext& raw, const ContextVector& position,
                const EmbeddingConfig& embedding) {
    if (node.position.size() != position.size()) throw DimensionError("drift with mismatched dimensionality");
    const double w = node.weight;
    const double denom = w + 1.0;
    const ContextVector before = node.position;
    for (std::size_t j = 0; j < position.size(); ++j) {
        node.position[j] = (node.position[j] * w + position[j]) / denom;
    }
    reproject_cyclic(node.position, before, embedding);

    node.raw_lat = (node.raw_lat * w + raw.latitude) / denom;
    node.raw_lon = (node.raw_lon * w + raw.longitude) / denom;
    // Minute centroids follow the re-projected angles; a linear mean of
    // minutes would jump across midnight.
    node.raw_minutes_of_day = cyclic_minutes(node.position[kDaySin], node.position[kDayCos], kMinutesPerDay);
    node.raw_minutes_of_week = cyclic_minutes(node.position[kWeekSin], node.position[kWeekCos], kMinutesPerWeek);
}

NodeStore::NodeStore(EmbeddingConfig embedding, StoreConfig config)
    : embedding_(embedding), config_(config), index_(embedding.dims, config.rebuild_fraction) {
    embedding_.validate();
    config_.validate();
}

void NodeStore::check_dims(const ContextVector& v) const {
    if (v.size() != embedding_.dims) {
        throw DimensionError("vector has " + std::to_string(v.size()) + " dims, store expects " +
                             std::to_string(embedding_.dims));
    }
}

std::int64_t NodeStore::elapsed_periods(std::int64_t last_touch_day, std::int64_t day) const {
    const std::int64_t days = std::max<std::int64_t>(0, day - last_touch_day);
    return config_.decay_period == DecayPeriod::Weekly ? days / 7 : days;
}

double NodeStore::effective_weight(const IntentNode& node, std::int64_t day) const {
    return std::pow(config_.decay_k, static_cast<double>(elapsed_periods(node.last_touch_day, day))) * node.weight;
}

ObserveOutcome NodeStore::observe(IntentId intent, const ContextVector& position, const RawContext& raw,
                                  const IntentSequence& preceding, std::int64_t day) {
    check_dims(position);
    if (day < current_day_) {
        throw ValidationError("observation day " + std::to_string(day) + " precedes store day " +
                              std::to_string(current_day_));
    }
    current_day_ = day;

    ObserveOutcome outcome;
    const auto in_radius = index_.within(position.coords(), config_.fusion_radius);
    const auto same_intent = std::find_if(in_radius.begin(), in_radius.end(), [&](const KdTree::Neighbor& n) {
        return nodes_.at(n.id).intent == intent;
    });

    if (same_intent != in_radius.end()) {
        IntentNode& node = nodes_.at(same_intent->id);
        if (config_.drift_enabled) {
            drift_node(node, raw, position, embedding_);
            index_.relocate(node.id, node.position.coords());
        }
        node.weight = decay_weight(node.weight, config_.decay_k, elapsed_periods(node.last_touch_day, day));
        node.last_touch_day = day;
        node.sequences.push_back(preceding);
        if (node.sequences.size() > config_.sequence_capacity) {
            node.sequences.erase(node.sequences.begin(),
                                 node.sequences.begin() +
                                     static_cast<std::ptrdiff_t>(node.sequences.size() - config_.sequence_capacity));
        }
        index_.set_weight(node.id, node.weight);
        outcome = {node.id, ObserveKind::Fused, 0};
    } else {
        IntentNode node;
        node.id = next_id_++;
        node.intent = intent;
        node.position = position;
        node.weight = 1.0;
        node.last_touch_day = day;
        node.sequences.push_back(preceding);
        node.raw_minutes_of_day = minute_of_day(raw.time);
        node.raw_minutes_of_week = minute_of_week(raw.time);
        node.raw_lat = raw.latitude;
        node.raw_lon = raw.longitude;
        index_.insert(node.id, node.position.coords(), node.weight);
        outcome = {node.id, ObserveKind::Created, 0};
        nodes_.emplace(node.id, std::move(node));
    }

    std::vector<NodeId> neighborhood;
    for (const auto& n : index_.nearest(position.coords(), config_.neighbor_count)) neighborhood.push_back(n.id);
    for (const auto& n : index_.within(position.coords(), config_.fusion_radius)) neighborhood.push_back(n.id);
    outcome.pruned = prune_ids(neighborhood, day, outcome.node_id);
    return outcome;
}

std::vector<Neighbor> NodeStore::nearest(const ContextVector& query, std::size_t n,
                                         KdTree::SearchStats* stats) const {
    check_dims(query);
    std::vector<Neighbor> out;
    for (const auto& hit : index_.nearest(query.coords(), n, stats)) out.push_back({hit.id, hit.distance});
    return out;
}

std::size_t NodeStore::prune_ids(const std::vector<NodeId>& ids, std::int64_t day, NodeId keep) {
    std::size_t removed = 0;
    for (const NodeId id : ids) {
        if (id == keep) continue;
        auto it = nodes_.find(id);
        if (it == nodes_.end()) continue;
        if (effective_weight(it->second, day) < config_.prune_threshold) {
            index_.erase(id);
            nodes_.erase(it);
            ++removed;
        }
    }
    return removed;
}

std::size_t NodeStore::prune_neighborhood(const ContextVector& around, std::int64_t day) {
    check_dims(around);
    std::vector<NodeId> neighborhood;
    for (const auto& n : index_.nearest(around.coords(), config_.neighbor_count)) neighborhood.push_back(n.id);
    for (const auto& n : index_.within(around.coords(), config_.fusion_radius)) neighborhood.push_back(n.id);
    return prune_ids(neighborhood, day, 0);
}

std::size_t NodeStore::prune_all(std::int64_t day) {
    std::vector<NodeId> all;
    all.reserve(nodes_.size());
    for (const auto& [id, node] : nodes_) all.push_back(id);
    return prune_ids(all, day, 0);
}

const IntentNode* NodeStore::find(NodeId id) const {
    auto it = nodes_.find(id);
    return it == nodes_.end() ? nullptr : &it->second;
}

const IntentNode& NodeStore::node(NodeId id) const {
    if (const IntentNode* n = find(id)) return *n;
    throw ValidationError("unknown node id " + std::to_string(id));
}

NodeStore NodeStore::restore(EmbeddingConfig embedding, StoreConfig config, std::int64_t current_day,
                             NodeId next_id, std::vector<IntentNode> nodes) {
    NodeStore store(embedding, config);
    store.current_day_ = current_day;
    store.next_id_ = next_id;
    for (auto& node : nodes) {
        store.check_dims(node.position);
        if (node.id == 0 || node.id >= next_id) throw ValidationError("node id outside issued range");
        const NodeId id = node.id;
        if (!store.nodes_.emplace(id, std::move(node)).second) throw ValidationError("duplicate node id");
    }
    for (const auto& [id, node] : store.nodes_) store.index_.insert(id, node.position.coords(), node.weight);
    store.index_.rebuild();
    return store;
}

}  // namespace intentlab
