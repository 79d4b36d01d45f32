#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "intentlab/embedding.hpp"
#include "intentlab/kdtree.hpp"
#include "intentlab/seqmetric.hpp"

namespace intentlab {

using NodeId = std::uint64_t;

/// A weighted, drifting cluster of same-intent observations.
struct IntentNode {
    NodeId id = 0;
    IntentId intent;
    ContextVector position;
    double weight = 1.0;
    std::int64_t last_touch_day = 0;
    /// Preceding sequences seen at creation/fusion, oldest first, at most
    /// StoreConfig::sequence_capacity.
    std::vector<IntentSequence> sequences;
    // Human-readable centroid; the embedded position is authoritative.
    double raw_minutes_of_day = 0.0;
    double raw_minutes_of_week = 0.0;
    double raw_lat = 0.0;
    double raw_lon = 0.0;

    friend bool operator==(const IntentNode&, const IntentNode&) = default;
};

enum class DecayPeriod : std::uint8_t { Daily = 0, Weekly = 1 };

struct StoreConfig {
    double decay_k = 0.6;
    double prune_threshold = 0.3;
    /// Embedded units; 0.35 is roughly 80 minutes on the day circle at unit time weight.
    double fusion_radius = 0.35;
    /// Size of the neighborhood swept for pruning after each observation.
    std::size_t neighbor_count = 5;
    std::size_t sequence_capacity = 8;
    DecayPeriod decay_period = DecayPeriod::Daily;
    /// When false, fusion only bumps weight and never moves the node.
    bool drift_enabled = true;
    double rebuild_fraction = 0.25;

    void validate() const;

    friend bool operator==(const StoreConfig&, const StoreConfig&) = default;
};

/// k^d * w_old + 1.
double decay_weight(double w_old, double k, std::int64_t d);

/// Moves `node` toward an observation with the weighted running mean
/// (f * w + f_new) / (w + 1), using the node's pre-fusion weight. The mean
/// is taken in embedded space and the cyclic pairs are projected back onto
/// their circle, so 23:50 and 00:10 average to midnight rather than noon.
void drift_node(IntentNode& node, const RawContext& raw, const ContextVector& position,
                const EmbeddingConfig& embedding);

enum class ObserveKind { Created, Fused };

struct ObserveOutcome {
    NodeId node_id = 0;
    ObserveKind kind = ObserveKind::Created;
    std::size_t pruned = 0;
};

struct Neighbor {
    NodeId id = 0;
    double distance = 0.0;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// All nodes of one user plus the spatial index over their positions.
///
/// Single writer: observe/prune mutate and must be serialized by the caller.
/// Const members may run concurrently with each other.
class NodeStore {
public:
    explicit NodeStore(EmbeddingConfig embedding = {}, StoreConfig config = {});

    const EmbeddingConfig& embedding_config() const noexcept { return embedding_; }
    const StoreConfig& config() const noexcept { return config_; }

    /// Fuses into the nearest live same-intent node within fusion_radius, or
    /// creates a new node; then prunes the surrounding neighborhood.
    /// Throws DimensionError on a wrong-sized position and ValidationError
    /// when `day` moves backwards.
    ObserveOutcome observe(IntentId intent, const ContextVector& position, const RawContext& raw,
                           const IntentSequence& preceding, std::int64_t day);

    /// Up to n live nodes ordered by distance, then weight (desc), then id.
    std::vector<Neighbor> nearest(const ContextVector& query, std::size_t n,
                                  KdTree::SearchStats* stats = nullptr) const;

    /// Removes neighborhood nodes (n nearest plus everything within the
    /// fusion radius) whose aged weight k^d * w is below prune_threshold.
    std::size_t prune_neighborhood(const ContextVector& around, std::int64_t day);

    /// Same test over every live node.
    std::size_t prune_all(std::int64_t day);

    /// Decay periods (days or weeks) between two day indices.
    std::int64_t elapsed_periods(std::int64_t last_touch_day, std::int64_t day) const;
    /// Aged weight without the fusion increment.
    double effective_weight(const IntentNode& node, std::int64_t day) const;

    const IntentNode* find(NodeId id) const;
    /// Throws ValidationError for an unknown id.
    const IntentNode& node(NodeId id) const;
    const std::map<NodeId, IntentNode>& nodes() const noexcept { return nodes_; }

    std::size_t size() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }
    std::int64_t current_day() const noexcept { return current_day_; }
    NodeId next_id() const noexcept { return next_id_; }
    std::size_t tombstone_count() const noexcept { return index_.tombstones(); }
    const KdTree& index() const noexcept { return index_; }

    /// Reinstates a persisted state; the index is rebuilt from `nodes`.
    static NodeStore restore(EmbeddingConfig embedding, StoreConfig config, std::int64_t current_day,
                             NodeId next_id, std::vector<IntentNode> nodes);

private:
    void check_dims(const ContextVector& v) const;
    std::size_t prune_ids(const std::vector<NodeId>& ids, std::int64_t day, NodeId keep);

    EmbeddingConfig embedding_;
    StoreConfig config_;
    std::map<NodeId, IntentNode> nodes_;
    KdTree index_;
    std::int64_t current_day_ = 0;
    NodeId next_id_ = 1;
};

}  // namespace intentlab
