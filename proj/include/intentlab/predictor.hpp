#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "intentlab/nodestore.hpp"
#include "intentlab/seqmetric.hpp"

namespace intentlab {

struct PredictorConfig {
    /// Candidates retrieved from the index before scoring.
    std::size_t neighbor_count = 5;
    /// Minimum tanh(w/d) for a candidate to enter sequence ranking.
    double score_cutoff = 0.94;
    double distance_epsilon = 1e-6;
    /// Length of the distinct-intent list reported for Precision@N.
    std::size_t top_n_output = 10;
    /// false ranks candidates by spatial score only (context-only ablation).
    bool use_sequence = true;
    /// Score nodes with their weight aged to the query day (k^d * w, the
    /// quantity pruning tests) instead of the weight stored at last touch.
    bool age_weights = false;
    double prefix_scale = kDefaultPrefixScale;
    std::size_t prefix_cap = kDefaultPrefixCap;

    void validate() const;

    friend bool operator==(const PredictorConfig&, const PredictorConfig&) = default;
};

/// Similarity assigned when either side has no sequence to compare.
inline constexpr double kNeutralSimilarity = 0.5;

struct RankedIntent {
    IntentId intent;
    NodeId node_id = 0;
    double spatial_score = 0.0;
    double seq_similarity = 0.0;
    double distance = 0.0;
    double weight = 0.0;
    /// true when spatial_score >= cutoff.
    bool passed_cutoff = false;
    /// true for entries past the first neighbor_count candidates, appended
    /// only to fill the top-N list.
    bool extended = false;
};

struct PredictionResult {
    /// Distinct intents, best first.
    std::vector<RankedIntent> ranked;
    /// No candidate reached the cutoff; ranking fell back to spatial score.
    bool fallback_used = false;

    bool empty() const noexcept { return ranked.empty(); }
    std::optional<IntentId> top() const;
    std::vector<IntentId> top_intents(std::size_t n) const;
};

/// tanh(weight / max(distance, epsilon)).
double spatial_score(double weight, double distance, double epsilon);

/// Best Jaro-Winkler match between `recent` and any sequence stored on the
/// node; kNeutralSimilarity when either side is empty.
double sequence_similarity(const IntentNode& node, const IntentSequence& recent, const PredictorConfig& cfg);

/// Candidate retrieval, spatial scoring, cutoff, then sequence ranking.
/// Read-only over the store. Throws DimensionError on a wrong-sized query.
/// `day` is the query's day index; it only matters when cfg.age_weights is set.
PredictionResult predict(const NodeStore& store, const ContextVector& query, const IntentSequence& recent,
                         const PredictorConfig& cfg, std::int64_t day);

}  // namespace intentlab
