#include "intentlab/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "intentlab/error.hpp"

namespace intentlab {

namespace {

struct Scored {
    RankedIntent entry;
    // Pre-activation w / max(d, eps): same order as tanh without saturating.
    double strength = 0.0;
};

bool spatial_before(const Scored& a, const Scored& b) {
    if (a.strength != b.strength) return a.strength > b.strength;
    if (a.entry.weight != b.entry.weight) return a.entry.weight > b.entry.weight;
    return a.entry.node_id < b.entry.node_id;
}

bool sequence_before(const Scored& a, const Scored& b) {
    if (a.entry.seq_similarity != b.entry.seq_similarity) return a.entry.seq_similarity > b.entry.seq_similarity;
    return spatial_before(a, b);
}

}  // namespace

void PredictorConfig::validate() const {
    if (neighbor_count < 1) throw ValidationError("predictor neighbor_count must be >= 1");
    if (!(score_cutoff > 0.0 && score_cutoff < 1.0)) throw ValidationError("score_cutoff must lie in (0, 1)");
    if (!(distance_epsilon > 0.0)) throw ValidationError("distance_epsilon must be > 0");
    if (top_n_output < 1) throw ValidationError("top_n_output must be >= 1");
    if (prefix_cap > 0 && !(prefix_scale >= 0.0 && prefix_scale * static_cast<double>(prefix_cap) <= 1.0)) {
        throw ValidationError("prefix_scale must lie in [0, 1/prefix_cap]");
    }
}

std::optional<IntentId> PredictionResult::top() const {
    if (ranked.empty()) return std::nullopt;
    return ranked.front().intent;
}

std::vector<IntentId> PredictionResult::top_intents(std::size_t n) const {
    std::vector<IntentId> out;
    for (std::size_t i = 0; i < ranked.size() && i < n; ++i) out.push_back(ranked[i].intent);
    return out;
}

double spatial_score(double weight, double distance, double epsilon) {
    return std::tanh(weight / std::max(distance, epsilon));
}

double sequence_similarity(const IntentNode& node, const IntentSequence& recent, const PredictorConfig& cfg) {
    if (recent.empty() || node.sequences.empty()) return kNeutralSimilarity;
    double best = 0.0;
    for (const auto& stored : node.sequences) {
        // An empty stored sequence carries no evidence either way.
        const double sim =
            stored.empty() ? kNeutralSimilarity : jaro_winkler(recent, stored, cfg.prefix_scale, cfg.prefix_cap);
        best = std::max(best, sim);
    }
    return best;
}

PredictionResult predict(const NodeStore& store, const ContextVector& query, const IntentSequence& recent,
                         const PredictorConfig& cfg, std::int64_t day) {
    const std::size_t retrieve = std::max(cfg.neighbor_count, cfg.top_n_output);
    const auto neighbors = store.nearest(query, retrieve);

    std::vector<Scored> candidates;
    std::vector<Scored> extension;
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
        const IntentNode& node = store.node(neighbors[i].id);
        Scored s;
        s.entry.intent = node.intent;
        s.entry.node_id = node.id;
        s.entry.distance = neighbors[i].distance;
        const double weight = cfg.age_weights ? store.effective_weight(node, day) : node.weight;
        s.entry.weight = weight;
        s.entry.spatial_score = spatial_score(weight, neighbors[i].distance, cfg.distance_epsilon);
        s.strength = weight / std::max(neighbors[i].distance, cfg.distance_epsilon);
        s.entry.passed_cutoff = s.entry.spatial_score >= cfg.score_cutoff;
        if (i < cfg.neighbor_count) {
            s.entry.seq_similarity = sequence_similarity(node, recent, cfg);
            candidates.push_back(s);
        } else {
            s.entry.extended = true;
            extension.push_back(s);
        }
    }

    PredictionResult result;
    std::vector<Scored> ordered;
    const bool any_survivor =
        std::any_of(candidates.begin(), candidates.end(), [](const Scored& s) { return s.entry.passed_cutoff; });

    if (cfg.use_sequence && any_survivor) {
        std::vector<Scored> survivors;
        std::vector<Scored> rest;
        for (const auto& s : candidates) (s.entry.passed_cutoff ? survivors : rest).push_back(s);
        std::sort(survivors.begin(), survivors.end(), sequence_before);
        std::sort(rest.begin(), rest.end(), spatial_before);
        ordered = std::move(survivors);
        ordered.insert(ordered.end(), rest.begin(), rest.end());
    } else {
        result.fallback_used = cfg.use_sequence && !candidates.empty();
        ordered = std::move(candidates);
        std::sort(ordered.begin(), ordered.end(), spatial_before);
    }
    std::sort(extension.begin(), extension.end(), spatial_before);
    ordered.insert(ordered.end(), extension.begin(), extension.end());

    std::set<IntentId> seen;
    for (const auto& s : ordered) {
        if (seen.insert(s.entry.intent).second) result.ranked.push_back(s.entry);
    }
    return result;
}

}  // namespace intentlab
