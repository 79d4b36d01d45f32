#pragma once

#include <vector>

#include "intentlab/embedding.hpp"
#include "intentlab/nodestore.hpp"
#include "intentlab/predictor.hpp"
#include "intentlab/seqmetric.hpp"

namespace intentlab {

struct EngineConfig {
    EmbeddingConfig embedding;
    StoreConfig store;
    PredictorConfig predictor;
    /// Recency bound for preceding-intent sequences.
    int window_minutes = kDefaultWindowMinutes;

    void validate() const;

    friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

/// One user's prediction engine: embeds contexts, keeps the recent-intent
/// window, and drives the node store and predictor. Not thread-safe.
class Engine {
public:
    explicit Engine(EngineConfig config = {});
    /// Resumes from persisted state; `config.embedding`/`config.store` are
    /// replaced by the store's own.
    Engine(EngineConfig config, NodeStore store, IntentRegistry registry);

    const EngineConfig& config() const noexcept { return config_; }
    IntentRegistry& registry() noexcept { return registry_; }
    const IntentRegistry& registry() const noexcept { return registry_; }
    const NodeStore& store() const noexcept { return store_; }

    /// Intents observed within the window before `at`, most recent first.
    IntentSequence recent(LocalTime at) const;

    PredictionResult predict(const RawContext& context) const;
    PredictionResult predict(const RawContext& context, const IntentSequence& recent) const;

    /// Learns one event. Throws ValidationError when `context` precedes the
    /// previous observation.
    ObserveOutcome observe(IntentId intent, const RawContext& context);

private:
    EngineConfig config_;
    NodeStore store_;
    IntentRegistry registry_;
    std::vector<TimedIntent> history_;
};

}  // namespace intentlab
