#include "intentlab/engine.hpp"

#include <algorithm>

#include "intentlab/error.hpp"

namespace intentlab {

void EngineConfig::validate() const {
    embedding.validate();
    store.validate();
    predictor.validate();
    if (window_minutes < 0) throw ValidationError("window_minutes must be >= 0");
}

Engine::Engine(EngineConfig config) : config_(config), store_(config.embedding, config.store) {
    config_.validate();
}

Engine::Engine(EngineConfig config, NodeStore store, IntentRegistry registry)
    : config_(config), store_(std::move(store)), registry_(std::move(registry)) {
    config_.embedding = store_.embedding_config();
    config_.store = store_.config();
    config_.validate();
}

IntentSequence Engine::recent(LocalTime at) const {
    // History may run past `at` when querying an earlier instant; only the prefix counts.
    const auto end = std::upper_bound(history_.begin(), history_.end(), at,
                                      [](LocalTime t, const TimedIntent& e) { return t < e.time; });
    return build_sequence(std::span<const TimedIntent>(history_.data(), static_cast<std::size_t>(end - history_.begin())),
                          at, config_.window_minutes);
}

PredictionResult Engine::predict(const RawContext& context) const { return predict(context, recent(context.time)); }

PredictionResult Engine::predict(const RawContext& context, const IntentSequence& recent_seq) const {
    return intentlab::predict(store_, embed(context, config_.embedding), recent_seq, config_.predictor,
                              day_index(context.time));
}

ObserveOutcome Engine::observe(IntentId intent, const RawContext& context) {
    if (!registry_.contains(intent)) throw ValidationError("intent id not issued by this engine's registry");
    if (!history_.empty() && context.time < history_.back().time) {
        throw ValidationError("observation at " + format_local_time(context.time) + " precedes " +
                              format_local_time(history_.back().time));
    }
    const ContextVector position = embed(context, config_.embedding);
    const IntentSequence preceding = recent(context.time);
    const auto outcome = store_.observe(intent, position, context, preceding, day_index(context.time));

    history_.push_back({intent, context.time});
    const auto horizon = context.time + (-static_cast<std::int64_t>(config_.window_minutes));
    const auto keep = std::find_if(history_.begin(), history_.end(),
                                   [&](const TimedIntent& e) { return e.time >= horizon; });
    history_.erase(history_.begin(), keep);
    return outcome;
}

}  // namespace intentlab
