#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "intentlab/error.hpp"
#include "intentlab/predictor.hpp"
#include "oracles.hpp"

using namespace intentlab;

namespace {

IntentNode make_node(NodeId id, std::uint32_t intent, double offset, double weight,
                     std::vector<std::vector<int>> seqs = {}, std::int64_t day = 0) {
    IntentNode n;
    n.id = id;
    n.intent = IntentId{intent};
    n.position = ContextVector{0.0, 1.0, 0.0, 1.0, offset, 0.0};
    n.weight = weight;
    n.last_touch_day = day;
    for (const auto& s : seqs) {
        IntentSequence seq;
        seq.items = oracle::ids(s);
        n.sequences.push_back(seq);
    }
    return n;
}

NodeStore store_of(std::vector<IntentNode> nodes) {
    NodeId next = 1;
    for (const auto& n : nodes) next = std::max(next, n.id + 1);
    return NodeStore::restore({}, {}, 0, next, std::move(nodes));
}

const ContextVector kOrigin{0.0, 1.0, 0.0, 1.0, 0.0, 0.0};

IntentSequence seq_of(std::vector<int> items) {
    IntentSequence s;
    s.items = oracle::ids(items);
    return s;
}

}  // namespace

TEST(SpatialScore, Formula) {
    EXPECT_DOUBLE_EQ(spatial_score(1.0, 0.5, 1e-6), std::tanh(2.0));
    EXPECT_DOUBLE_EQ(spatial_score(2.0, 0.0, 1e-6), std::tanh(2e6));
    // w/d = 1.738 is the smallest ratio clearing the 0.94 cutoff.
    EXPECT_GE(spatial_score(1.0, 1.0 / 1.74, 1e-6), 0.94);
    EXPECT_LT(spatial_score(1.0, 1.0 / 1.73, 1e-6), 0.94);
}

TEST(Predict, EmptyStore) {
    const NodeStore store;
    const auto r = predict(store, kOrigin, {}, {}, 0);
    EXPECT_TRUE(r.empty());
    EXPECT_FALSE(r.top().has_value());
}

TEST(Predict, CutoffKeepsCloseHeavyNode) {
    const NodeStore store = store_of({make_node(1, 10, 0.1, 1.0), make_node(2, 20, 2.0, 1.0)});
    const auto r = predict(store, kOrigin, {}, {}, 0);
    ASSERT_EQ(r.ranked.size(), 2u);
    EXPECT_EQ(r.top()->value, 10u);
    EXPECT_TRUE(r.ranked[0].passed_cutoff);
    EXPECT_FALSE(r.ranked[1].passed_cutoff);
    EXPECT_FALSE(r.fallback_used);
    EXPECT_DOUBLE_EQ(r.ranked[0].seq_similarity, kNeutralSimilarity);
}

TEST(Predict, SequenceReordersSurvivors) {
    const NodeStore store =
        store_of({make_node(1, 10, 0.2, 1.0, {{3, 4}}), make_node(2, 20, 0.3, 1.0, {{5, 6}})});
    PredictorConfig cfg;
    const auto with_seq = predict(store, kOrigin, seq_of({5, 6}), cfg, 0);
    EXPECT_EQ(with_seq.top()->value, 20u);
    EXPECT_DOUBLE_EQ(with_seq.ranked[0].seq_similarity, 1.0);

    const auto no_recent = predict(store, kOrigin, {}, cfg, 0);
    EXPECT_EQ(no_recent.top()->value, 10u);

    cfg.use_sequence = false;
    const auto context_only = predict(store, kOrigin, seq_of({5, 6}), cfg, 0);
    EXPECT_EQ(context_only.top()->value, 10u);
}

TEST(Predict, FallbackRanksByStrength) {
    // Both fail the cutoff; 3/3 beats 1/1.2.
    const NodeStore store = store_of({make_node(1, 10, 1.2, 1.0, {{5}}), make_node(2, 20, 3.0, 3.0)});
    const auto r = predict(store, kOrigin, seq_of({5}), {}, 0);
    EXPECT_TRUE(r.fallback_used);
    EXPECT_EQ(r.top()->value, 20u);
}

TEST(Predict, DeduplicatesIntents) {
    const NodeStore store = store_of({make_node(1, 10, 0.1, 1.0), make_node(2, 10, 0.15, 1.0),
                                      make_node(3, 20, 0.2, 1.0)});
    const auto r = predict(store, kOrigin, {}, {}, 0);
    ASSERT_EQ(r.ranked.size(), 2u);
    EXPECT_EQ(r.ranked[0].node_id, 1u);
    EXPECT_EQ(r.ranked[1].intent.value, 20u);
}

TEST(Predict, ExtendsBeyondNeighborCount) {
    std::vector<IntentNode> nodes;
    for (std::uint32_t i = 0; i < 8; ++i) nodes.push_back(make_node(i + 1, 100 + i, 0.1 * (i + 1), 1.0));
    const NodeStore store = store_of(nodes);
    PredictorConfig cfg;
    cfg.top_n_output = 7;
    const auto r = predict(store, kOrigin, {}, cfg, 0);
    ASSERT_EQ(r.ranked.size(), 7u);
    EXPECT_FALSE(r.ranked[4].extended);
    EXPECT_TRUE(r.ranked[5].extended);
    EXPECT_EQ(r.top_intents(3).size(), 3u);
}

TEST(Predict, AgedWeights) {
    const NodeStore store = store_of({make_node(1, 10, 0.1, 1.0, {}, 0)});
    PredictorConfig cfg;
    EXPECT_DOUBLE_EQ(predict(store, kOrigin, {}, cfg, 3).ranked[0].weight, 1.0);
    cfg.age_weights = true;
    EXPECT_NEAR(predict(store, kOrigin, {}, cfg, 3).ranked[0].weight, 0.216, 1e-12);
}

TEST(Predict, DoesNotMutateStore) {
    const NodeStore store = store_of({make_node(1, 10, 0.1, 1.0, {{1}}), make_node(2, 20, 0.3, 2.0)});
    const auto before = store.nodes();
    predict(store, kOrigin, seq_of({1}), {}, 5);
    EXPECT_EQ(store.nodes(), before);
}

TEST(Predict, DimensionAndConfigErrors) {
    const NodeStore store = store_of({make_node(1, 10, 0.1, 1.0)});
    EXPECT_THROW(predict(store, ContextVector{0.0}, {}, {}, 0), DimensionError);
    PredictorConfig bad;
    bad.score_cutoff = 1.0;
    EXPECT_THROW(bad.validate(), ValidationError);
    bad = {};
    bad.top_n_output = 0;
    EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(Predict, TopOneMatchesBruteForce) {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> off(-2.0, 2.0);
    std::uniform_int_distribution<int> w(1, 4);
    std::uniform_int_distribution<int> sym(0, 5);
    std::uniform_int_distribution<int> len(0, 3);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<IntentNode> nodes;
        for (NodeId id = 1; id <= 50; ++id) {
            std::vector<std::vector<int>> seqs(static_cast<std::size_t>(len(rng)));
            for (auto& s : seqs) {
                s.resize(static_cast<std::size_t>(1 + len(rng)));
                for (auto& x : s) x = sym(rng);
            }
            auto n = make_node(id, static_cast<std::uint32_t>(sym(rng)), 0.0, w(rng), seqs);
            n.position[kLatitude] = off(rng);
            n.position[kLongitude] = off(rng);
            nodes.push_back(n);
        }
        const NodeStore store = store_of(nodes);
        ContextVector q = kOrigin;
        q[kLatitude] = off(rng);
        q[kLongitude] = off(rng);
        std::vector<int> recent_items(static_cast<std::size_t>(len(rng)));
        for (auto& x : recent_items) x = sym(rng);
        const IntentSequence recent = seq_of(recent_items);

        // Reference: score the five nearest, keep the cutoff survivors, pick
        // the best sequence match, ties on strength then weight then id.
        struct Row {
            double sim, strength, weight;
            NodeId id;
            std::uint32_t intent;
        };
        std::vector<Row> pass, all;
        for (const NodeId id : oracle::nearest(store, q, 5)) {
            const IntentNode& n = store.node(id);
            double d = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) d += (q[i] - n.position[i]) * (q[i] - n.position[i]);
            d = std::sqrt(d);
            const double strength = n.weight / std::max(d, 1e-6);
            double sim = 0.5;
            if (!recent.empty() && !n.sequences.empty()) {
                sim = 0.0;
                for (const auto& s : n.sequences) {
                    sim = std::max(sim, oracle::jaro_winkler(oracle::raw(recent.items), oracle::raw(s.items)));
                }
            }
            const Row row{sim, strength, n.weight, id, n.intent.value};
            all.push_back(row);
            if (std::tanh(strength) >= 0.94) pass.push_back(row);
        }
        auto by_strength = [](const Row& a, const Row& b) {
            if (a.strength != b.strength) return a.strength > b.strength;
            if (a.weight != b.weight) return a.weight > b.weight;
            return a.id < b.id;
        };
        std::uint32_t expected;
        if (!pass.empty()) {
            std::sort(pass.begin(), pass.end(), [&](const Row& a, const Row& b) {
                if (a.sim != b.sim) return a.sim > b.sim;
                return by_strength(a, b);
            });
            expected = pass.front().intent;
        } else {
            std::sort(all.begin(), all.end(), by_strength);
            expected = all.front().intent;
        }
        ASSERT_EQ(predict(store, q, recent, {}, 0).top()->value, expected) << "trial " << trial;
    }
}
