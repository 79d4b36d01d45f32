#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "intentlab/engine.hpp"
#include "intentlab/error.hpp"
#include "intentlab/snapshot.hpp"

using namespace intentlab;

namespace {

Engine trained() {
    EngineConfig cfg;
    cfg.embedding.week_weight = 0.2;
    cfg.store.decay_k = 0.7;
    cfg.store.decay_period = DecayPeriod::Weekly;
    Engine engine(cfg);
    const LocalTime start = make_local_time(2021, 3, 1, 0, 0);
    const char* labels[] = {"Check Mail", "Read News", "Call Contact"};
    for (int day = 0; day < 10; ++day) {
        for (int slot = 0; slot < 3; ++slot) {
            const RawContext ctx{start + day * kMinutesPerDay + 420 + slot * 50, 12.9 + 0.01 * slot, 77.6};
            engine.observe(engine.registry().intern(labels[slot]), ctx);
        }
    }
    return engine;
}

void expect_same(const Snapshot& snap, const Engine& engine) {
    EXPECT_EQ(snap.registry, engine.registry());
    EXPECT_EQ(snap.store.nodes(), engine.store().nodes());
    EXPECT_EQ(snap.store.config(), engine.store().config());
    EXPECT_EQ(snap.store.embedding_config(), engine.store().embedding_config());
    EXPECT_EQ(snap.store.current_day(), engine.store().current_day());
    EXPECT_EQ(snap.store.next_id(), engine.store().next_id());
}

}  // namespace

TEST(Snapshot, RoundTripInMemory) {
    const Engine engine = trained();
    const auto bytes = encode_snapshot(engine.store(), engine.registry());
    expect_same(decode_snapshot(bytes), engine);
    EXPECT_EQ(encode_snapshot(decode_snapshot(bytes).store, engine.registry()), bytes);
}

TEST(Snapshot, RoundTripOnDisk) {
    const Engine engine = trained();
    const auto path = std::filesystem::temp_directory_path() / "intentlab_unit.snap";
    save_snapshot(path, engine.store(), engine.registry());
    expect_same(load_snapshot(path), engine);
    std::filesystem::remove(path);
}

TEST(Snapshot, BadMagic) {
    const Engine engine = trained();
    auto bytes = encode_snapshot(engine.store(), engine.registry());
    bytes[0] = 'X';
    try {
        decode_snapshot(bytes);
        FAIL();
    } catch (const SnapshotError& e) {
        EXPECT_EQ(e.kind(), SnapshotError::Kind::BadMagic);
    }
}

TEST(Snapshot, VersionMismatch) {
    const Engine engine = trained();
    auto bytes = encode_snapshot(engine.store(), engine.registry());
    bytes[4] = 99;
    try {
        decode_snapshot(bytes);
        FAIL();
    } catch (const SnapshotError& e) {
        EXPECT_EQ(e.kind(), SnapshotError::Kind::VersionMismatch);
    }
}

TEST(Snapshot, TruncatedAtEveryLength) {
    const Engine engine = trained();
    const auto bytes = encode_snapshot(engine.store(), engine.registry());
    for (std::size_t len = 0; len < bytes.size(); len += 7) {
        EXPECT_THROW(decode_snapshot(std::span(bytes.data(), len)), SnapshotError) << len;
    }
}

TEST(Snapshot, TrailingBytes) {
    const Engine engine = trained();
    auto bytes = encode_snapshot(engine.store(), engine.registry());
    bytes.push_back(0);
    try {
        decode_snapshot(bytes);
        FAIL();
    } catch (const SnapshotError& e) {
        EXPECT_EQ(e.kind(), SnapshotError::Kind::Corrupt);
    }
}

TEST(Snapshot, MissingFile) {
    try {
        load_snapshot("/nonexistent/dir/x.snap");
        FAIL();
    } catch (const SnapshotError& e) {
        EXPECT_EQ(e.kind(), SnapshotError::Kind::Io);
    }
}

TEST(Snapshot, EmptyStore) {
    const NodeStore store;
    const IntentRegistry reg;
    const Snapshot snap = decode_snapshot(encode_snapshot(store, reg));
    EXPECT_TRUE(snap.store.empty());
    EXPECT_EQ(snap.registry.size(), 0u);
}
