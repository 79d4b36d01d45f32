#include "intentlab/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "intentlab/error.hpp"

namespace intentlab {

namespace {

constexpr std::uint8_t kMagic[4] = {'W', 'I', 'M', 'E'};

class Writer {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) { le(v, 2); }
    void u32(std::uint32_t v) { le(v, 4); }
    void u64(std::uint64_t v) { le(v, 8); }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        out_.insert(out_.end(), p, p + n);
    }
    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    void le(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
    std::uint64_t u64() { return le(8); }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::span<const std::uint8_t> bytes(std::size_t n) {
        need(n);
        auto s = in_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    /// Guards count fields against allocating more than the stream could hold.
    std::size_t count(std::uint64_t n, std::size_t min_bytes_each) {
        if (min_bytes_each > 0 && n > remaining() / min_bytes_each) {
            throw SnapshotError(SnapshotError::Kind::Truncated, "snapshot count exceeds stream length");
        }
        return static_cast<std::size_t>(n);
    }
    std::size_t remaining() const { return in_.size() - pos_; }

private:
    void need(std::size_t n) const {
        if (remaining() < n) throw SnapshotError(SnapshotError::Kind::Truncated, "snapshot stream truncated");
    }
    std::uint64_t le(int n) {
        need(static_cast<std::size_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(in_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
        pos_ += static_cast<std::size_t>(n);
        return v;
    }
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const NodeStore& store, const IntentRegistry& registry) {
    Writer w;
    w.bytes(kMagic, sizeof kMagic);
    w.u16(kSnapshotVersion);

    const auto& emb = store.embedding_config();
    w.f64(emb.geo_scale);
    w.f64(emb.time_weight);
    w.f64(emb.week_weight);
    w.u32(static_cast<std::uint32_t>(emb.dims));

    const auto& cfg = store.config();
    w.f64(cfg.decay_k);
    w.f64(cfg.prune_threshold);
    w.f64(cfg.fusion_radius);
    w.u32(static_cast<std::uint32_t>(cfg.neighbor_count));
    w.u32(static_cast<std::uint32_t>(cfg.sequence_capacity));
    w.u8(static_cast<std::uint8_t>(cfg.decay_period));
    w.u8(cfg.drift_enabled ? 1 : 0);
    w.f64(cfg.rebuild_fraction);

    w.i64(store.current_day());
    w.u64(store.next_id());

    w.u32(static_cast<std::uint32_t>(registry.size()));
    for (const auto& label : registry.labels()) {
        w.u32(static_cast<std::uint32_t>(label.size()));
        w.bytes(label.data(), label.size());
    }

    w.u64(store.size());
    for (const auto& [id, node] : store.nodes()) {
        w.u64(id);
        w.u32(node.intent.value);
        for (const double c : node.position.coords()) w.f64(c);
        w.f64(node.weight);
        w.i64(node.last_touch_day);
        w.f64(node.raw_minutes_of_day);
        w.f64(node.raw_minutes_of_week);
        w.f64(node.raw_lat);
        w.f64(node.raw_lon);
        w.u32(static_cast<std::uint32_t>(node.sequences.size()));
        for (const auto& seq : node.sequences) {
            w.i32(seq.window_minutes);
            w.u32(static_cast<std::uint32_t>(seq.items.size()));
            for (const auto item : seq.items) w.u32(item.value);
        }
    }
    return w.take();
}

Snapshot decode_snapshot(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
        throw SnapshotError(SnapshotError::Kind::BadMagic, "not a snapshot (bad magic)");
    }
    r.bytes(sizeof kMagic);
    const std::uint16_t version = r.u16();
    if (version != kSnapshotVersion) {
        throw SnapshotError(SnapshotError::Kind::VersionMismatch,
                            "snapshot version " + std::to_string(version) + " is not supported (expected " +
                                std::to_string(kSnapshotVersion) + ")");
    }

    EmbeddingConfig emb;
    emb.geo_scale = r.f64();
    emb.time_weight = r.f64();
    emb.week_weight = r.f64();
    emb.dims = r.u32();

    StoreConfig cfg;
    cfg.decay_k = r.f64();
    cfg.prune_threshold = r.f64();
    cfg.fusion_radius = r.f64();
    cfg.neighbor_count = r.u32();
    cfg.sequence_capacity = r.u32();
    const std::uint8_t period = r.u8();
    if (period > 1) throw SnapshotError(SnapshotError::Kind::Corrupt, "unknown decay period");
    cfg.decay_period = static_cast<DecayPeriod>(period);
    cfg.drift_enabled = r.u8() != 0;
    cfg.rebuild_fraction = r.f64();

    const std::int64_t current_day = r.i64();
    const NodeId next_id = r.u64();

    IntentRegistry registry;
    const std::size_t labels = r.count(r.u32(), 4);
    for (std::size_t i = 0; i < labels; ++i) {
        const auto len = r.count(r.u32(), 1);
        const auto raw = r.bytes(len);
        const std::string label(raw.begin(), raw.end());
        if (registry.intern(label).value != i) {
            throw SnapshotError(SnapshotError::Kind::Corrupt, "duplicate intent label in snapshot");
        }
    }

    std::vector<IntentNode> nodes;
    const std::size_t node_count = r.count(r.u64(), 8);
    nodes.reserve(node_count);
    for (std::size_t i = 0; i < node_count; ++i) {
        IntentNode node;
        node.id = r.u64();
        node.intent = IntentId{r.u32()};
        if (!registry.contains(node.intent)) {
            throw SnapshotError(SnapshotError::Kind::Corrupt, "node refers to an unknown intent id");
        }
        std::vector<double> coords(r.count(emb.dims, 8));
        for (auto& c : coords) c = r.f64();
        node.position = ContextVector(std::move(coords));
        node.weight = r.f64();
        node.last_touch_day = r.i64();
        node.raw_minutes_of_day = r.f64();
        node.raw_minutes_of_week = r.f64();
        node.raw_lat = r.f64();
        node.raw_lon = r.f64();
        const std::size_t seqs = r.count(r.u32(), 8);
        for (std::size_t s = 0; s < seqs; ++s) {
            IntentSequence seq;
            seq.window_minutes = r.i32();
            const std::size_t len = r.count(r.u32(), 4);
            seq.items.reserve(len);
            for (std::size_t k = 0; k < len; ++k) seq.items.push_back(IntentId{r.u32()});
            node.sequences.push_back(std::move(seq));
        }
        nodes.push_back(std::move(node));
    }
    if (r.remaining() != 0) throw SnapshotError(SnapshotError::Kind::Corrupt, "trailing bytes after snapshot");

    try {
        return Snapshot{NodeStore::restore(emb, cfg, current_day, next_id, std::move(nodes)), std::move(registry)};
    } catch (const SnapshotError&) {
        throw;
    } catch (const Error& e) {
        throw SnapshotError(SnapshotError::Kind::Corrupt, std::string("invalid snapshot contents: ") + e.what());
    }
}

void save_snapshot(const std::filesystem::path& path, const NodeStore& store, const IntentRegistry& registry) {
    const auto bytes = encode_snapshot(store, registry);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw SnapshotError(SnapshotError::Kind::Io, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw SnapshotError(SnapshotError::Kind::Io, "failed writing " + path.string());
}

Snapshot load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SnapshotError(SnapshotError::Kind::Io, "cannot open " + path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_snapshot(bytes);
}

}  // namespace intentlab
