#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "intentlab/nodestore.hpp"
#include "intentlab/seqmetric.hpp"

namespace intentlab {

inline constexpr std::uint16_t kSnapshotVersion = 1;

/// Everything needed to resume a user's engine: the node store and the
/// intent labels its ids refer to.
struct Snapshot {
    NodeStore store;
    IntentRegistry registry;
};

/// Versioned little-endian binary encoding; layout documented in docs/formats.md.
std::vector<std::uint8_t> encode_snapshot(const NodeStore& store, const IntentRegistry& registry);

/// Throws SnapshotError (BadMagic, VersionMismatch, Truncated, Corrupt).
Snapshot decode_snapshot(std::span<const std::uint8_t> bytes);

void save_snapshot(const std::filesystem::path& path, const NodeStore& store, const IntentRegistry& registry);
Snapshot load_snapshot(const std::filesystem::path& path);

}  // namespace intentlab
