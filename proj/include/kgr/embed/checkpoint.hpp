#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "kgr/embed/model.hpp"

namespace kgr::embed {

/// Binary checkpoint, all integers and floats little-endian:
///
///   magic "KGRM" | u32 version | u32 kind | u32 reserved
///   u64 dim | u64 entity_count | u64 relation_count | u64 seed | u64 config_hash
///   f64 entity table | f64 relation table
///   u64 FNV-1a checksum of every preceding byte
struct CheckpointHeader {
  std::uint32_t version = 1;
  ModelKind kind = ModelKind::TransE;
  std::uint64_t dim = 0;
  std::uint64_t entity_count = 0;
  std::uint64_t relation_count = 0;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
};

/// What the caller's vocabulary and configuration require of a checkpoint.
struct CheckpointExpectation {
  std::optional<ModelKind> kind;
  std::optional<std::uint64_t> entity_count;
  std::optional<std::uint64_t> relation_count;
  std::optional<std::uint64_t> config_hash;
};

void save_model(std::ostream& out, const ModelParams& params, std::uint64_t config_hash = 0);
void save_model(const std::filesystem::path& path, const ModelParams& params, std::uint64_t config_hash = 0);

/// Throws DataError on a bad magic, checksum, truncation or expectation mismatch.
ModelParams load_model(std::istream& in, const CheckpointExpectation& expect = {},
                       CheckpointHeader* header_out = nullptr);
ModelParams load_model(const std::filesystem::path& path, const CheckpointExpectation& expect = {},
                       CheckpointHeader* header_out = nullptr);

/// Header only; checksum is not verified.
CheckpointHeader read_checkpoint_header(const std::filesystem::path& path);

}  // namespace kgr::embed
