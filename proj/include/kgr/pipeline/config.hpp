#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "kgr/embed/model.hpp"
#include "kgr/eval/ranking.hpp"
#include "kgr/linkpred/enrich.hpp"
#include "kgr/rules/miner.hpp"

namespace kgr::pipeline {

/// Everything one pipeline run depends on.
struct PipelineConfig {
  std::filesystem::path train_path;
  std::filesystem::path valid_path;
  std::filesystem::path test_path;
  std::filesystem::path output_dir = "out";

  embed::ModelKind model = embed::ModelKind::TransE;
  embed::TrainingConfig training;
  /// Labels; resolved against the training vocabulary at run time.
  std::vector<std::string> target_relations;
  std::size_t sample_entities = 1000;
  std::size_t sample_relations = 10;
  std::vector<std::size_t> top_k = {50, 500, 5000};
  rules::MinerConfig miner;
  eval::RankingMode mode = eval::RankingMode::raw;
  std::uint64_t seed = 42;
  std::size_t workers = 1;

  /// Applies `key=value`. Unknown keys and malformed values raise ConfigError.
  void set(const std::string& key, const std::string& value);
  /// Copies seed and workers into the nested configs and validates them.
  void finalize();

  /// Sorted `key=value` lines; parseable by load_config.
  std::map<std::string, std::string> entries() const;
  /// FNV-1a over entries() minus output_dir.
  std::uint64_t hash() const;
  /// Same, restricted to what determines the trained model.
  std::uint64_t training_hash() const;
};

/// Line-oriented `key=value`; '#' starts a comment line; blank lines ignored.
void load_config(std::istream& in, PipelineConfig& config, const std::string& source_name = "config");
void load_config(const std::filesystem::path& path, PipelineConfig& config);

void print_config(std::ostream& out, const PipelineConfig& config);

std::string hex_hash(std::uint64_t h);

}  // namespace kgr::pipeline
