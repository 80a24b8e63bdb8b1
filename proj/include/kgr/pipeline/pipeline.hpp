#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "kgr/analysis/rule_diff.hpp"
#include "kgr/core/triple_io.hpp"
#include "kgr/embed/model.hpp"
#include "kgr/eval/ranking.hpp"
#include "kgr/pipeline/config.hpp"

namespace kgr::pipeline {

struct StageTiming {
  std::string name;
  double seconds = 0.0;
};

struct TopKOutcome {
  std::size_t k = 0;
  std::size_t candidate_count = 0;
  std::size_t added_count = 0;
  analysis::ConfidenceSummary summary;
  eval::EvalReport rules_after;
};

struct PipelineResult {
  std::uint64_t config_hash = 0;
  bool resumed_model = false;
  std::vector<double> epoch_loss;
  std::size_t rules_before = 0;
  eval::EvalReport embeddings;
  eval::EvalReport rules_before_report;
  std::vector<TopKOutcome> per_k;
  std::vector<StageTiming> timings;
};

struct RunOptions {
  /// Reuse `model.ckpt` when its header matches the training configuration.
  bool resume = false;
  /// Progress lines; null for silence.
  std::ostream* log = nullptr;
};

/// Output layout under config.output_dir:
///
///   config.txt  manifest.txt  model.ckpt  loss.csv
///   rules_before.tsv  eval_embeddings.txt  eval_rules_before.txt
///   topk-<k>/added.tsv  enriched_train.tsv  rules_after.tsv
///             rules_new.tsv  rules_dropped.tsv  rules_same.tsv
///             summary.txt  eval_rules_after.txt
///
/// A failing stage rethrows with the stage name prefixed (same error
/// class) after writing a manifest of the stages completed so far.
PipelineResult run_pipeline(const PipelineConfig& config, const RunOptions& options = {});

/// Loads train/valid/test from the configured paths.
DatasetSplit load_pipeline_data(const PipelineConfig& config);

/// Header lines carried by every pipeline output.
std::vector<std::string> output_header(const PipelineConfig& config);

}  // namespace kgr::pipeline
