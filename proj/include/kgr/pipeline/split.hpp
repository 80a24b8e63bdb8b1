#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "kgr/core/types.hpp"

namespace kgr::pipeline {

struct SplitRatios {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;
};

struct TripleSplit {
  std::vector<Triple> train;
  std::vector<Triple> valid;
  std::vector<Triple> test;
  /// Rows moved from valid/test to train to keep entity/relation coverage.
  std::size_t moved_to_train = 0;
};

/// Shuffles the distinct triples and cuts them by `ratios`, then moves every
/// valid/test triple whose head, relation or tail does not occur in train
/// over to train. Ratios must be non-negative and sum to 1 (ConfigError). A
/// part with a non-zero ratio that ends up empty raises DataError.
TripleSplit split_triples(std::vector<Triple> triples, const SplitRatios& ratios, std::uint64_t seed);

/// Whether every entity and relation of valid and test occurs in train.
bool coverage_holds(const TripleSplit& split);

}  // namespace kgr::pipeline
