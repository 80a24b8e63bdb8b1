#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>

#include "kgr/core/triple_io.hpp"
#include "kgr/embed/model.hpp"

namespace kgr::eval {

enum class RankingMode { raw, filtered };

std::string_view mode_name(RankingMode mode);
RankingMode parse_mode(std::string_view name);

struct EvalReport {
  double hits1 = 0.0;
  double hits3 = 0.0;
  double hits10 = 0.0;
  double mrr = 0.0;
  /// Rank observations: two (head and tail) per test triple.
  std::size_t query_count = 0;
  RankingMode mode = RankingMode::raw;
};

/// Head and tail rank of one test triple. 0 means "not ranked", which
/// contributes nothing to Hits@k or MRR.
struct RankPair {
  std::size_t head = 0;
  std::size_t tail = 0;
};

/// rank = 1 + #entities scoring strictly higher + #entities with an equal
/// score and a smaller id. In filtered mode competitors forming a triple in
/// `known` are skipped.
RankPair embed_rank(const embed::Scorer& scorer, const KnowledgeGraph& known, const Triple& test, RankingMode mode);

/// Averages over the 2|test| observations: Hits@k counts ranks in [1, k],
/// MRR sums 1/rank.
EvalReport report_from_ranks(std::span<const RankPair> ranks, RankingMode mode);

/// Throws ConfigError on an empty test set.
EvalReport evaluate_embeddings(const embed::ModelParams& params, const DatasetSplit& split, RankingMode mode,
                               std::size_t workers = 1);

/// hits@1=..., hits@3=..., hits@10=..., mrr=..., mode=..., n_queries=...
void write_report(std::ostream& out, const EvalReport& report);

}  // namespace kgr::eval
