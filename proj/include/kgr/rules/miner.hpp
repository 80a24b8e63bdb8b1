#pragma once

#include <cstdint>
#include <vector>

#include "kgr/core/knowledge_graph.hpp"
#include "kgr/rules/metrics.hpp"
#include "kgr/rules/rule.hpp"

namespace kgr::rules {

struct MinerConfig {
  std::size_t max_body_atoms = 2;
  std::uint64_t min_support = 10;
  double min_head_coverage = 0.01;
  double min_pca_confidence = 0.1;
  /// Allow instantiated body atoms r(X, c) / r(c, X).
  bool allow_constants = false;
  bool forbid_head_echo = false;
  std::size_t workers = 1;

  void validate() const;
};

/// One refinement step: every rule obtained by adding a dangling atom (one
/// existing variable, one fresh one) or a closing atom (two distinct existing
/// variables). Never repeats an atom already in the rule. Instantiated atoms
/// are not produced here; see mine_rules.
std::vector<Rule> refine(const Rule& rule, std::size_t relation_count);

/// Every closed, constant-free Horn rule with 1..max_body_atoms body atoms,
/// head r(a, b), in key order. Independent of any graph.
std::vector<Rule> enumerate_closed_rules(std::size_t relation_count, std::size_t max_body_atoms);

/// Breadth-first refinement search from single-atom heads. Partial rules are
/// pruned on support and head coverage (both anti-monotone under
/// refinement); closed Horn rules passing all thresholds are returned sorted
/// by formatted rule text. Rules with zero support are never reported.
std::vector<MinedRule> mine_rules(const KnowledgeGraph& kg, const MinerConfig& config);

}  // namespace kgr::rules
