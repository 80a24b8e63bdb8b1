#pragma once

#include <cstdint>

#include "kgr/core/functionality.hpp"
#include "kgr/core/knowledge_graph.hpp"
#include "kgr/core/rational.hpp"
#include "kgr/rules/rule.hpp"

namespace kgr::rules {

/// Exact counts behind the rule quality measures. A prediction is a distinct
/// instantiated head atom whose body is satisfiable in the graph.
struct RuleMetrics {
  std::uint64_t support = 0;        ///< predictions present in the graph
  std::uint64_t body_size = 0;      ///< all predictions (CWA denominator)
  std::uint64_t pca_body_size = 0;  ///< predictions passing the PCA filter
  std::uint64_t head_size = 0;      ///< triples of the head relation

  Rational head_coverage() const;
  /// support / body_size; ContractError when body_size == 0.
  Rational std_confidence() const;
  /// support / pca_body_size; 0 when no prediction passes the PCA filter.
  /// ContractError when body_size == 0.
  Rational pca_confidence() const;

  friend bool operator==(const RuleMetrics&, const RuleMetrics&) = default;
};

struct MetricOptions {
  /// Reject assignments that instantiate some body atom to the head fact.
  bool forbid_head_echo = false;
};

/// Support via the head relation's facts; also defined for rules that are
/// not yet Horn (used to prune partial rules during search).
std::uint64_t support(const KnowledgeGraph& kg, const Rule& rule, const MetricOptions& options = {});

/// Full metrics for a Horn rule whose head is r(X, Y) over two distinct
/// variables. Throws ContractError otherwise.
RuleMetrics evaluate_rule(const KnowledgeGraph& kg, const FunctionalityTable& fun, const Rule& rule,
                          const MetricOptions& options = {});

Rational head_coverage(const KnowledgeGraph& kg, const Rule& rule);
Rational std_confidence(const KnowledgeGraph& kg, const Rule& rule);
Rational pca_confidence(const KnowledgeGraph& kg, const FunctionalityTable& fun, const Rule& rule);

}  // namespace kgr::rules

namespace kgr::rules {

struct MinedRule {
  Rule rule;
  RuleMetrics metrics;
};

}  // namespace kgr::rules
