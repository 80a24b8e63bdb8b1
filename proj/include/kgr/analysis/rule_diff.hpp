#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "kgr/core/knowledge_graph.hpp"
#include "kgr/rules/rule_io.hpp"

namespace kgr::analysis {

/// Before/after rule sets split by canonical rule text.
struct RuleDiff {
  std::vector<rules::RuleRecord> before;
  std::vector<rules::RuleRecord> after;
  std::vector<rules::RuleRecord> new_rules;  ///< after \ before
  std::vector<rules::RuleRecord> dropped;    ///< before \ after
  std::vector<rules::RuleRecord> same;       ///< before ∩ after (records taken from `before`)

  bool identities_hold() const {
    return after.size() == same.size() + new_rules.size() && before.size() == same.size() + dropped.size();
  }
};

/// Every list in the result is in canonical order. Duplicate texts within
/// one input collapse to their first occurrence.
RuleDiff diff_rules(std::span<const rules::RuleRecord> before, std::span<const rules::RuleRecord> after,
                    const Vocabulary& vocab);

struct CategorySummary {
  std::size_t count = 0;
  /// Absent for an empty category.
  std::optional<double> mean_std_confidence;
  std::optional<double> mean_pca_confidence;
};

/// Metrics of each category re-measured on its reference graph:
/// before/dropped/same on the original graph, after/new on the enriched one.
struct ConfidenceSummary {
  CategorySummary before;
  CategorySummary after;
  CategorySummary new_rules;
  CategorySummary dropped;
  CategorySummary same;
  /// The re-measured records backing each category.
  RuleDiff rescored;
};

ConfidenceSummary summarize_confidence(const RuleDiff& diff, const KnowledgeGraph& original,
                                       const KnowledgeGraph& enriched);

/// Plain means over a record list (no re-measurement).
CategorySummary summarize_records(std::span<const rules::RuleRecord> records);

/// Counts, the two partition identities, and per-category means with
/// two-decimal rounding ("-" for absent means).
void write_summary(std::ostream& out, const ConfidenceSummary& summary, std::span<const std::string> header = {});

}  // namespace kgr::analysis
