#include "kgr/analysis/rule_diff.hpp"

#include <cstdio>
#include <map>
#include <ostream>

#include "kgr/core/functionality.hpp"
#include "kgr/rules/metrics.hpp"

namespace kgr::analysis {

namespace {

std::map<std::string, const rules::RuleRecord*> by_text(std::span<const rules::RuleRecord> records,
                                                        const Vocabulary& vocab) {
  std::map<std::string, const rules::RuleRecord*> out;
  for (const auto& r : records) out.try_emplace(rules::format_rule(r.rule, vocab), &r);
  return out;
}

std::vector<rules::RuleRecord> values(const std::map<std::string, const rules::RuleRecord*>& m) {
  std::vector<rules::RuleRecord> out;
  out.reserve(m.size());
  for (const auto& [text, rec] : m) out.push_back(*rec);
  return out;
}

// Re-measures every record on `kg`. Rules that make no prediction there keep
// zero confidences and are left out of the means.
std::vector<rules::RuleRecord> rescore(std::span<const rules::RuleRecord> records, const KnowledgeGraph& kg,
                                       const FunctionalityTable& fun, std::vector<bool>& defined) {
  std::vector<rules::RuleRecord> out;
  for (const auto& r : records) {
    const auto m = rules::evaluate_rule(kg, fun, r.rule);
    rules::RuleRecord rec{r.rule, m.support, 0.0, 0.0, 0.0};
    if (m.head_size > 0) rec.head_coverage = m.head_coverage().to_double();
    defined.push_back(m.body_size > 0);
    if (m.body_size > 0) {
      rec.std_confidence = m.std_confidence().to_double();
      rec.pca_confidence = m.pca_confidence().to_double();
    }
    out.push_back(rec);
  }
  return out;
}

CategorySummary summarize(std::span<const rules::RuleRecord> records, const std::vector<bool>& defined) {
  CategorySummary s;
  s.count = records.size();
  double sum_std = 0.0, sum_pca = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!defined[i]) continue;
    sum_std += records[i].std_confidence;
    sum_pca += records[i].pca_confidence;
    ++n;
  }
  if (n > 0) {
    s.mean_std_confidence = sum_std / static_cast<double>(n);
    s.mean_pca_confidence = sum_pca / static_cast<double>(n);
  }
  return s;
}

}  // namespace

RuleDiff diff_rules(std::span<const rules::RuleRecord> before, std::span<const rules::RuleRecord> after,
                    const Vocabulary& vocab) {
  const auto b = by_text(before, vocab);
  const auto a = by_text(after, vocab);
  RuleDiff diff;
  diff.before = values(b);
  diff.after = values(a);
  for (const auto& [text, rec] : a) {
    if (!b.contains(text)) diff.new_rules.push_back(*rec);
  }
  for (const auto& [text, rec] : b) {
    if (a.contains(text)) {
      diff.same.push_back(*rec);
    } else {
      diff.dropped.push_back(*rec);
    }
  }
  return diff;
}

CategorySummary summarize_records(std::span<const rules::RuleRecord> records) {
  return summarize(records, std::vector<bool>(records.size(), true));
}

ConfidenceSummary summarize_confidence(const RuleDiff& diff, const KnowledgeGraph& original,
                                       const KnowledgeGraph& enriched) {
  const auto fun_original = functionality(original);
  const auto fun_enriched = functionality(enriched);
  ConfidenceSummary s;
  auto run = [&](const std::vector<rules::RuleRecord>& in, const KnowledgeGraph& kg, const FunctionalityTable& fun,
                 std::vector<rules::RuleRecord>& out, CategorySummary& summary) {
    std::vector<bool> defined;
    out = rescore(in, kg, fun, defined);
    summary = summarize(out, defined);
  };
  run(diff.before, original, fun_original, s.rescored.before, s.before);
  run(diff.dropped, original, fun_original, s.rescored.dropped, s.dropped);
  run(diff.same, original, fun_original, s.rescored.same, s.same);
  run(diff.after, enriched, fun_enriched, s.rescored.after, s.after);
  run(diff.new_rules, enriched, fun_enriched, s.rescored.new_rules, s.new_rules);
  return s;
}

void write_summary(std::ostream& out, const ConfidenceSummary& summary, std::span<const std::string> header) {
  for (const auto& h : header) out << "# " << h << '\n';
  auto mean = [](const std::optional<double>& v) -> std::string {
    if (!v) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *v);
    return buf;
  };
  const std::pair<const char*, const CategorySummary*> rows[] = {{"before", &summary.before},
                                                                 {"after", &summary.after},
                                                                 {"new", &summary.new_rules},
                                                                 {"dropped", &summary.dropped},
                                                                 {"same", &summary.same}};
  for (const auto& [name, c] : rows) {
    out << name << "_count=" << c->count << '\n'
        << name << "_std_conf=" << mean(c->mean_std_confidence) << '\n'
        << name << "_pca_conf=" << mean(c->mean_pca_confidence) << '\n';
  }
  const bool after_ok = summary.after.count == summary.same.count + summary.new_rules.count;
  const bool before_ok = summary.before.count == summary.same.count + summary.dropped.count;
  out << "identity_after=" << summary.after.count << "=" << summary.same.count << "+" << summary.new_rules.count
      << (after_ok ? " ok" : " VIOLATED") << '\n'
      << "identity_before=" << summary.before.count << "=" << summary.same.count << "+" << summary.dropped.count
      << (before_ok ? " ok" : " VIOLATED") << '\n';
}

}  // namespace kgr::analysis
