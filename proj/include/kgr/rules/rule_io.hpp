#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgr/core/vocabulary.hpp"
#include "kgr/rules/metrics.hpp"
#include "kgr/rules/rule.hpp"

namespace kgr::rules {

class RuleSyntaxError : public DataError {
 public:
  RuleSyntaxError(std::size_t position, const std::string& what)
      : DataError("rule syntax error at position " + std::to_string(position) + ": " + what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// `?a <rel> ?b ?b <rel2> ?c => ?a <rel3> ?c`. Variables are lettered a, b,
/// c, ... in order of first appearance; constants are written `<label>`.
/// Body atoms come in the order giving the smallest text, so the result
/// depends on labels only, not on id assignment.
std::string format_rule(const Rule& rule, const Vocabulary& vocab);

/// Inverse of format_rule. Labels are resolved against `vocab`; an unknown
/// label raises VocabularyError. Whitespace runs between tokens are accepted.
Rule parse_rule(std::string_view text, const Vocabulary& vocab);

/// One line of a rules file.
struct RuleRecord {
  Rule rule;
  std::uint64_t support = 0;
  double head_coverage = 0.0;
  double std_confidence = 0.0;
  double pca_confidence = 0.0;
};

RuleRecord to_record(const MinedRule& mined);

/// `rule<TAB>support<TAB>head_coverage<TAB>std_conf<TAB>pca_conf` per line.
/// `header` lines are written first, each prefixed with "# ".
void write_rules_tsv(std::ostream& out, std::span<const RuleRecord> rules, const Vocabulary& vocab,
                     std::span<const std::string> header = {});
/// Lines starting with '#' and blank lines are skipped.
std::vector<RuleRecord> read_rules_tsv(std::istream& in, const Vocabulary& vocab,
                                       const std::string& source_name = "rules");

/// Sorts by formatted rule text; the canonical output order.
void sort_canonical(std::vector<RuleRecord>& rules, const Vocabulary& vocab);

}  // namespace kgr::rules
