#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "kgr/core/triple_io.hpp"
#include "kgr/eval/ranking.hpp"
#include "kgr/rules/rule_io.hpp"

namespace kgr::eval {

/// (known, r, ?) when `predict_tail`, otherwise (?, r, known).
struct RuleQuery {
  RelationId relation = 0;
  EntityId known = 0;
  bool predict_tail = true;
};

struct RuleCandidate {
  EntityId entity = 0;
  double confidence = 0.0;  ///< max PCA confidence over proposing rules
  std::uint64_t support = 0;  ///< support of that best rule
};

/// Applies rules grouped by head relation. A candidate's key is the
/// lexicographic max of (pca confidence, support) over the rules proposing
/// it; candidates are ordered by that key descending, then entity id.
class RulePredictor {
 public:
  RulePredictor(std::span<const rules::RuleRecord> rules, const KnowledgeGraph& kg);

  std::vector<RuleCandidate> predict(const RuleQuery& query) const;
  bool has_rules_for(RelationId r) const { return r < by_relation_.size() && !by_relation_[r].empty(); }

 private:
  std::vector<rules::RuleRecord> rules_;
  std::vector<std::vector<std::size_t>> by_relation_;
  const KnowledgeGraph* kg_;
};

std::vector<RuleCandidate> rule_predict(std::span<const rules::RuleRecord> rules, const KnowledgeGraph& kg,
                                        const RuleQuery& query);

/// Rank of `truth` among ordered candidates (1-based); 0 when absent. In
/// filtered mode candidates forming a known triple are skipped.
std::size_t rule_rank(std::span<const RuleCandidate> candidates, const RuleQuery& query, EntityId truth,
                      const KnowledgeGraph& known, RankingMode mode);

/// Hits@k/MRR of rule-based prediction on split.test. Rule bodies are
/// evaluated against `body_graph`. No rules gives an all-zero report.
EvalReport evaluate_rules(std::span<const rules::RuleRecord> rules, const KnowledgeGraph& body_graph,
                          const DatasetSplit& split, RankingMode mode, std::size_t workers = 1);

struct RulePrediction {
  Triple triple;
  double confidence = 0.0;
  std::uint64_t support = 0;
};

/// Every head instantiation of every rule that is not already in `kg`,
/// scored like RulePredictor; best first, ties by (head, relation, tail).
std::vector<RulePrediction> apply_rules(std::span<const rules::RuleRecord> rules, const KnowledgeGraph& kg);

/// `head<TAB>relation<TAB>tail<TAB>confidence<TAB>support`.
void write_predictions(std::ostream& out, std::span<const RulePrediction> predictions, const Vocabulary& vocab);

}  // namespace kgr::eval
