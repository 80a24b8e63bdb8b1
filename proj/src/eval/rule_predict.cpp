#include "kgr/eval/rule_predict.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <thread>
#include <tuple>
#include <unordered_map>

#include "kgr/rules/matcher.hpp"

namespace kgr::eval {

RulePredictor::RulePredictor(std::span<const rules::RuleRecord> rules, const KnowledgeGraph& kg)
    : rules_(rules.begin(), rules.end()), by_relation_(kg.relation_count()), kg_(&kg) {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const auto& head = rules_[i].rule.head();
    if (!head.subject.is_variable() || !head.object.is_variable() || !rules_[i].rule.is_horn())
      throw ContractError("rule prediction needs Horn rules with a variable head");
    if (head.relation < by_relation_.size()) by_relation_[head.relation].push_back(i);
  }
}

std::vector<RuleCandidate> RulePredictor::predict(const RuleQuery& query) const {
  if (!has_rules_for(query.relation)) return {};
  std::unordered_map<EntityId, RuleCandidate> best;
  std::vector<EntityId> found;
  for (std::size_t idx : by_relation_[query.relation]) {
    const auto& rec = rules_[idx];
    const auto& head = rec.rule.head();
    const auto bound_var = query.predict_tail ? head.subject.value : head.object.value;
    const auto free_var = query.predict_tail ? head.object.value : head.subject.value;
    rules::Binding binding(rec.rule.variable_count(), rules::kUnbound);
    binding[bound_var] = query.known;
    found.clear();
    rules::for_each_match(*kg_, rec.rule.body(), binding, [&](const rules::Binding& b) {
      found.push_back(b[free_var]);
      return true;
    });
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    for (EntityId e : found) {
      auto [it, inserted] = best.try_emplace(e, RuleCandidate{e, rec.pca_confidence, rec.support});
      auto& c = it->second;
      if (!inserted && std::tie(rec.pca_confidence, rec.support) > std::tie(c.confidence, c.support)) {
        c.confidence = rec.pca_confidence;
        c.support = rec.support;
      }
    }
  }
  std::vector<RuleCandidate> out;
  out.reserve(best.size());
  for (const auto& [e, c] : best) out.push_back(c);
  std::sort(out.begin(), out.end(), [](const RuleCandidate& a, const RuleCandidate& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.support != b.support) return a.support > b.support;
    return a.entity < b.entity;
  });
  return out;
}

std::vector<RuleCandidate> rule_predict(std::span<const rules::RuleRecord> rules, const KnowledgeGraph& kg,
                                        const RuleQuery& query) {
  return RulePredictor(rules, kg).predict(query);
}

std::size_t rule_rank(std::span<const RuleCandidate> candidates, const RuleQuery& query, EntityId truth,
                      const KnowledgeGraph& known, RankingMode mode) {
  std::size_t position = 0;
  for (const auto& c : candidates) {
    if (c.entity == truth) return position + 1;
    if (mode == RankingMode::filtered) {
      const Triple t = query.predict_tail ? Triple{query.known, query.relation, c.entity}
                                          : Triple{c.entity, query.relation, query.known};
      if (known.contains(t)) continue;
    }
    ++position;
  }
  return 0;
}

EvalReport evaluate_rules(std::span<const rules::RuleRecord> rules, const KnowledgeGraph& body_graph,
                          const DatasetSplit& split, RankingMode mode, std::size_t workers) {
  if (split.test.empty()) throw ConfigError("cannot evaluate on an empty test set");
  if (rules.empty()) return report_from_ranks(std::vector<RankPair>(split.test.size()), mode);
  const RulePredictor predictor(rules, body_graph);
  const KnowledgeGraph known = mode == RankingMode::filtered ? split.all_known() : KnowledgeGraph();
  std::vector<RankPair> ranks(split.test.size());
  workers = std::max<std::size_t>(1, std::min(workers, ranks.size()));
  auto run = [&](std::size_t w) {
    for (std::size_t i = w; i < ranks.size(); i += workers) {
      const Triple& t = split.test[i];
      const RuleQuery tail_q{t.relation, t.head, true};
      const RuleQuery head_q{t.relation, t.tail, false};
      ranks[i].tail = rule_rank(predictor.predict(tail_q), tail_q, t.tail, known, mode);
      ranks[i].head = rule_rank(predictor.predict(head_q), head_q, t.head, known, mode);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& th : threads) th.join();
  }
  return report_from_ranks(ranks, mode);
}

std::vector<RulePrediction> apply_rules(std::span<const rules::RuleRecord> rules, const KnowledgeGraph& kg) {
  std::map<Triple, RulePrediction> best;
  for (const auto& rec : rules) {
    const auto& head = rec.rule.head();
    if (!rec.rule.is_horn()) throw ContractError("apply_rules needs Horn rules");
    std::vector<std::uint32_t> projection;
    if (head.subject.is_variable()) projection.push_back(head.subject.value);
    if (head.object.is_variable()) projection.push_back(head.object.value);
    for (const auto& row : rules::match(kg, rec.rule.body(), projection)) {
      std::size_t i = 0;
      const EntityId h = head.subject.is_variable() ? row[i++] : head.subject.value;
      const EntityId t = head.object.is_variable() ? row[i] : head.object.value;
      const Triple tr{h, head.relation, t};
      if (kg.contains(tr)) continue;
      auto [it, inserted] = best.try_emplace(tr, RulePrediction{tr, rec.pca_confidence, rec.support});
      auto& p = it->second;
      if (!inserted && std::tie(rec.pca_confidence, rec.support) > std::tie(p.confidence, p.support)) {
        p.confidence = rec.pca_confidence;
        p.support = rec.support;
      }
    }
  }
  std::vector<RulePrediction> out;
  out.reserve(best.size());
  for (const auto& [t, p] : best) out.push_back(p);
  std::stable_sort(out.begin(), out.end(), [](const RulePrediction& a, const RulePrediction& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    return a.support > b.support;
  });
  return out;
}

void write_predictions(std::ostream& out, std::span<const RulePrediction> predictions, const Vocabulary& vocab) {
  char buf[32];
  for (const auto& p : predictions) {
    std::snprintf(buf, sizeof buf, "%.17g", p.confidence);
    out << vocab.entity_label(p.triple.head) << '\t' << vocab.relation_label(p.triple.relation) << '\t'
        << vocab.entity_label(p.triple.tail) << '\t' << buf << '\t' << p.support << '\n';
  }
}

}  // namespace kgr::eval
