#include "kgr/rules/metrics.hpp"

#include <algorithm>

#include "kgr/rules/matcher.hpp"

namespace kgr::rules {

Rational RuleMetrics::head_coverage() const {
  if (head_size == 0) throw ContractError("head coverage of a rule with an empty head relation");
  return Rational(support, head_size);
}

Rational RuleMetrics::std_confidence() const {
  if (body_size == 0) throw ContractError("confidence undefined: rule makes no predictions");
  return Rational(support, body_size);
}

Rational RuleMetrics::pca_confidence() const {
  if (body_size == 0) throw ContractError("confidence undefined: rule makes no predictions");
  if (pca_body_size == 0) return Rational(0, 1);
  return Rational(support, pca_body_size);
}

namespace {

void check_head(const Rule& rule) {
  const auto& h = rule.head();
  if (!h.subject.is_variable() || !h.object.is_variable() || h.subject.value == h.object.value)
    throw ContractError("rule head must be r(X, Y) over two distinct variables");
}

// Accepts only assignments where no body atom equals the instantiated head.
MatchVisitor echo_filter(const Rule& rule) {
  return [&rule](const Binding& b) {
    const auto& h = rule.head();
    const Triple head{b[h.subject.value], h.relation, b[h.object.value]};
    for (const auto& a : rule.body()) {
      const EntityId s = a.subject.is_constant() ? a.subject.value : b[a.subject.value];
      const EntityId o = a.object.is_constant() ? a.object.value : b[a.object.value];
      if (Triple{s, a.relation, o} == head) return false;
    }
    return true;
  };
}

// Candidate values for `var`: the smallest value list offered by any body
// atom mentioning it.
std::vector<EntityId> variable_domain(const KnowledgeGraph& kg, const Rule& rule, std::uint32_t var) {
  std::span<const EntityId> best;
  bool have = false;
  for (const auto& a : rule.body()) {
    std::span<const EntityId> cand;
    if (a.subject == Term::var(var)) {
      cand = a.object.is_constant() ? kg.heads(a.relation, a.object.value) : kg.subjects(a.relation);
    } else if (a.object == Term::var(var)) {
      cand = a.subject.is_constant() ? kg.tails(a.subject.value, a.relation) : kg.objects(a.relation);
    } else {
      continue;
    }
    if (!have || cand.size() < best.size()) {
      best = cand;
      have = true;
    }
  }
  return {best.begin(), best.end()};
}

}  // namespace

std::uint64_t support(const KnowledgeGraph& kg, const Rule& rule, const MetricOptions& options) {
  check_head(rule);
  const auto& head = rule.head();
  const auto facts = kg.relation_triples(head.relation);
  if (rule.body().empty()) return facts.size();
  Binding binding(rule.variable_count(), kUnbound);
  const MatchVisitor accept = options.forbid_head_echo ? echo_filter(rule) : MatchVisitor{};
  std::uint64_t count = 0;
  for (const auto& t : facts) {
    binding[head.subject.value] = t.head;
    binding[head.object.value] = t.tail;
    if (exists_match(kg, rule.body(), binding, accept)) ++count;
  }
  return count;
}

RuleMetrics evaluate_rule(const KnowledgeGraph& kg, const FunctionalityTable& fun, const Rule& rule,
                          const MetricOptions& options) {
  check_head(rule);
  if (rule.body().empty() || !rule.is_horn()) throw ContractError("metrics need a Horn rule with a non-empty body");
  const auto& head = rule.head();
  const auto x = head.subject.value;
  const auto y = head.object.value;
  const RelationId r = head.relation;
  const bool subject_functional = fun.has(r) ? fun.at(r).subject_functional : true;

  RuleMetrics m;
  m.head_size = kg.relation_triples(r).size();

  const MatchVisitor accept = options.forbid_head_echo ? echo_filter(rule) : MatchVisitor{};
  Binding binding(rule.variable_count(), kUnbound);
  std::vector<EntityId> ys;
  for (EntityId xv : variable_domain(kg, rule, x)) {
    binding[x] = xv;
    ys.clear();
    for_each_match(kg, rule.body(), binding, [&](const Binding& b) {
      if (!accept || accept(b)) ys.push_back(b[y]);
      return true;
    });
    if (ys.empty()) continue;
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    const auto x_tails = kg.tails(xv, r);
    const bool x_has_fact = !x_tails.empty();
    for (EntityId yv : ys) {
      ++m.body_size;
      if (std::binary_search(x_tails.begin(), x_tails.end(), yv)) ++m.support;
      const bool pca = subject_functional ? x_has_fact : !kg.heads(r, yv).empty();
      if (pca) ++m.pca_body_size;
    }
  }
  binding[x] = kUnbound;
  return m;
}

Rational head_coverage(const KnowledgeGraph& kg, const Rule& rule) {
  const auto size = kg.relation_triples(rule.head().relation).size();
  if (size == 0) throw ContractError("head coverage of a rule with an empty head relation");
  return Rational(support(kg, rule), size);
}

Rational std_confidence(const KnowledgeGraph& kg, const Rule& rule) {
  return evaluate_rule(kg, functionality(kg), rule).std_confidence();
}

Rational pca_confidence(const KnowledgeGraph& kg, const FunctionalityTable& fun, const Rule& rule) {
  return evaluate_rule(kg, fun, rule).pca_confidence();
}

}  // namespace kgr::rules
