#include "kgr/rules/miner.hpp"

#include <algorithm>
#include <thread>
#include <unordered_set>

#include "kgr/core/functionality.hpp"
#include "kgr/rules/rule_io.hpp"

namespace kgr::rules {

void MinerConfig::validate() const {
  if (max_body_atoms == 0) throw ConfigError("max_body_atoms must be >= 1");
  if (max_body_atoms > 8) throw ConfigError("max_body_atoms above 8 is not supported");
  if (!(min_head_coverage >= 0.0 && min_head_coverage <= 1.0)) throw ConfigError("min_head_coverage must be in [0,1]");
  if (!(min_pca_confidence >= 0.0 && min_pca_confidence <= 1.0))
    throw ConfigError("min_pca_confidence must be in [0,1]");
  if (workers == 0) throw ConfigError("workers must be >= 1");
}

namespace {

bool contains_atom(const Rule& rule, const Atom& atom) {
  if (rule.head() == atom) return true;
  return std::find(rule.body().begin(), rule.body().end(), atom) != rule.body().end();
}

Rule with_atom(const Rule& rule, const Atom& atom) {
  auto body = rule.body();
  body.push_back(atom);
  return Rule(std::move(body), rule.head());
}

// A rule with d dangling variables and k atoms still to add can be closed
// only if d <= 2k (one closing atom settles at most two variables).
bool closable(const Rule& rule, std::size_t max_body) {
  const std::size_t left = max_body - rule.body().size();
  return rule.dangling_variables() <= 2 * left;
}

Rule head_rule(RelationId r) { return Rule({}, Atom{r, Term::var(0), Term::var(1)}); }

}  // namespace

std::vector<Rule> refine(const Rule& rule, std::size_t relation_count) {
  std::vector<Rule> out;
  const auto vars = static_cast<std::uint32_t>(rule.variable_count());
  const Term fresh = Term::var(vars);
  for (RelationId r = 0; r < relation_count; ++r) {
    for (std::uint32_t v = 0; v < vars; ++v) {
      for (const Atom& a : {Atom{r, Term::var(v), fresh}, Atom{r, fresh, Term::var(v)}}) {
        out.push_back(with_atom(rule, a));
      }
      for (std::uint32_t w = 0; w < vars; ++w) {
        if (w == v) continue;
        const Atom a{r, Term::var(v), Term::var(w)};
        if (!contains_atom(rule, a)) out.push_back(with_atom(rule, a));
      }
    }
  }
  return out;
}

std::vector<Rule> enumerate_closed_rules(std::size_t relation_count, std::size_t max_body_atoms) {
  std::vector<Rule> result;
  std::unordered_set<std::string> seen;
  std::vector<Rule> frontier;
  for (RelationId r = 0; r < relation_count; ++r) frontier.push_back(head_rule(r));
  for (std::size_t depth = 0; depth < max_body_atoms; ++depth) {
    std::vector<Rule> next;
    for (const auto& rule : frontier) {
      for (auto& child : refine(rule, relation_count)) {
        if (!closable(child, max_body_atoms) || !seen.insert(child.key()).second) continue;
        if (child.is_closed()) result.push_back(child);
        next.push_back(std::move(child));
      }
    }
    frontier = std::move(next);
  }
  std::sort(result.begin(), result.end(), [](const Rule& a, const Rule& b) { return a.key() < b.key(); });
  return result;
}

namespace {

struct Candidate {
  Rule rule;
  bool keep = false;  // passes support/coverage: stays in the frontier
  bool emit = false;
  RuleMetrics metrics;
};

template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

// Instantiated refinements r(X, c) / r(c, X) for every constant that keeps
// the rule's support above the threshold.
std::vector<Rule> refine_with_constants(const KnowledgeGraph& kg, const Rule& rule, const MinerConfig& config,
                                        const MetricOptions& options) {
  std::vector<Rule> out;
  const auto vars = static_cast<std::uint32_t>(rule.variable_count());
  for (RelationId r = 0; r < kg.relation_count(); ++r) {
    for (std::uint32_t v = 0; v < vars; ++v) {
      for (EntityId c : kg.objects(r)) {
        const Atom a{r, Term::var(v), Term::constant(c)};
        if (contains_atom(rule, a)) continue;
        Rule child = with_atom(rule, a);
        if (support(kg, child, options) >= std::max<std::uint64_t>(config.min_support, 1)) out.push_back(child);
      }
      for (EntityId c : kg.subjects(r)) {
        const Atom a{r, Term::constant(c), Term::var(v)};
        if (contains_atom(rule, a)) continue;
        Rule child = with_atom(rule, a);
        if (support(kg, child, options) >= std::max<std::uint64_t>(config.min_support, 1)) out.push_back(child);
      }
    }
  }
  return out;
}

}  // namespace

std::vector<MinedRule> mine_rules(const KnowledgeGraph& kg, const MinerConfig& config) {
  config.validate();
  const auto fun = functionality(kg);
  const MetricOptions options{config.forbid_head_echo};

  std::vector<Rule> frontier;
  for (RelationId r = 0; r < kg.relation_count(); ++r) {
    const auto size = kg.relation_triples(r).size();
    if (size == 0 || size < config.min_support) continue;
    frontier.push_back(head_rule(r));
  }

  std::vector<MinedRule> mined;
  std::unordered_set<std::string> seen;
  for (std::size_t depth = 0; depth < config.max_body_atoms && !frontier.empty(); ++depth) {
    std::vector<Candidate> candidates;
    for (const auto& rule : frontier) {
      auto children = refine(rule, kg.relation_count());
      if (config.allow_constants) {
        auto inst = refine_with_constants(kg, rule, config, options);
        children.insert(children.end(), std::make_move_iterator(inst.begin()), std::make_move_iterator(inst.end()));
      }
      for (auto& child : children) {
        if (!closable(child, config.max_body_atoms) || !seen.insert(child.key()).second) continue;
        candidates.push_back({std::move(child), false, false, {}});
      }
    }

    parallel_for(candidates.size(), config.workers, [&](std::size_t i) {
      auto& c = candidates[i];
      const auto head_size = kg.relation_triples(c.rule.head().relation).size();
      const auto sup = support(kg, c.rule, options);
      if (sup < config.min_support || sup == 0) return;
      if (Rational(sup, head_size).to_double() < config.min_head_coverage) return;
      c.keep = true;
      if (!c.rule.is_closed() || !c.rule.is_horn()) return;
      c.metrics = evaluate_rule(kg, fun, c.rule, options);
      if (c.metrics.body_size == 0) return;
      c.emit = c.metrics.pca_confidence().to_double() >= config.min_pca_confidence;
    });

    frontier.clear();
    for (auto& c : candidates) {
      if (c.emit) mined.push_back({c.rule, c.metrics});
      if (c.keep) frontier.push_back(std::move(c.rule));
    }
  }

  std::vector<std::pair<std::string, std::size_t>> order;
  order.reserve(mined.size());
  for (std::size_t i = 0; i < mined.size(); ++i) order.emplace_back(format_rule(mined[i].rule, kg.vocab()), i);
  std::sort(order.begin(), order.end());
  std::vector<MinedRule> sorted;
  sorted.reserve(mined.size());
  for (const auto& [text, i] : order) sorted.push_back(std::move(mined[i]));
  return sorted;
}

}  // namespace kgr::rules
