#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "kgr/eval/ranking.hpp"
#include "kgr/eval/rule_predict.hpp"
#include "kgr/rules/matcher.hpp"
#include "oracle/rank_oracle.hpp"
#include "support.hpp"

using namespace kgr;
using namespace kgr::eval;

namespace {

rules::Atom atom(RelationId r, std::uint32_t x, std::uint32_t y) {
  return {r, rules::Term::var(x), rules::Term::var(y)};
}

void check_ordering(const EvalReport& r) {
  CHECK(r.hits1 <= r.hits3);
  CHECK(r.hits3 <= r.hits10);
  CHECK(r.hits1 <= r.mrr);
  CHECK(r.mrr <= 1.0);
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("single triple with ranks 2 and 4") {
  const std::vector<RankPair> ranks = {{2, 4}};
  const auto r = report_from_ranks(ranks, RankingMode::raw);
  CHECK(r.query_count == 2);
  CHECK(r.hits1 == 0.0);
  CHECK(r.hits3 == 0.5);
  CHECK(r.hits10 == 1.0);
  CHECK(r.mrr == 0.375);
  check_ordering(r);
}

TEST_CASE("perfect ranks and unranked queries") {
  const std::vector<RankPair> perfect(5, {1, 1});
  const auto p = report_from_ranks(perfect, RankingMode::filtered);
  CHECK(p.hits1 == 1.0);
  CHECK(p.hits10 == 1.0);
  CHECK(p.mrr == 1.0);
  CHECK(p.mode == RankingMode::filtered);
  const std::vector<RankPair> none(3, {0, 0});
  const auto z = report_from_ranks(none, RankingMode::raw);
  CHECK(z.hits10 == 0.0);
  CHECK(z.mrr == 0.0);
}

TEST_CASE("mode names") {
  CHECK(parse_mode("raw") == RankingMode::raw);
  CHECK(parse_mode("filtered") == RankingMode::filtered);
  CHECK(mode_name(RankingMode::filtered) == "filtered");
  CHECK_THROWS_AS(parse_mode("fancy"), ConfigError);
}

TEST_CASE("ties rank by entity id") {
  embed::ModelParams p(embed::ModelKind::DistMult, 3, 6, 1, 0);  // every score 0.5
  const embed::Scorer scorer(p);
  const KnowledgeGraph known(test::numbered_vocab(6, 1), {});
  for (EntityId e = 0; e < 6; ++e) {
    const auto r = embed_rank(scorer, known, {e, 0, e}, RankingMode::raw);
    CHECK(r.head == e + 1);
    CHECK(r.tail == e + 1);
  }
}

TEST_CASE("a clearly best entity ranks first") {
  embed::ModelParams p(embed::ModelKind::TransE, 1, 4, 1, 0);
  for (EntityId e = 0; e < 4; ++e) p.entity(e)[0] = 10.0 * e;
  p.relation(0)[0] = 10.0;
  const KnowledgeGraph known(test::numbered_vocab(4, 1), {});
  const auto r = embed_rank(embed::Scorer(p), known, {1, 0, 2}, RankingMode::raw);
  CHECK(r.head == 1);
  CHECK(r.tail == 1);
}

TEST_CASE("ranks equal the full-sort oracle") {
  std::mt19937_64 rng(6);
  for (auto kind : {embed::ModelKind::TransE, embed::ModelKind::DistMult, embed::ModelKind::RotatE}) {
    const auto kg = test::random_graph(rng, 20, 3, 80);
    embed::TrainingConfig cfg;
    cfg.dim = 6;
    cfg.seed = rng();
    const auto p = embed::init_model(kind, 20, 3, cfg);
    const embed::Scorer scorer(p);
    for (const auto& t : kg.triples()) {
      const auto raw = embed_rank(scorer, kg, t, RankingMode::raw);
      const auto filt = embed_rank(scorer, kg, t, RankingMode::filtered);
      CHECK(raw.tail == oracle::sorted_rank(p, nullptr, t, true));
      CHECK(raw.head == oracle::sorted_rank(p, nullptr, t, false));
      CHECK(filt.tail == oracle::sorted_rank(p, &kg, t, true));
      CHECK(filt.head == oracle::sorted_rank(p, &kg, t, false));
      CHECK(filt.tail <= raw.tail);
      CHECK(filt.head <= raw.head);
      CHECK(raw.tail >= 1);
      CHECK(raw.tail <= 20);
    }
  }
}

TEST_CASE("embedding evaluation") {
  std::mt19937_64 rng(16);
  const auto g = test::random_graph(rng, 30, 3, 150);
  std::vector<Triple> all(g.triples().begin(), g.triples().end());
  std::shuffle(all.begin(), all.end(), rng);
  const std::vector<Triple> test(all.begin(), all.begin() + 20);
  std::vector<Triple> train(all.begin() + 20, all.end());
  auto split = make_split(g.shared_vocab(), train, {}, test);
  embed::TrainingConfig cfg;
  cfg.dim = 8;
  const auto p = embed::init_model(embed::ModelKind::TransE, 30, 3, cfg);
  for (auto mode : {RankingMode::raw, RankingMode::filtered}) {
    const auto r = evaluate_embeddings(p, split, mode);
    CHECK(r.query_count == 2 * split.test.size());
    CHECK(r.mode == mode);
    check_ordering(r);
    auto shuffled = split;
    std::shuffle(shuffled.test.begin(), shuffled.test.end(), rng);
    const auto s = evaluate_embeddings(p, shuffled, mode, 3);
    CHECK(s.mrr == doctest::Approx(r.mrr).epsilon(1e-12));
    CHECK(s.hits10 == r.hits10);
  }
  split.test.clear();
  CHECK_THROWS_AS(evaluate_embeddings(p, split, RankingMode::raw), ConfigError);
}

TEST_CASE("report file format") {
  std::ostringstream out;
  EvalReport r;
  r.hits1 = 0.25;
  r.hits3 = 0.5;
  r.hits10 = 0.75;
  r.mrr = 0.375;
  r.query_count = 8;
  r.mode = RankingMode::filtered;
  write_report(out, r);
  CHECK(out.str() == "hits@1=0.25\nhits@3=0.5\nhits@10=0.75\nmrr=0.375\nmode=filtered\nn_queries=8\n");
}

TEST_CASE("direct rule application") {
  const auto kg = test::graph_of({{"a", "r1", "b"}, {"c", "r1", "d"}, {"c", "r2", "d"}});
  rules::RuleRecord rec{rules::Rule({atom(0, 0, 1)}, atom(1, 0, 1)), 1, 1.0, 0.5, 0.5};
  const std::vector<rules::RuleRecord> recs = {rec};
  const auto a = kg.vocab().entity_id("a"), b = kg.vocab().entity_id("b");
  const auto cands = rule_predict(recs, kg, {1, a, true});
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].entity == b);
  CHECK(cands[0].confidence == 0.5);
  CHECK(rule_predict(recs, kg, {0, a, true}).empty());
}

TEST_CASE("candidates take the max confidence, not the sum") {
  const auto kg = test::graph_of({{"a", "p", "b"}, {"a", "q", "b"}, {"a", "q", "c"}, {"x", "s", "y"}});
  const RelationId p = 0, q = 1, s = 2;
  const std::vector<rules::RuleRecord> recs = {
      {rules::Rule({atom(p, 0, 1)}, atom(s, 0, 1)), 4, 0.1, 0.3, 0.4},
      {rules::Rule({atom(q, 0, 1)}, atom(s, 0, 1)), 9, 0.1, 0.5, 0.6},
  };
  const auto a = kg.vocab().entity_id("a");
  const auto cands = rule_predict(recs, kg, {s, a, true});
  REQUIRE(cands.size() == 2);
  CHECK(cands[0].entity == kg.vocab().entity_id("b"));
  CHECK(cands[0].confidence == 0.6);
  CHECK(cands[0].support == 9);
  CHECK(cands[1].entity == kg.vocab().entity_id("c"));
  CHECK(cands[1].confidence == 0.6);
}

TEST_CASE("rule candidates equal brute-force grounding") {
  std::mt19937_64 rng(3);
  const auto rules_all = std::vector<rules::Rule>{
      rules::Rule({atom(0, 0, 1)}, atom(2, 0, 1)),
      rules::Rule({atom(0, 0, 2), atom(1, 2, 1)}, atom(2, 0, 1)),
      rules::Rule({atom(1, 1, 0)}, atom(2, 0, 1)),
  };
  std::vector<rules::RuleRecord> recs;
  for (std::size_t i = 0; i < rules_all.size(); ++i) recs.push_back({rules_all[i], i + 1, 0.1, 0.2, 0.1 * (i + 1)});
  for (int round = 0; round < 20; ++round) {
    const auto kg = test::random_graph(rng, 9, 3, 40);
    for (EntityId e = 0; e < 9; ++e) {
      const auto got = rule_predict(recs, kg, {2, e, true});
      std::set<EntityId> want;
      for (const auto& rec : recs) {
        for (EntityId y = 0; y < 9; ++y) {
          std::vector<rules::Atom> body = rec.rule.body();
          rules::Binding b(rec.rule.variable_count(), rules::kUnbound);
          b[rec.rule.head().subject.value] = e;
          b[rec.rule.head().object.value] = y;
          if (rules::exists_match(kg, body, b)) want.insert(y);
        }
      }
      std::set<EntityId> got_set;
      for (const auto& c : got) got_set.insert(c.entity);
      CHECK(got_set == want);
      for (std::size_t i = 1; i < got.size(); ++i) {
        CHECK(std::tie(got[i - 1].confidence, got[i - 1].support) >= std::tie(got[i].confidence, got[i].support));
      }
    }
  }
}

TEST_CASE("rule evaluation") {
  std::mt19937_64 rng(10);
  const auto g = test::random_graph(rng, 15, 2, 90);
  std::vector<Triple> all(g.triples().begin(), g.triples().end());
  const std::vector<Triple> test(all.end() - 10, all.end());
  all.resize(all.size() - 10);
  const auto split = make_split(g.shared_vocab(), all, {}, test);
  const auto zero = evaluate_rules({}, split.train, split, RankingMode::raw);
  CHECK(zero.hits1 == 0.0);
  CHECK(zero.mrr == 0.0);
  CHECK(zero.query_count == 2 * split.test.size());

  const std::vector<rules::RuleRecord> recs = {
      {rules::Rule({atom(0, 1, 0)}, atom(1, 0, 1)), 2, 0.1, 0.2, 0.3},
      {rules::Rule({atom(1, 0, 2), atom(0, 2, 1)}, atom(0, 0, 1)), 3, 0.1, 0.2, 0.4},
  };
  for (auto mode : {RankingMode::raw, RankingMode::filtered}) {
    const auto a = evaluate_rules(recs, split.train, split, mode);
    const auto b = evaluate_rules(recs, split.train, split, mode, 4);
    check_ordering(a);
    CHECK(a.mrr == b.mrr);
    CHECK(a.hits3 == b.hits3);
  }
}

TEST_CASE("rule application lists new facts") {
  const auto kg = test::graph_of({{"a", "p", "b"}, {"b", "p", "c"}, {"a", "q", "c"}, {"c", "p", "d"}});
  const std::vector<rules::RuleRecord> recs = {
      {rules::Rule({atom(0, 0, 2), atom(0, 2, 1)}, atom(1, 0, 1)), 1, 1.0, 0.5, 0.5}};
  const auto preds = apply_rules(recs, kg);
  REQUIRE(preds.size() == 1);
  CHECK(preds[0].triple == Triple{kg.vocab().entity_id("b"), 1, kg.vocab().entity_id("d")});
  std::ostringstream out;
  write_predictions(out, preds, kg.vocab());
  CHECK(out.str() == "b\tq\td\t0.5\t1\n");
}

}  // TEST_SUITE
