#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "kgr/core/functionality.hpp"
#include "kgr/core/rational.hpp"
#include "kgr/core/triple_io.hpp"
#include "support.hpp"

using namespace kgr;

TEST_SUITE("core") {

TEST_CASE("rational arithmetic stays reduced") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(0, 7) == Rational(0, 1));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(2, 3).str() == "2/3");
  CHECK_THROWS_AS(Rational(1, 0), ContractError);
}

TEST_CASE("duplicate lines collapse") {
  std::istringstream in("a\tr\tb\na\tr\tb\n");
  const auto rows = read_labeled_triples(in, "mem");
  CHECK(rows.size() == 2);
  auto vocab = std::make_shared<Vocabulary>();
  const KnowledgeGraph kg(vocab, encode_triples(rows, *vocab));
  CHECK(kg.size() == 1);
}

TEST_CASE("empty input gives an empty graph") {
  std::istringstream in("");
  auto vocab = std::make_shared<Vocabulary>();
  const KnowledgeGraph kg(vocab, encode_triples(read_labeled_triples(in, "mem"), *vocab));
  CHECK(kg.size() == 0);
  CHECK(kg.entity_count() == 0);
  CHECK(kg.relation_count() == 0);
  CHECK_FALSE(kg.contains({0, 0, 0}));
}

TEST_CASE("malformed lines report their line number") {
  std::istringstream in("a\tr\tb\n\na\tr\n");
  try {
    read_labeled_triples(in, "mem");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::istringstream four("a\tr\tb\tc\n");
  CHECK_THROWS_AS(read_labeled_triples(four, "mem"), ParseError);
}

TEST_CASE("labels may contain spaces and CRLF endings are accepted") {
  std::istringstream in("New York\tlocated in\tUnited States\r\n");
  const auto rows = read_labeled_triples(in, "mem");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].head == "New York");
  CHECK(rows[0].tail == "United States");
}

TEST_CASE("fixed vocabulary rejects unknown labels") {
  const auto kg = test::graph_of({{"a", "r", "b"}});
  const std::vector<LabeledTriple> rows = {{"a", "r", "zzz"}};
  CHECK_THROWS_AS(encode_triples(rows, kg.vocab()), VocabularyError);
}

TEST_CASE("ids follow first-seen order") {
  const auto kg = test::graph_of({{"x", "p", "y"}, {"z", "q", "x"}});
  CHECK(kg.vocab().entity_id("x") == 0);
  CHECK(kg.vocab().entity_id("y") == 1);
  CHECK(kg.vocab().entity_id("z") == 2);
  CHECK(kg.vocab().relation_id("q") == 1);
}

TEST_CASE("functionality examples") {
  SUBCASE("tie resolves to subject-functional") {
    const auto kg = test::graph_of({{"a", "r", "b"}, {"a", "r", "c"}, {"d", "r", "b"}});
    const auto f = functionality(kg).at(0);
    CHECK(f.fun == Rational(2, 3));
    CHECK(f.fun_inv == Rational(2, 3));
    CHECK(f.subject_functional);
  }
  SUBCASE("single triple") {
    const auto f = functionality(test::graph_of({{"a", "r", "b"}})).at(0);
    CHECK(f.fun == Rational(1, 1));
    CHECK(f.fun_inv == Rational(1, 1));
  }
  SUBCASE("shared object") {
    const auto f = functionality(test::graph_of({{"a", "r", "b"}, {"c", "r", "b"}})).at(0);
    CHECK(f.fun == Rational(1, 1));
    CHECK(f.fun_inv == Rational(1, 2));
    CHECK(f.subject_functional);
  }
  SUBCASE("relations without triples are excluded") {
    auto vocab = test::numbered_vocab(2, 2);
    const KnowledgeGraph kg(vocab, {{0, 0, 1}});
    const auto table = functionality(kg);
    CHECK(table.has(0));
    CHECK_FALSE(table.has(1));
    CHECK_THROWS_AS(table.at(1), ContractError);
  }
}

TEST_CASE("functionality bounds on random graphs") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 50; ++round) {
    const auto kg = test::random_graph(rng, 12, 4, 60);
    const auto table = functionality(kg);
    for (RelationId r = 0; r < kg.relation_count(); ++r) {
      if (!table.has(r)) continue;
      const auto& f = table.at(r);
      const auto n = kg.relation_triples(r).size();
      CHECK(f.fun > Rational(0, 1));
      CHECK(f.fun <= Rational(1, 1));
      CHECK(f.fun_inv > Rational(0, 1));
      CHECK(f.fun_inv <= Rational(1, 1));
      CHECK(Rational(kg.subjects(r).size(), n) == f.fun);
      CHECK(Rational(kg.objects(r).size(), n) == f.fun_inv);
    }
  }
}

TEST_CASE("contains agrees with a list scan") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 10; ++round) {
    auto vocab = test::numbered_vocab(15, 4);
    std::vector<Triple> list;
    std::uniform_int_distribution<EntityId> ent(0, 14);
    std::uniform_int_distribution<RelationId> rel(0, 3);
    for (int i = 0; i < 100; ++i) list.push_back({ent(rng), rel(rng), ent(rng)});
    const KnowledgeGraph kg(vocab, list);
    for (EntityId h = 0; h < 15; ++h) {
      for (RelationId r = 0; r < 4; ++r) {
        for (EntityId t = 0; t < 15; ++t) {
          const Triple q{h, r, t};
          CHECK(kg.contains(q) == (std::find(list.begin(), list.end(), q) != list.end()));
        }
      }
    }
  }
}

TEST_CASE("indices are consistent with the triple set") {
  std::mt19937_64 rng(3);
  const auto kg = test::random_graph(rng, 20, 5, 150);
  const std::set<Triple> all(kg.triples().begin(), kg.triples().end());
  CHECK(all.size() == kg.size());
  std::size_t by_rel = 0, by_out = 0, by_in = 0;
  for (RelationId r = 0; r < kg.relation_count(); ++r) {
    for (const auto& t : kg.relation_triples(r)) {
      CHECK(t.relation == r);
      CHECK(all.contains(t));
      ++by_rel;
    }
  }
  for (EntityId e = 0; e < kg.entity_count(); ++e) {
    for (const auto& t : kg.outgoing(e)) {
      CHECK(t.head == e);
      CHECK(all.contains(t));
      ++by_out;
    }
    for (const auto& t : kg.incoming(e)) {
      CHECK(t.tail == e);
      CHECK(all.contains(t));
      ++by_in;
    }
  }
  CHECK(by_rel == kg.size());
  CHECK(by_out == kg.size());
  CHECK(by_in == kg.size());
  for (const auto& t : all) {
    const auto tails = kg.tails(t.head, t.relation);
    CHECK(std::binary_search(tails.begin(), tails.end(), t.tail));
    const auto heads = kg.heads(t.relation, t.tail);
    CHECK(std::binary_search(heads.begin(), heads.end(), t.head));
  }
}

TEST_CASE("merge is a set union") {
  std::mt19937_64 rng(5);
  const auto g = test::random_graph(rng, 30, 3, 80);
  CHECK(g.merge({}).size() == g.size());
  const Triple existing = g.triples()[0];
  CHECK(g.merge(std::vector<Triple>{existing}).size() == g.size());

  std::vector<Triple> fresh;
  for (EntityId h = 0; fresh.size() < 50; ++h) {
    for (EntityId t = 0; t < 30 && fresh.size() < 50; ++t) {
      const Triple c{h, 2, t};
      if (!g.contains(c)) fresh.push_back(c);
    }
  }
  const auto merged = g.merge(fresh);
  CHECK(merged.size() == g.size() + 50);

  const std::vector<Triple> a(fresh.begin(), fresh.begin() + 20);
  const std::vector<Triple> b(fresh.begin() + 10, fresh.end());
  const auto left = g.merge(a).merge(b);
  const auto right = g.merge(b).merge(a);
  CHECK(std::equal(left.triples().begin(), left.triples().end(), right.triples().begin(), right.triples().end()));
}

TEST_CASE("save and reload reproduce the triple set") {
  std::mt19937_64 rng(9);
  const auto g = test::random_graph(rng, 25, 4, 120);
  const auto dir = test::scratch_dir("core_roundtrip");
  save_triples(dir / "g.tsv", g);
  const auto back = load_triples(dir / "g.tsv");
  std::set<std::tuple<std::string, std::string, std::string>> a, b;
  for (const auto& t : g.triples()) {
    a.emplace(g.vocab().entity_label(t.head), g.vocab().relation_label(t.relation), g.vocab().entity_label(t.tail));
  }
  for (const auto& t : back.triples()) {
    b.emplace(back.vocab().entity_label(t.head), back.vocab().relation_label(t.relation),
              back.vocab().entity_label(t.tail));
  }
  CHECK(a == b);
}

TEST_CASE("load_split enforces the split invariants") {
  const auto dir = test::scratch_dir("core_split");
  {
    std::ofstream(dir / "train.tsv") << "a\tr\tb\nb\tr\tc\n";
    std::ofstream(dir / "valid.tsv") << "a\tr\tc\na\tr\tb\n";
    std::ofstream(dir / "test.tsv") << "c\tr\ta\nzz\tr\ta\na\tr\tc\n";
  }
  const auto split = load_split(dir / "train.tsv", dir / "valid.tsv", dir / "test.tsv");
  CHECK(split.train.size() == 2);
  CHECK(split.valid.size() == 1);
  CHECK(split.test.size() == 1);
  CHECK(split.dropped_overlap == 2);
  CHECK(split.dropped_unseen == 1);
  CHECK(split.train.entity_count() == 3);
  CHECK(split.all_known().size() == 4);
}

}  // TEST_SUITE
