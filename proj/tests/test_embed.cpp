#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "kgr/core/random.hpp"
#include "kgr/embed/checkpoint.hpp"
#include "kgr/embed/loss.hpp"
#include "kgr/embed/trainer.hpp"
#include "oracle/embed_oracle.hpp"
#include "oracle/gradcheck.hpp"
#include "support.hpp"

using namespace kgr;
using namespace kgr::embed;

namespace {

// 50 entities on a ring, four relations stepping 1..4 around it.
KnowledgeGraph ring_graph() {
  std::vector<Triple> ts;
  for (RelationId r = 0; r < 4; ++r) {
    for (EntityId i = 0; i < 50; ++i) ts.push_back({i, r, static_cast<EntityId>((i + r + 1) % 50)});
  }
  return KnowledgeGraph(test::numbered_vocab(50, 4), ts);
}

TrainingConfig small_config(std::size_t epochs) {
  TrainingConfig cfg;
  cfg.dim = 16;
  cfg.epochs = epochs;
  cfg.batch_size = 20;
  cfg.seed = 17;
  return cfg;
}

}  // namespace

TEST_SUITE("embed") {

TEST_CASE("model names parse case-insensitively") {
  CHECK(parse_model_kind("TransE") == ModelKind::TransE);
  CHECK(parse_model_kind("distmult") == ModelKind::DistMult);
  CHECK(parse_model_kind("ROTATE") == ModelKind::RotatE);
  CHECK_THROWS_AS(parse_model_kind("complex"), ConfigError);
}

TEST_CASE("config validation") {
  TrainingConfig cfg;
  cfg.dim = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(init_model(ModelKind::TransE, 3, 1, cfg), ConfigError);
  cfg = {};
  cfg.margin = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.negatives = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("initialisation") {
  TrainingConfig cfg;
  cfg.dim = 50;
  const auto a = init_model(ModelKind::TransE, 100, 5, cfg);
  const auto b = init_model(ModelKind::TransE, 100, 5, cfg);
  CHECK(a == b);
  CHECK(a.entity_table().size() == 100 * 50);
  const double bound = 6.0 / std::sqrt(50.0);
  for (double x : a.entity_table()) CHECK(std::abs(x) <= bound);

  const auto rot = init_model(ModelKind::RotatE, 10, 3, cfg);
  CHECK(rot.entity_table().size() == 10 * 100);
  for (double th : rot.relation_table()) {
    CHECK(th >= 0.0);
    CHECK(th < 2 * M_PI);
    CHECK(std::abs(std::hypot(std::cos(th), std::sin(th)) - 1.0) < 1e-15);
  }
}

TEST_CASE("score examples") {
  SUBCASE("TransE zero residual") {
    ModelParams p(ModelKind::TransE, 4, 2, 1, 0);
    const double h[] = {0.3, -1.2, 0.7, 2.0}, r[] = {1.1, 0.4, -0.2, -3.0};
    for (int i = 0; i < 4; ++i) {
      p.entity(0)[i] = h[i];
      p.relation(0)[i] = r[i];
      p.entity(1)[i] = h[i] + r[i];
    }
    CHECK(score(p, {0, 0, 1}) == 0.5);
  }
  SUBCASE("DistMult zero relation") {
    TrainingConfig cfg;
    cfg.dim = 8;
    auto p = init_model(ModelKind::DistMult, 3, 1, cfg);
    for (double& x : p.relation(0)) x = 0.0;
    CHECK(score(p, {0, 0, 2}) == 0.5);
  }
}

TEST_CASE("scores match the straight-line oracle") {
  std::mt19937_64 rng(1);
  for (auto kind : {ModelKind::TransE, ModelKind::DistMult, ModelKind::RotatE}) {
    TrainingConfig cfg;
    cfg.dim = 37;
    cfg.seed = rng();
    const auto p = init_model(kind, 20, 4, cfg);
    const Scorer scorer(p);
    double worst = 0.0;
    for (EntityId h = 0; h < 20; ++h) {
      for (RelationId r = 0; r < 4; ++r) {
        for (EntityId t = 0; t < 20; ++t) {
          const double s = scorer.score({h, r, t});
          CHECK(s > 0.0);
          CHECK(s <= 0.5);
          worst = std::max(worst, std::abs(s - oracle::score(p, {h, r, t})));
        }
      }
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("hinge examples") {
  ModelParams p(ModelKind::TransE, 1, 3, 1, 0);
  p.entity(0)[0] = 0.0;
  p.relation(0)[0] = 1.0;
  p.entity(1)[0] = 1.0;  // positive residual 0
  p.entity(2)[0] = 3.0;  // negative residual 2
  const std::vector<Triple> pos = {{0, 0, 1}}, neg = {{0, 0, 2}};
  CHECK(loss_batch(p, pos, neg, 1.0) == 0.0);
  CHECK(loss_batch(p, pos, neg, 2.5) == doctest::Approx(0.5));
  p.entity(2)[0] = 1.5;  // negative residual 0.5
  CHECK(loss_batch(p, pos, neg, 1.0) == doctest::Approx(1.0 + 0.0 - 0.5));
  CHECK_THROWS_AS(loss_batch(p, pos, std::vector<Triple>{}, 1.0), ContractError);
  const std::vector<Triple> two = {{0, 0, 1}, {0, 0, 2}};
  CHECK_THROWS_AS(loss_batch(p, two, std::vector<Triple>{{0, 0, 2}, {0, 0, 2}, {0, 0, 1}}, 1.0), ContractError);
}

TEST_CASE("losses match the oracle") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<EntityId> ent(0, 14);
  std::uniform_int_distribution<RelationId> rel(0, 2);
  for (auto kind : {ModelKind::TransE, ModelKind::DistMult, ModelKind::RotatE}) {
    for (int rep = 0; rep < 10; ++rep) {
      TrainingConfig cfg;
      cfg.dim = 12;
      cfg.seed = rng();
      const auto p = init_model(kind, 15, 3, cfg);
      std::vector<Triple> pos, neg;
      for (int i = 0; i < 8; ++i) pos.push_back({ent(rng), rel(rng), ent(rng)});
      for (int i = 0; i < 24; ++i) neg.push_back({ent(rng), pos[i / 3].relation, ent(rng)});
      const double got = loss_batch(p, pos, neg, 1.5);
      const double want = oracle::loss(p, pos, neg, 1.5);
      CHECK(std::abs(got - want) <= 1e-10 * std::max(1.0, std::abs(want)));
      if (kind != ModelKind::RotatE) CHECK(got >= 0.0);
    }
  }
}

TEST_CASE("analytic gradients match finite differences") {
  for (auto kind : {ModelKind::TransE, ModelKind::DistMult, ModelKind::RotatE}) {
    const auto r = oracle::finite_difference_check(kind, 8, 20, 1000 + static_cast<int>(kind));
    INFO(model_name(kind), " compared ", r.compared);
    CHECK(r.max_rel_error < 1e-4);
  }
}

TEST_CASE("negative sampling") {
  const auto kg = ring_graph();
  Rng rng(5);
  std::size_t heads = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const Triple& pos = kg.triples()[i % kg.size()];
    const auto c = corrupt(kg, pos, rng);
    CHECK_FALSE(c.fallback);
    CHECK_FALSE(kg.contains(c.triple));
    const int diffs = (c.triple.head != pos.head) + (c.triple.tail != pos.tail);
    CHECK(diffs == 1);
    CHECK(c.triple.relation == pos.relation);
    CHECK(c.head_replaced == (c.triple.head != pos.head));
    heads += c.head_replaced;
  }
  const double freq = static_cast<double>(heads) / draws;
  CHECK(freq >= 0.47);
  CHECK(freq <= 0.53);
}

TEST_CASE("saturated graph falls back after the attempt budget") {
  const KnowledgeGraph kg(test::numbered_vocab(2, 1), {{0, 0, 0}, {0, 0, 1}, {1, 0, 0}, {1, 0, 1}});
  Rng rng(1);
  const auto c = corrupt(kg, {0, 0, 1}, rng);
  CHECK(c.fallback);
  CHECK(kg.contains(c.triple));
  const KnowledgeGraph one(test::numbered_vocab(1, 1), {{0, 0, 0}});
  CHECK_THROWS_AS(corrupt(one, {0, 0, 0}, rng), ConfigError);
}

TEST_CASE("zero epochs leave parameters unchanged") {
  const auto kg = ring_graph();
  const auto cfg = small_config(0);
  const auto init = init_model(ModelKind::TransE, 50, 4, cfg);
  const auto result = train(init, kg, cfg);
  CHECK(result.params == init);
  CHECK(result.epoch_loss.empty());
}

TEST_CASE("training lowers the loss") {
  const auto kg = ring_graph();
  for (auto kind : {ModelKind::TransE, ModelKind::RotatE}) {
    const auto cfg = small_config(50);
    const auto result = train(init_model(kind, 50, 4, cfg), kg, cfg);
    REQUIRE(result.epoch_loss.size() == 50);
    INFO(model_name(kind));
    CHECK(result.epoch_loss[49] < result.epoch_loss[0]);
  }
}

TEST_CASE("training is deterministic with one worker") {
  const auto kg = ring_graph();
  for (auto kind : {ModelKind::TransE, ModelKind::DistMult, ModelKind::RotatE}) {
    const auto cfg = small_config(5);
    const auto a = train(init_model(kind, 50, 4, cfg), kg, cfg);
    const auto b = train(init_model(kind, 50, 4, cfg), kg, cfg);
    CHECK(a.params == b.params);
    CHECK(a.epoch_loss == b.epoch_loss);
  }
}

TEST_CASE("parallel batches stay close to serial") {
  const auto kg = ring_graph();
  auto cfg = small_config(3);
  const auto serial = train(init_model(ModelKind::TransE, 50, 4, cfg), kg, cfg);
  cfg.workers = 3;
  const auto parallel = train(init_model(ModelKind::TransE, 50, 4, cfg), kg, cfg);
  const auto parallel2 = train(init_model(ModelKind::TransE, 50, 4, cfg), kg, cfg);
  CHECK(parallel.params == parallel2.params);
  for (std::size_t i = 0; i < serial.params.entity_table().size(); ++i) {
    CHECK(std::abs(serial.params.entity_table()[i] - parallel.params.entity_table()[i]) < 1e-9);
  }
}

TEST_CASE("RotatE relations keep unit modulus after every step") {
  const auto kg = ring_graph();
  auto cfg = small_config(5);
  cfg.learning_rate = 0.1;
  double worst = 0.0;
  std::size_t steps = 0;
  train(init_model(ModelKind::RotatE, 50, 4, cfg), kg, cfg, [&](const ModelParams& p, std::size_t, std::size_t) {
    ++steps;
    for (double th : p.relation_table()) {
      const double re = std::cos(th), im = std::sin(th);
      worst = std::max(worst, std::abs(std::sqrt(re * re + im * im) - 1.0));
    }
  });
  CHECK(steps == 5 * 10);
  CHECK(worst <= 1e-9);
}

TEST_CASE("divergence raises a numerical error") {
  const auto kg = ring_graph();
  auto cfg = small_config(1);
  auto p = init_model(ModelKind::TransE, 50, 4, cfg);
  p.relation(0)[0] = std::nan("");
  CHECK_THROWS_AS(train(p, kg, cfg), NumericalError);
}

TEST_CASE("loss trace format") {
  std::ostringstream out;
  const std::vector<double> loss = {1.5, 0.25};
  write_loss_trace(out, loss);
  CHECK(out.str() == "epoch,loss\n1,1.5\n2,0.25\n");
}

TEST_CASE("checkpoint round trip is bit exact") {
  TrainingConfig cfg;
  cfg.dim = 7;
  for (auto kind : {ModelKind::TransE, ModelKind::DistMult, ModelKind::RotatE}) {
    const auto p = init_model(kind, 9, 2, cfg);
    std::stringstream first;
    save_model(first, p, 0xABCDEF);
    CheckpointHeader h;
    const auto back = load_model(first, {}, &h);
    CHECK(back == p);
    CHECK(h.config_hash == 0xABCDEF);
    CHECK(h.kind == kind);
    CHECK(h.dim == 7);
    std::stringstream second;
    save_model(second, back, 0xABCDEF);
    CHECK(first.str() == second.str());
  }
}

TEST_CASE("checkpoint validation") {
  TrainingConfig cfg;
  cfg.dim = 4;
  const auto p = init_model(ModelKind::TransE, 5, 2, cfg);
  std::stringstream buf;
  save_model(buf, p, 7);
  const std::string bytes = buf.str();
  CHECK(bytes.size() == 56 + 8 * (5 * 4 + 2 * 4) + 8);

  auto load = [](const std::string& b, CheckpointExpectation e = {}) {
    std::istringstream in(b);
    return load_model(in, e);
  };
  CHECK_THROWS_AS(load(bytes, {ModelKind::RotatE, {}, {}, {}}), DataError);
  CHECK_THROWS_AS(load(bytes, {{}, 6, {}, {}}), DataError);
  CHECK_THROWS_AS(load(bytes, {{}, {}, {}, 8}), DataError);
  CHECK_NOTHROW(load(bytes, {ModelKind::TransE, 5, 2, 7}));

  // The trailing word is FNV-1a of everything before it.
  std::uint64_t stored = 0;
  for (int i = 0; i < 8; ++i) {
    stored |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[bytes.size() - 8 + i])) << (8 * i);
  }
  CHECK(stored == fnv1a64(std::string_view(bytes).substr(0, bytes.size() - 8)));

  std::string flipped = bytes;
  flipped[70] ^= 0x01;
  CHECK_THROWS_AS(load(flipped), DataError);
  CHECK_THROWS_AS(load(bytes.substr(0, bytes.size() - 3)), DataError);
  CHECK_THROWS_AS(load("NOPE" + bytes.substr(4)), DataError);
}

}  // TEST_SUITE
