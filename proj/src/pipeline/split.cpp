#include "kgr/pipeline/split.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "kgr/core/random.hpp"

namespace kgr::pipeline {

namespace {

struct Coverage {
  std::unordered_set<EntityId> entities;
  std::unordered_set<RelationId> relations;

  void add(const Triple& t) {
    entities.insert(t.head);
    entities.insert(t.tail);
    relations.insert(t.relation);
  }
  bool covers(const Triple& t) const {
    return entities.contains(t.head) && entities.contains(t.tail) && relations.contains(t.relation);
  }
};

}  // namespace

TripleSplit split_triples(std::vector<Triple> triples, const SplitRatios& ratios, std::uint64_t seed) {
  if (ratios.train < 0 || ratios.valid < 0 || ratios.test < 0) throw ConfigError("split ratios must be >= 0");
  if (std::abs(ratios.train + ratios.valid + ratios.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must sum to 1");
  }
  std::sort(triples.begin(), triples.end());
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
  Rng rng(derive_seed(seed, "split"));
  std::shuffle(triples.begin(), triples.end(), rng);

  const auto n = triples.size();
  auto n_valid = static_cast<std::size_t>(std::llround(ratios.valid * static_cast<double>(n)));
  auto n_test = static_cast<std::size_t>(std::llround(ratios.test * static_cast<double>(n)));
  n_valid = std::min(n_valid, n);
  n_test = std::min(n_test, n - n_valid);
  const std::size_t n_train = n - n_valid - n_test;

  TripleSplit out;
  out.train.assign(triples.begin(), triples.begin() + static_cast<std::ptrdiff_t>(n_train));
  Coverage cov;
  for (const auto& t : out.train) cov.add(t);

  // Coverage only grows, so one pass in order settles every row.
  auto place = [&](std::size_t begin, std::size_t end, std::vector<Triple>& part) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& t = triples[i];
      if (cov.covers(t)) {
        part.push_back(t);
      } else {
        out.train.push_back(t);
        cov.add(t);
        ++out.moved_to_train;
      }
    }
  };
  place(n_train, n_train + n_valid, out.valid);
  place(n_train + n_valid, n, out.test);

  if (ratios.train > 0 && out.train.empty() && n > 0) throw DataError("split: train part is empty");
  if (ratios.valid > 0 && out.valid.empty()) {
    throw DataError("split: coverage constraint leaves the valid part empty");
  }
  if (ratios.test > 0 && out.test.empty()) throw DataError("split: coverage constraint leaves the test part empty");
  return out;
}

bool coverage_holds(const TripleSplit& split) {
  Coverage cov;
  for (const auto& t : split.train) cov.add(t);
  auto ok = [&](const std::vector<Triple>& part) {
    return std::all_of(part.begin(), part.end(), [&](const Triple& t) { return cov.covers(t); });
  };
  return ok(split.valid) && ok(split.test);
}

}  // namespace kgr::pipeline
