#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "kgr/core/knowledge_graph.hpp"
#include "kgr/core/triple_io.hpp"

namespace kgr::test {

/// Graph from labelled triples, ids in first-seen order.
inline KnowledgeGraph graph_of(const std::vector<LabeledTriple>& rows) {
  auto vocab = std::make_shared<Vocabulary>();
  auto triples = encode_triples(rows, *vocab);
  return KnowledgeGraph(vocab, std::move(triples));
}

/// Vocabulary with entities e0..e{ne-1} and relations r0..r{nr-1}.
inline std::shared_ptr<Vocabulary> numbered_vocab(std::size_t ne, std::size_t nr) {
  auto v = std::make_shared<Vocabulary>();
  for (std::size_t i = 0; i < ne; ++i) v->intern_entity("e" + std::to_string(i));
  for (std::size_t i = 0; i < nr; ++i) v->intern_relation("r" + std::to_string(i));
  return v;
}

/// Up to `max_triples` uniform random triples (duplicates collapse).
inline KnowledgeGraph random_graph(std::mt19937_64& rng, std::size_t ne, std::size_t nr, std::size_t max_triples) {
  std::uniform_int_distribution<EntityId> ent(0, static_cast<EntityId>(ne - 1));
  std::uniform_int_distribution<RelationId> rel(0, static_cast<RelationId>(nr - 1));
  std::vector<Triple> ts;
  for (std::size_t i = 0; i < max_triples; ++i) ts.push_back({ent(rng), rel(rng), ent(rng)});
  return KnowledgeGraph(numbered_vocab(ne, nr), std::move(ts));
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("kgr_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace kgr::test
