#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "kgr/core/knowledge_graph.hpp"
#include "kgr/core/random.hpp"
#include "kgr/embed/model.hpp"

namespace kgr::linkpred {

struct EnrichmentConfig {
  /// Relations to complete; empty means sample `sample_relations` of them.
  std::vector<RelationId> target_relations;
  std::size_t sample_entities = 1000;
  std::size_t sample_relations = 10;
  std::size_t top_k = 50;
  std::uint64_t seed = 42;
  std::size_t workers = 1;
  /// Candidates scored per work unit.
  std::size_t chunk_size = 1 << 16;

  void validate(const KnowledgeGraph& kg) const;
};

/// The sampled product T x E1 x E2. Each list is ascending, so iterating
/// relation-major yields candidates in (relation, head, tail) order.
struct CandidateSpace {
  std::vector<RelationId> relations;
  std::vector<EntityId> heads;
  std::vector<EntityId> tails;

  std::size_t product_size() const { return relations.size() * heads.size() * tails.size(); }
  /// Calls `fn` for every product triple not in `kg`, in (r, h, t) order.
  void for_each_candidate(const KnowledgeGraph& kg, const std::function<void(const Triple&)>& fn) const;
};

/// Samples T (when no targets are given), then disjoint E1 and E2 of
/// `sample_entities` each. More relations than exist are clamped to all of them.
CandidateSpace sample_candidate_space(const KnowledgeGraph& kg, const EnrichmentConfig& config, Rng& rng);

/// Materialised candidate list, (relation, head, tail) ordered, none in kg.
using CandidateSet = std::vector<Triple>;

CandidateSet find_candidate_triples(const KnowledgeGraph& kg, const EnrichmentConfig& config, Rng& rng);

struct ScoredTriple {
  Triple triple;
  double score = 0.0;
};

/// Strict "ranks ahead of": higher score first, then (relation, head, tail).
bool ranks_ahead(const ScoredTriple& a, const ScoredTriple& b);

/// Bounded best-k accumulator.
class TopK {
 public:
  explicit TopK(std::size_t k) : k_(k) {}
  void offer(const ScoredTriple& item);
  void merge(const TopK& other);
  /// Best first.
  std::vector<ScoredTriple> sorted() const;
  std::size_t size() const { return heap_.size(); }

 private:
  std::size_t k_;
  std::vector<ScoredTriple> heap_;  // worst element at front
};

struct EnrichmentResult {
  KnowledgeGraph enriched;
  /// Best first; |added| = min(k, |C|).
  std::vector<ScoredTriple> added;
  std::size_t candidate_count = 0;
};

EnrichmentResult infer_new_triples(const KnowledgeGraph& kg, std::span<const Triple> candidates,
                                   const embed::ModelParams& params, std::size_t k, std::size_t workers = 1);

/// Samples the candidate space and streams it through the scorer in
/// chunks; the product is never materialised.
EnrichmentResult enrich(const KnowledgeGraph& kg, const embed::ModelParams& params, const EnrichmentConfig& config);

/// Same as enrich() but for a precomputed candidate space.
EnrichmentResult enrich_space(const KnowledgeGraph& kg, const embed::ModelParams& params,
                              const CandidateSpace& space, std::size_t k, std::size_t workers,
                              std::size_t chunk_size = 1 << 16);

/// `head<TAB>relation<TAB>tail<TAB>score`, best first.
void write_manifest(std::ostream& out, std::span<const ScoredTriple> added, const Vocabulary& vocab);

}  // namespace kgr::linkpred
