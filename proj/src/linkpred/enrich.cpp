#include "kgr/linkpred/enrich.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <thread>

namespace kgr::linkpred {

void EnrichmentConfig::validate(const KnowledgeGraph& kg) const {
  if (sample_entities == 0) throw ConfigError("sample_entities must be >= 1");
  if (sample_relations == 0) throw ConfigError("sample_relations must be >= 1");
  if (top_k == 0) throw ConfigError("top_k must be >= 1");
  if (workers == 0) throw ConfigError("workers must be >= 1");
  if (chunk_size == 0) throw ConfigError("chunk_size must be >= 1");
  if (2 * sample_entities > kg.entity_count()) {
    throw ConfigError("2 * sample_entities (" + std::to_string(2 * sample_entities) +
                      ") exceeds the entity count (" + std::to_string(kg.entity_count()) +
                      "); disjoint head/tail samples need 2n <= |E|");
  }
  for (RelationId r : target_relations) {
    if (r >= kg.relation_count()) throw ConfigError("target relation id out of range");
  }
  if (target_relations.empty() && kg.relation_count() == 0) throw ConfigError("graph has no relations");
}

void CandidateSpace::for_each_candidate(const KnowledgeGraph& kg, const std::function<void(const Triple&)>& fn) const {
  for (RelationId r : relations) {
    for (EntityId h : heads) {
      for (EntityId t : tails) {
        const Triple c{h, r, t};
        if (!kg.contains(c)) fn(c);
      }
    }
  }
}

CandidateSpace sample_candidate_space(const KnowledgeGraph& kg, const EnrichmentConfig& config, Rng& rng) {
  config.validate(kg);
  CandidateSpace space;
  if (config.target_relations.empty()) {
    const auto nr = static_cast<RelationId>(kg.relation_count());
    const auto m = static_cast<RelationId>(std::min<std::size_t>(config.sample_relations, nr));
    space.relations = sample_without_replacement<RelationId>(rng, nr, m);
  } else {
    space.relations = config.target_relations;
  }
  std::sort(space.relations.begin(), space.relations.end());
  space.relations.erase(std::unique(space.relations.begin(), space.relations.end()), space.relations.end());

  // One draw of 2n distinct entities split in half gives disjoint E1, E2.
  const auto ne = static_cast<EntityId>(kg.entity_count());
  const auto n = static_cast<EntityId>(config.sample_entities);
  auto drawn = sample_without_replacement<EntityId>(rng, ne, 2 * n);
  space.heads.assign(drawn.begin(), drawn.begin() + n);
  space.tails.assign(drawn.begin() + n, drawn.end());
  std::sort(space.heads.begin(), space.heads.end());
  std::sort(space.tails.begin(), space.tails.end());
  return space;
}

CandidateSet find_candidate_triples(const KnowledgeGraph& kg, const EnrichmentConfig& config, Rng& rng) {
  const auto space = sample_candidate_space(kg, config, rng);
  CandidateSet out;
  space.for_each_candidate(kg, [&](const Triple& t) { out.push_back(t); });
  return out;
}

bool ranks_ahead(const ScoredTriple& a, const ScoredTriple& b) {
  if (a.score != b.score) return a.score > b.score;
  return RelationMajorLess{}(a.triple, b.triple);
}

void TopK::offer(const ScoredTriple& item) {
  if (k_ == 0) return;
  // Max-heap under ranks_ahead keeps the worst retained candidate at front.
  if (heap_.size() < k_) {
    heap_.push_back(item);
    std::push_heap(heap_.begin(), heap_.end(), ranks_ahead);
  } else if (ranks_ahead(item, heap_.front())) {
    std::pop_heap(heap_.begin(), heap_.end(), ranks_ahead);
    heap_.back() = item;
    std::push_heap(heap_.begin(), heap_.end(), ranks_ahead);
  }
}

void TopK::merge(const TopK& other) {
  for (const auto& item : other.heap_) offer(item);
}

std::vector<ScoredTriple> TopK::sorted() const {
  std::vector<ScoredTriple> out(heap_);
  std::sort(out.begin(), out.end(), ranks_ahead);
  return out;
}

namespace {

EnrichmentResult finish(const KnowledgeGraph& kg, const TopK& best, std::size_t candidate_count) {
  EnrichmentResult result{KnowledgeGraph(), best.sorted(), candidate_count};
  std::vector<Triple> added;
  added.reserve(result.added.size());
  for (const auto& s : result.added) added.push_back(s.triple);
  result.enriched = kg.merge(added);
  return result;
}

// Scores chunks in parallel; each worker keeps its own TopK and the merge is
// order-independent because ranks_ahead is a strict total order.
TopK score_chunks(const std::vector<std::vector<Triple>>& chunks, const embed::Scorer& scorer, std::size_t k,
                  std::size_t workers) {
  const std::size_t slots = std::max<std::size_t>(1, std::min(workers, chunks.size()));
  std::vector<TopK> partial(slots, TopK(k));
  auto run = [&](std::size_t slot) {
    for (std::size_t c = slot; c < chunks.size(); c += slots) {
      for (const auto& t : chunks[c]) partial[slot].offer({t, scorer.score(t)});
    }
  };
  if (slots == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t s = 0; s < slots; ++s) threads.emplace_back(run, s);
    for (auto& t : threads) t.join();
  }
  TopK best(k);
  for (const auto& p : partial) best.merge(p);
  return best;
}

}  // namespace

EnrichmentResult infer_new_triples(const KnowledgeGraph& kg, std::span<const Triple> candidates,
                                   const embed::ModelParams& params, std::size_t k, std::size_t workers) {
  if (k == 0) throw ConfigError("top_k must be >= 1");
  const embed::Scorer scorer(params);
  constexpr std::size_t kChunk = 1 << 16;
  std::vector<std::vector<Triple>> chunks;
  for (std::size_t i = 0; i < candidates.size(); i += kChunk) {
    const auto end = std::min(i + kChunk, candidates.size());
    chunks.emplace_back(candidates.begin() + static_cast<std::ptrdiff_t>(i),
                        candidates.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return finish(kg, score_chunks(chunks, scorer, k, workers), candidates.size());
}

EnrichmentResult enrich_space(const KnowledgeGraph& kg, const embed::ModelParams& params,
                              const CandidateSpace& space, std::size_t k, std::size_t workers,
                              std::size_t chunk_size) {
  if (k == 0) throw ConfigError("top_k must be >= 1");
  const embed::Scorer scorer(params);
  TopK best(k);
  std::size_t count = 0;
  // Fill a batch of chunks, score it, repeat; memory stays at one batch.
  const std::size_t batch_chunks = std::max<std::size_t>(1, workers);
  std::vector<std::vector<Triple>> chunks(1);
  auto flush = [&] {
    best.merge(score_chunks(chunks, scorer, k, workers));
    chunks.assign(1, {});
  };
  space.for_each_candidate(kg, [&](const Triple& t) {
    ++count;
    chunks.back().push_back(t);
    if (chunks.back().size() == chunk_size) {
      if (chunks.size() == batch_chunks) {
        flush();
      } else {
        chunks.emplace_back();
      }
    }
  });
  flush();
  return finish(kg, best, count);
}

EnrichmentResult enrich(const KnowledgeGraph& kg, const embed::ModelParams& params, const EnrichmentConfig& config) {
  Rng rng(derive_seed(config.seed, "enrich"));
  const auto space = sample_candidate_space(kg, config, rng);
  return enrich_space(kg, params, space, config.top_k, config.workers, config.chunk_size);
}

void write_manifest(std::ostream& out, std::span<const ScoredTriple> added, const Vocabulary& vocab) {
  char buf[64];
  for (const auto& s : added) {
    std::snprintf(buf, sizeof buf, "%.17g", s.score);
    out << vocab.entity_label(s.triple.head) << '\t' << vocab.relation_label(s.triple.relation) << '\t'
        << vocab.entity_label(s.triple.tail) << '\t' << buf << '\n';
  }
}

}  // namespace kgr::linkpred
