#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "kgr/core/types.hpp"
#include "kgr/core/vocabulary.hpp"

namespace kgr {

/// Immutable, deduplicated triple set with the adjacency indices the rule
/// miner and the embedding pipeline need. Cheap to share by const reference
/// across threads; merge() returns a new graph.
///
/// Index layout (all are flat sorted arrays over the same triple set):
///   by (head, relation, tail)   - outgoing edges and the (h,r) -> tails index
///   by (relation, tail, head)   - the (r,t) -> heads index
///   by (relation, head, tail)   - per-relation pair lists
///   by (tail, relation, head)   - incoming edges
class KnowledgeGraph {
 public:
  KnowledgeGraph();
  /// Ids must be valid under `vocab`; duplicates collapse.
  KnowledgeGraph(std::shared_ptr<const Vocabulary> vocab, std::vector<Triple> triples);

  const Vocabulary& vocab() const { return *vocab_; }
  const std::shared_ptr<const Vocabulary>& shared_vocab() const { return vocab_; }

  std::size_t size() const { return by_head_.size(); }
  bool empty() const { return by_head_.empty(); }
  std::size_t entity_count() const { return vocab_->entity_count(); }
  std::size_t relation_count() const { return vocab_->relation_count(); }

  /// All triples ordered by (head, relation, tail).
  std::span<const Triple> triples() const { return by_head_; }

  bool contains(const Triple& t) const;

  std::span<const EntityId> tails(EntityId head, RelationId relation) const;
  std::span<const EntityId> heads(RelationId relation, EntityId tail) const;

  /// Triples of one relation ordered by (head, tail).
  std::span<const Triple> relation_triples(RelationId relation) const;
  /// Distinct subjects / objects of a relation, ascending.
  std::span<const EntityId> subjects(RelationId relation) const;
  std::span<const EntityId> objects(RelationId relation) const;

  /// Outgoing triples of an entity ordered by (relation, tail).
  std::span<const Triple> outgoing(EntityId head) const;
  /// Incoming triples of an entity ordered by (relation, head).
  std::span<const Triple> incoming(EntityId tail) const;

  /// Union with `added`; this graph is left unchanged.
  KnowledgeGraph merge(std::span<const Triple> added) const;

 private:
  struct Range {
    std::uint32_t offset = 0;
    std::uint32_t length = 0;
  };
  static std::uint64_t key(std::uint32_t a, std::uint32_t b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }
  void build_indices();

  std::shared_ptr<const Vocabulary> vocab_;
  std::vector<Triple> by_head_;
  std::vector<Triple> by_tail_;
  std::vector<Triple> by_relation_;
  std::vector<EntityId> hr_tails_;
  std::vector<EntityId> rt_heads_;
  std::unordered_map<std::uint64_t, Range> hr_index_;
  std::unordered_map<std::uint64_t, Range> rt_index_;
  std::vector<std::size_t> head_offsets_;
  std::vector<std::size_t> tail_offsets_;
  std::vector<std::size_t> relation_offsets_;
  std::vector<EntityId> subjects_;
  std::vector<EntityId> objects_;
  std::vector<std::size_t> subject_offsets_;
  std::vector<std::size_t> object_offsets_;
};

}  // namespace kgr
