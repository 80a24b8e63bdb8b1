#include "kgr/core/knowledge_graph.hpp"

#include <algorithm>
#include <tuple>

namespace kgr {

namespace {

// Fills offsets[k] .. offsets[k+1] with the extent of key k in a sorted array.
template <typename KeyFn>
std::vector<std::size_t> bucket_offsets(std::span<const Triple> sorted, std::size_t buckets, KeyFn key) {
  std::vector<std::size_t> offsets(buckets + 1, 0);
  for (const auto& t : sorted) ++offsets[key(t) + 1];
  for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] += offsets[i - 1];
  return offsets;
}

}  // namespace

KnowledgeGraph::KnowledgeGraph() : KnowledgeGraph(std::make_shared<const Vocabulary>(), {}) {}

KnowledgeGraph::KnowledgeGraph(std::shared_ptr<const Vocabulary> vocab, std::vector<Triple> triples)
    : vocab_(std::move(vocab)), by_head_(std::move(triples)) {
  if (!vocab_) vocab_ = std::make_shared<const Vocabulary>();
  const auto ne = vocab_->entity_count();
  const auto nr = vocab_->relation_count();
  for (const auto& t : by_head_) {
    if (t.head >= ne || t.tail >= ne || t.relation >= nr)
      throw VocabularyError("triple id out of range for vocabulary");
  }
  std::sort(by_head_.begin(), by_head_.end());
  by_head_.erase(std::unique(by_head_.begin(), by_head_.end()), by_head_.end());
  build_indices();
}

void KnowledgeGraph::build_indices() {
  const auto ne = entity_count();
  const auto nr = relation_count();

  by_tail_ = by_head_;
  std::sort(by_tail_.begin(), by_tail_.end(), [](const Triple& a, const Triple& b) {
    return std::tie(a.tail, a.relation, a.head) < std::tie(b.tail, b.relation, b.head);
  });
  by_relation_ = by_head_;
  std::sort(by_relation_.begin(), by_relation_.end(), RelationMajorLess{});

  head_offsets_ = bucket_offsets(by_head_, ne, [](const Triple& t) { return t.head; });
  tail_offsets_ = bucket_offsets(by_tail_, ne, [](const Triple& t) { return t.tail; });
  relation_offsets_ = bucket_offsets(by_relation_, nr, [](const Triple& t) { return t.relation; });

  hr_tails_.resize(by_head_.size());
  hr_index_.clear();
  hr_index_.reserve(by_head_.size());
  for (std::size_t i = 0; i < by_head_.size(); ++i) {
    const auto& t = by_head_[i];
    hr_tails_[i] = t.tail;
    auto& range = hr_index_[key(t.head, t.relation)];
    if (range.length == 0) range.offset = static_cast<std::uint32_t>(i);
    ++range.length;
  }

  // (relation, tail, head) order gives contiguous head lists per (r,t).
  std::vector<Triple> by_rt = by_head_;
  std::sort(by_rt.begin(), by_rt.end(), [](const Triple& a, const Triple& b) {
    return std::tie(a.relation, a.tail, a.head) < std::tie(b.relation, b.tail, b.head);
  });
  rt_heads_.resize(by_rt.size());
  rt_index_.clear();
  rt_index_.reserve(by_rt.size());
  for (std::size_t i = 0; i < by_rt.size(); ++i) {
    const auto& t = by_rt[i];
    rt_heads_[i] = t.head;
    auto& range = rt_index_[key(t.relation, t.tail)];
    if (range.length == 0) range.offset = static_cast<std::uint32_t>(i);
    ++range.length;
  }

  subjects_.clear();
  objects_.clear();
  subject_offsets_.assign(nr + 1, 0);
  object_offsets_.assign(nr + 1, 0);
  for (RelationId r = 0; r < nr; ++r) {
    subject_offsets_[r] = subjects_.size();
    object_offsets_[r] = objects_.size();
    const auto rel = relation_triples(r);
    const auto first_object = objects_.size();
    for (const auto& t : rel) {
      if (subjects_.size() == subject_offsets_[r] || subjects_.back() != t.head) subjects_.push_back(t.head);
      objects_.push_back(t.tail);
    }
    std::sort(objects_.begin() + static_cast<std::ptrdiff_t>(first_object), objects_.end());
    objects_.erase(std::unique(objects_.begin() + static_cast<std::ptrdiff_t>(first_object), objects_.end()),
                   objects_.end());
  }
  subject_offsets_[nr] = subjects_.size();
  object_offsets_[nr] = objects_.size();
}

bool KnowledgeGraph::contains(const Triple& t) const {
  const auto list = tails(t.head, t.relation);
  return std::binary_search(list.begin(), list.end(), t.tail);
}

std::span<const EntityId> KnowledgeGraph::tails(EntityId head, RelationId relation) const {
  auto it = hr_index_.find(key(head, relation));
  if (it == hr_index_.end()) return {};
  return std::span<const EntityId>(hr_tails_).subspan(it->second.offset, it->second.length);
}

std::span<const EntityId> KnowledgeGraph::heads(RelationId relation, EntityId tail) const {
  auto it = rt_index_.find(key(relation, tail));
  if (it == rt_index_.end()) return {};
  return std::span<const EntityId>(rt_heads_).subspan(it->second.offset, it->second.length);
}

std::span<const Triple> KnowledgeGraph::relation_triples(RelationId relation) const {
  if (relation >= relation_count()) return {};
  return std::span<const Triple>(by_relation_)
      .subspan(relation_offsets_[relation], relation_offsets_[relation + 1] - relation_offsets_[relation]);
}

std::span<const EntityId> KnowledgeGraph::subjects(RelationId relation) const {
  if (relation >= relation_count()) return {};
  return std::span<const EntityId>(subjects_)
      .subspan(subject_offsets_[relation], subject_offsets_[relation + 1] - subject_offsets_[relation]);
}

std::span<const EntityId> KnowledgeGraph::objects(RelationId relation) const {
  if (relation >= relation_count()) return {};
  return std::span<const EntityId>(objects_)
      .subspan(object_offsets_[relation], object_offsets_[relation + 1] - object_offsets_[relation]);
}

std::span<const Triple> KnowledgeGraph::outgoing(EntityId head) const {
  if (head >= entity_count()) return {};
  return std::span<const Triple>(by_head_).subspan(head_offsets_[head], head_offsets_[head + 1] - head_offsets_[head]);
}

std::span<const Triple> KnowledgeGraph::incoming(EntityId tail) const {
  if (tail >= entity_count()) return {};
  return std::span<const Triple>(by_tail_).subspan(tail_offsets_[tail], tail_offsets_[tail + 1] - tail_offsets_[tail]);
}

KnowledgeGraph KnowledgeGraph::merge(std::span<const Triple> added) const {
  std::vector<Triple> all(by_head_.begin(), by_head_.end());
  all.insert(all.end(), added.begin(), added.end());
  return KnowledgeGraph(vocab_, std::move(all));
}

}  // namespace kgr
