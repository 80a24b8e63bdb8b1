#include "kgr/core/vocabulary.hpp"

namespace kgr {
namespace detail {

std::uint32_t LabelTable::intern(std::string_view label) {
  if (auto it = ids_.find(label); it != ids_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(labels_.size());
  labels_.emplace_back(label);
  ids_.emplace(labels_.back(), id);
  return id;
}

std::optional<std::uint32_t> LabelTable::find(std::string_view label) const {
  if (auto it = ids_.find(label); it != ids_.end()) return it->second;
  return std::nullopt;
}

}  // namespace detail

EntityId Vocabulary::entity_id(std::string_view label) const {
  if (auto id = entities_.find(label)) return *id;
  throw VocabularyError("unknown entity '" + std::string(label) + "'");
}

RelationId Vocabulary::relation_id(std::string_view label) const {
  if (auto id = relations_.find(label)) return *id;
  throw VocabularyError("unknown relation '" + std::string(label) + "'");
}

}  // namespace kgr
