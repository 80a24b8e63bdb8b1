#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgr/core/types.hpp"

namespace kgr {

namespace detail {
struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

/// Bijective label <-> dense id table; ids are handed out in first-seen order.
class LabelTable {
 public:
  std::uint32_t intern(std::string_view label);
  std::optional<std::uint32_t> find(std::string_view label) const;
  const std::string& label(std::uint32_t id) const { return labels_.at(id); }
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>> ids_;
};
}  // namespace detail

class Vocabulary {
 public:
  EntityId intern_entity(std::string_view label) { return entities_.intern(label); }
  RelationId intern_relation(std::string_view label) { return relations_.intern(label); }

  std::optional<EntityId> find_entity(std::string_view label) const { return entities_.find(label); }
  std::optional<RelationId> find_relation(std::string_view label) const { return relations_.find(label); }

  /// Throw VocabularyError when the label is unknown.
  EntityId entity_id(std::string_view label) const;
  RelationId relation_id(std::string_view label) const;

  const std::string& entity_label(EntityId id) const { return entities_.label(id); }
  const std::string& relation_label(RelationId id) const { return relations_.label(id); }

  std::size_t entity_count() const { return entities_.size(); }
  std::size_t relation_count() const { return relations_.size(); }

  const std::vector<std::string>& entity_labels() const { return entities_.labels(); }
  const std::vector<std::string>& relation_labels() const { return relations_.labels(); }

 private:
  detail::LabelTable entities_;
  detail::LabelTable relations_;
};

}  // namespace kgr
