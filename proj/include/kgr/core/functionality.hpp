#pragma once

#include <optional>
#include <vector>

#include "kgr/core/knowledge_graph.hpp"
#include "kgr/core/rational.hpp"

namespace kgr {

struct FunctionalityEntry {
  Rational fun;      ///< distinct subjects / pairs
  Rational fun_inv;  ///< distinct objects / pairs
  /// fun >= fun_inv; ties count as subject-functional.
  bool subject_functional = true;
};

class FunctionalityTable {
 public:
  FunctionalityTable() = default;
  explicit FunctionalityTable(std::vector<std::optional<FunctionalityEntry>> entries)
      : entries_(std::move(entries)) {}

  bool has(RelationId r) const { return r < entries_.size() && entries_[r].has_value(); }
  /// Throws ContractError for relations without triples.
  const FunctionalityEntry& at(RelationId r) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<std::optional<FunctionalityEntry>> entries_;
};

FunctionalityTable functionality(const KnowledgeGraph& kg);

}  // namespace kgr
