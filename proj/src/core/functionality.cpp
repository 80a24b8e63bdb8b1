#include "kgr/core/functionality.hpp"

#include <string>

namespace kgr {

const FunctionalityEntry& FunctionalityTable::at(RelationId r) const {
  if (!has(r)) throw ContractError("relation " + std::to_string(r) + " has no triples; functionality undefined");
  return *entries_[r];
}

FunctionalityTable functionality(const KnowledgeGraph& kg) {
  std::vector<std::optional<FunctionalityEntry>> entries(kg.relation_count());
  for (RelationId r = 0; r < kg.relation_count(); ++r) {
    const auto pairs = kg.relation_triples(r).size();
    if (pairs == 0) continue;
    FunctionalityEntry e;
    e.fun = Rational(kg.subjects(r).size(), pairs);
    e.fun_inv = Rational(kg.objects(r).size(), pairs);
    e.subject_functional = e.fun >= e.fun_inv;
    entries[r] = e;
  }
  return FunctionalityTable(std::move(entries));
}

}  // namespace kgr
