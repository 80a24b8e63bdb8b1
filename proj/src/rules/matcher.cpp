#include "kgr/rules/matcher.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

namespace kgr::rules {

namespace {

class Search {
 public:
  Search(const KnowledgeGraph& kg, std::span<const Atom> query, Binding& binding, const MatchVisitor& visit)
      : kg_(kg), query_(query), binding_(binding), visit_(visit) {}

  bool run(std::uint64_t remaining) {
    if (remaining == 0) return visit_(binding_);
    const std::size_t pick = most_selective(remaining);
    const Atom& atom = query_[pick];
    const std::uint64_t rest = remaining & ~(std::uint64_t{1} << pick);
    const EntityId s = resolve(atom.subject);
    const EntityId o = resolve(atom.object);
    const RelationId r = atom.relation;

    if (s != kUnbound && o != kUnbound) {
      if (!kg_.contains({s, r, o})) return true;
      return run(rest);
    }
    if (s != kUnbound) {
      for (EntityId t : kg_.tails(s, r)) {
        if (!bind(atom.object, t)) continue;
        const bool go = run(rest);
        unbind(atom.object);
        if (!go) return false;
      }
      return true;
    }
    if (o != kUnbound) {
      for (EntityId h : kg_.heads(r, o)) {
        if (!bind(atom.subject, h)) continue;
        const bool go = run(rest);
        unbind(atom.subject);
        if (!go) return false;
      }
      return true;
    }
    const bool same_var = atom.subject == atom.object;
    for (const Triple& t : kg_.relation_triples(r)) {
      if (same_var) {
        if (t.head != t.tail) continue;
        binding_[atom.subject.value] = t.head;
        const bool go = run(rest);
        binding_[atom.subject.value] = kUnbound;
        if (!go) return false;
        continue;
      }
      binding_[atom.subject.value] = t.head;
      binding_[atom.object.value] = t.tail;
      const bool go = run(rest);
      binding_[atom.subject.value] = kUnbound;
      binding_[atom.object.value] = kUnbound;
      if (!go) return false;
    }
    return true;
  }

 private:
  EntityId resolve(const Term& t) const { return t.is_constant() ? t.value : binding_[t.value]; }

  bool bind(const Term& t, EntityId e) {
    if (binding_[t.value] != kUnbound) return binding_[t.value] == e;
    binding_[t.value] = e;
    return true;
  }
  void unbind(const Term& t) { binding_[t.value] = kUnbound; }

  std::size_t cost(const Atom& a) const {
    const EntityId s = resolve(a.subject);
    const EntityId o = resolve(a.object);
    if (s != kUnbound && o != kUnbound) return 0;
    if (s != kUnbound) return kg_.tails(s, a.relation).size();
    if (o != kUnbound) return kg_.heads(a.relation, o).size();
    return kg_.relation_triples(a.relation).size();
  }

  std::size_t most_selective(std::uint64_t remaining) const {
    std::size_t best = 0;
    std::size_t best_cost = SIZE_MAX;
    for (std::uint64_t m = remaining; m != 0; m &= m - 1) {
      const auto i = static_cast<std::size_t>(std::countr_zero(m));
      const std::size_t c = cost(query_[i]);
      if (c < best_cost) {
        best_cost = c;
        best = i;
        if (c == 0) break;
      }
    }
    return best;
  }

  const KnowledgeGraph& kg_;
  std::span<const Atom> query_;
  Binding& binding_;
  const MatchVisitor& visit_;
};

}  // namespace

std::size_t variable_span(std::span<const Atom> query) {
  std::size_t n = 0;
  for (const auto& a : query) {
    if (a.subject.is_variable()) n = std::max<std::size_t>(n, a.subject.value + 1);
    if (a.object.is_variable()) n = std::max<std::size_t>(n, a.object.value + 1);
  }
  return n;
}

bool for_each_match(const KnowledgeGraph& kg, std::span<const Atom> query, Binding& binding,
                    const MatchVisitor& visit) {
  if (query.size() > 64) throw ContractError("queries are limited to 64 atoms");
  if (binding.size() < variable_span(query)) binding.resize(variable_span(query), kUnbound);
  Search search(kg, query, binding, visit);
  const std::uint64_t all = query.size() == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << query.size()) - 1);
  return search.run(all);
}

bool exists_match(const KnowledgeGraph& kg, std::span<const Atom> query, Binding& binding,
                  const MatchVisitor& accept) {
  bool found = false;
  for_each_match(kg, query, binding, [&](const Binding& b) {
    if (accept && !accept(b)) return true;
    found = true;
    return false;
  });
  return found;
}

std::vector<std::vector<EntityId>> match(const KnowledgeGraph& kg, std::span<const Atom> query,
                                         std::span<const std::uint32_t> projection) {
  if (query.empty()) throw ContractError("match needs a non-empty query");
  Binding binding(variable_span(query), kUnbound);
  for (auto v : projection) {
    if (v >= binding.size()) throw ContractError("projection variable not in query");
  }
  std::vector<std::vector<EntityId>> rows;
  for_each_match(kg, query, binding, [&](const Binding& b) {
    std::vector<EntityId> row;
    row.reserve(projection.size());
    for (auto v : projection) row.push_back(b[v]);
    rows.push_back(std::move(row));
    return true;
  });
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

}  // namespace kgr::rules
