#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "kgr/core/knowledge_graph.hpp"
#include "kgr/rules/rule.hpp"

namespace kgr::rules {

inline constexpr EntityId kUnbound = std::numeric_limits<EntityId>::max();

/// Variable index -> entity; kUnbound for free variables.
using Binding = std::vector<EntityId>;

/// Called for every complete assignment; return false to stop the search.
using MatchVisitor = std::function<bool(const Binding&)>;

/// Backtracking join over the graph indices. At every step the atom with the
/// fewest candidate facts under the current binding is expanded next.
/// Pre-bound entries of `binding` act as constants; the binding is restored
/// before returning. Returns false when the visitor stopped the search.
bool for_each_match(const KnowledgeGraph& kg, std::span<const Atom> query, Binding& binding,
                    const MatchVisitor& visit);

/// True if some completion of `binding` satisfies every atom (and `accept`, if given).
bool exists_match(const KnowledgeGraph& kg, std::span<const Atom> query, Binding& binding,
                  const MatchVisitor& accept = {});

/// Distinct projections of all satisfying assignments onto `projection`, ascending.
std::vector<std::vector<EntityId>> match(const KnowledgeGraph& kg, std::span<const Atom> query,
                                         std::span<const std::uint32_t> projection);

/// Number of variables referenced by the query (max index + 1).
std::size_t variable_span(std::span<const Atom> query);

}  // namespace kgr::rules
