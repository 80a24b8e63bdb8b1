#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "kgr/core/types.hpp"

namespace kgr::rules {

/// A variable (by index) or an entity constant.
struct Term {
  enum class Kind : std::uint8_t { Variable, Constant };
  Kind kind = Kind::Variable;
  std::uint32_t value = 0;

  static Term var(std::uint32_t index) { return {Kind::Variable, index}; }
  static Term constant(EntityId e) { return {Kind::Constant, e}; }
  bool is_variable() const { return kind == Kind::Variable; }
  bool is_constant() const { return kind == Kind::Constant; }

  friend auto operator<=>(const Term&, const Term&) = default;
};

struct Atom {
  RelationId relation = 0;
  Term subject;
  Term object;

  friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// body => head, held in canonical form: body atoms ordered and variables
/// numbered 0, 1, 2, ... by first appearance (body first, then head) so that
/// rules equal up to renaming and body reordering compare equal.
class Rule {
 public:
  Rule() = default;
  Rule(std::vector<Atom> body, Atom head);

  const std::vector<Atom>& body() const { return body_; }
  const Atom& head() const { return head_; }
  std::size_t variable_count() const { return variable_count_; }

  /// Every head variable occurs in the body.
  bool is_horn() const;
  /// Every variable occurs in at least two atoms.
  bool is_closed() const;
  /// Variables occurring in exactly one atom.
  std::size_t dangling_variables() const;
  bool has_constants() const;

  /// Compact id-based identity; equal iff the canonical forms are equal.
  std::string key() const;

  friend bool operator==(const Rule&, const Rule&) = default;

 private:
  std::vector<Atom> body_;
  Atom head_;
  std::size_t variable_count_ = 0;
};

}  // namespace kgr::rules
