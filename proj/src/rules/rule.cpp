#include "kgr/rules/rule.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>

namespace kgr::rules {

namespace {

using AtomCode = std::array<std::uint32_t, 5>;

// Renames variables by first appearance over `order` (body) then the head and
// returns the encoded sequence along with the renamed atoms.
std::vector<AtomCode> encode(const std::vector<Atom>& body, const std::vector<std::size_t>& order, const Atom& head,
                             std::vector<Atom>* renamed_body, Atom* renamed_head, std::size_t* var_count) {
  std::map<std::uint32_t, std::uint32_t> names;
  auto rename = [&](const Term& t) {
    if (t.is_constant()) return t;
    auto [it, inserted] = names.try_emplace(t.value, static_cast<std::uint32_t>(names.size()));
    return Term::var(it->second);
  };
  auto code = [](const Atom& a) {
    return AtomCode{a.relation, static_cast<std::uint32_t>(a.subject.kind), a.subject.value,
                    static_cast<std::uint32_t>(a.object.kind), a.object.value};
  };
  std::vector<AtomCode> codes;
  codes.reserve(order.size() + 1);
  if (renamed_body) renamed_body->clear();
  for (std::size_t i : order) {
    Atom a{body[i].relation, rename(body[i].subject), rename(body[i].object)};
    codes.push_back(code(a));
    if (renamed_body) renamed_body->push_back(a);
  }
  Atom h{head.relation, rename(head.subject), rename(head.object)};
  codes.push_back(code(h));
  if (renamed_head) *renamed_head = h;
  if (var_count) *var_count = names.size();
  return codes;
}

}  // namespace

Rule::Rule(std::vector<Atom> body, Atom head) {
  std::vector<std::size_t> order(body.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Smallest encoding over all body orders is invariant under renaming and
  // reordering. Bodies are short, so the factorial is fine.
  std::vector<AtomCode> best;
  std::vector<std::size_t> best_order = order;
  do {
    auto codes = encode(body, order, head, nullptr, nullptr, nullptr);
    if (best.empty() || codes < best) {
      best = std::move(codes);
      best_order = order;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  encode(body, best_order, head, &body_, &head_, &variable_count_);
}

namespace {
template <typename Fn>
void for_each_term(const std::vector<Atom>& body, const Atom& head, Fn fn) {
  for (const auto& a : body) {
    fn(a.subject, false);
    fn(a.object, false);
  }
  fn(head.subject, true);
  fn(head.object, true);
}
}  // namespace

bool Rule::is_horn() const {
  std::vector<char> in_body(variable_count_, 0);
  for (const auto& a : body_) {
    if (a.subject.is_variable()) in_body[a.subject.value] = 1;
    if (a.object.is_variable()) in_body[a.object.value] = 1;
  }
  for (const Term* t : {&head_.subject, &head_.object}) {
    if (t->is_variable() && !in_body[t->value]) return false;
  }
  return true;
}

std::size_t Rule::dangling_variables() const {
  // Occurrence count per atom: r(x,x) counts once for x.
  std::vector<std::size_t> atoms_with(variable_count_, 0);
  auto count_atom = [&](const Atom& a) {
    if (a.subject.is_variable()) ++atoms_with[a.subject.value];
    if (a.object.is_variable() && !(a.subject.is_variable() && a.subject.value == a.object.value))
      ++atoms_with[a.object.value];
  };
  for (const auto& a : body_) count_atom(a);
  count_atom(head_);
  return static_cast<std::size_t>(std::count(atoms_with.begin(), atoms_with.end(), std::size_t{1}));
}

bool Rule::is_closed() const { return dangling_variables() == 0; }

bool Rule::has_constants() const {
  bool found = false;
  for_each_term(body_, head_, [&](const Term& t, bool) { found = found || t.is_constant(); });
  return found;
}

std::string Rule::key() const {
  std::string out;
  auto term = [&](const Term& t) {
    out += t.is_variable() ? '?' : '#';
    out += std::to_string(t.value);
  };
  auto atom = [&](const Atom& a) {
    out += std::to_string(a.relation);
    out += '(';
    term(a.subject);
    out += ',';
    term(a.object);
    out += ')';
  };
  for (const auto& a : body_) {
    atom(a);
    out += ' ';
  }
  out += "=> ";
  atom(head_);
  return out;
}

}  // namespace kgr::rules
