#include "kgr/core/rational.hpp"

#include <numeric>

#include "kgr/core/types.hpp"

namespace kgr {

Rational::Rational(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw ContractError("rational with zero denominator");
  const std::uint64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string Rational::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const unsigned __int128 lhs = static_cast<unsigned __int128>(a.num_) * b.den_;
  const unsigned __int128 rhs = static_cast<unsigned __int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace kgr
