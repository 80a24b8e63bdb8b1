#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace kgr {

/// Non-negative exact fraction, always stored reduced. Metrics stay exact until report time.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::uint64_t num, std::uint64_t den);

  std::uint64_t num() const { return num_; }
  std::uint64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

}  // namespace kgr
