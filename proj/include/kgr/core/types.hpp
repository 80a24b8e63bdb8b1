#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <tuple>

namespace kgr {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

/// A fact (head, relation, tail). Default ordering is (head, relation, tail).
struct Triple {
  EntityId head = 0;
  RelationId relation = 0;
  EntityId tail = 0;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

/// Orders triples by (relation, head, tail); used wherever candidate order matters.
struct RelationMajorLess {
  bool operator()(const Triple& a, const Triple& b) const {
    return std::tie(a.relation, a.head, a.tail) < std::tie(b.relation, b.head, b.tail);
  }
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    std::uint64_t x = (static_cast<std::uint64_t>(t.head) << 32) ^ t.tail;
    x ^= static_cast<std::uint64_t>(t.relation) * 0x9E3779B97F4A7C15ULL;
    x ^= x >> 31;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 29;
    return static_cast<std::size_t>(x);
  }
};

// Error hierarchy. The CLI maps these onto exit codes.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: flags, config values, hyper-parameter bounds.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent data files.
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& where, std::size_t line, const std::string& what)
      : DataError(where + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class VocabularyError : public DataError {
 public:
  using DataError::DataError;
};

/// Divergence during training (NaN/Inf loss or parameters).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Violated call contract (mismatched batch sizes, undefined metric).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace kgr
