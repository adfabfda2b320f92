#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace vcsim {

// Simulation clock in whole ticks.
struct SimTime {
  std::uint64_t ticks = 0;

  auto operator<=>(const SimTime&) const = default;
};

inline constexpr SimTime operator+(SimTime t, std::uint64_t delta) { return SimTime{t.ticks + delta}; }

inline std::ostream& operator<<(std::ostream& os, SimTime t) { return os << t.ticks; }

// String-backed identifier distinguished by tag so party ids, skus and order
// ids cannot be mixed up.
template <typename Tag>
struct Token {
  std::string value;

  Token() = default;
  explicit Token(std::string v) : value(std::move(v)) {}

  bool empty() const noexcept { return value.empty(); }
  const std::string& str() const noexcept { return value; }

  auto operator<=>(const Token&) const = default;
  bool operator==(const Token&) const = default;
};

template <typename Tag>
std::ostream& operator<<(std::ostream& os, const Token<Tag>& t) {
  return os << t.value;
}

using PartyId = Token<struct PartyIdTag>;
using Sku = Token<struct SkuTag>;

// Quantities of goods and money in integer minor units. Money paths never
// touch floating point.
using Quantity = std::int64_t;
using Money = std::int64_t;

// Exception carrying a module-specific error code.
template <typename Code>
class Error : public std::runtime_error {
 public:
  Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

// Thrown by checked arithmetic when a 64-bit money or quantity path overflows.
class ArithmeticOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw ArithmeticOverflow("integer overflow in addition");
  return out;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw ArithmeticOverflow("integer overflow in multiplication");
  return out;
}

// Identifiers appear as whitespace-separated tokens in the event log, so they
// are restricted to a conservative character set.
inline bool is_valid_token(std::string_view s) noexcept {
  if (s.empty()) return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                    c == '-' || c == '.' || c == '@' || c == ':';
    if (!ok) return false;
  }
  return true;
}

// FNV-1a, used for state fingerprints in purity checks.
class Fnv1a {
 public:
  void add(std::string_view bytes) noexcept {
    for (unsigned char c : bytes) {
      hash_ ^= c;
      hash_ *= 1099511628211ULL;
    }
    // Field separator so ("ab","c") and ("a","bc") differ.
    hash_ ^= 0xffu;
    hash_ *= 1099511628211ULL;
  }
  void add(std::int64_t v) { add(std::to_string(v)); }
  void add(std::uint64_t v) { add(std::to_string(v)); }

  std::uint64_t value() const noexcept { return hash_; }

 private:
  std::uint64_t hash_ = 14695981039346656037ULL;
};

// Exact non-negative fraction, always stored in lowest terms.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = g == 0 ? 0 : num / g;
    den_ = g == 0 ? 1 : den / g;
  }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  bool operator==(const Rational&) const = default;

  std::string fraction() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  // Six decimal places, rounded half away from zero, computed in integers.
  std::string decimal6() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

__extension__ using Int128 = __int128;

inline std::string Rational::decimal6() const {
  const bool negative = num_ < 0;
  const Int128 n = negative ? -static_cast<Int128>(num_) : static_cast<Int128>(num_);
  const Int128 scaled = (n * 1000000 * 2 + den_) / (static_cast<Int128>(den_) * 2);
  const auto whole = static_cast<std::int64_t>(scaled / 1000000);
  const auto frac = static_cast<std::int64_t>(scaled % 1000000);
  std::string digits = std::to_string(frac);
  digits.insert(0, 6 - digits.size(), '0');
  return (negative && scaled != 0 ? "-" : "") + std::to_string(whole) + "." + digits;
}

}  // namespace vcsim
