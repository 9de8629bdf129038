#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace facloc {

/// Exact rational coordinate.
///
/// Alternatives live on the rational line and only ever need ordering,
/// equality, and text round-tripping, so no arithmetic is provided.
/// Values are kept normalized (gcd 1, positive denominator); equality is
/// structural. Text forms are "p" and "p/q".
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num) : num_(num), den_(1) {}  // NOLINT: implicit by design
  Rational(std::int64_t num, std::int64_t den);

  /// Parses "p" or "p/q" with optional leading '-'. Throws
  /// std::invalid_argument on anything else (floats included).
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  std::string str() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  std::strong_ordering operator<=>(const Rational& other) const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace facloc
