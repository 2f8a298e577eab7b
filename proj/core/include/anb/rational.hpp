#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace anb {

// Arbitrary-precision rational used for every local count, payload and final
// count. GMP keeps the results of arithmetic in lowest terms with a positive
// denominator.
using ExactCount = mpq_class;

// "num/den", the denominator is always written (3 -> "3/1").
std::string to_fraction_string(const ExactCount& value);

// Decimal rendering with the given number of significant digits ("%.6g").
std::string to_decimal_string(const ExactCount& value, int significant = 6);

// Accepts "p/q", "p" and finite decimals such as "1.25" or "-0.5" and returns
// the exact value. Throws std::invalid_argument on malformed input or a zero
// denominator.
ExactCount parse_exact_count(std::string_view text);

// True when the value is an integer (denominator 1).
inline bool is_integral(const ExactCount& value) { return value.get_den() == 1; }

// Running sum of ExactCount values. The sum is held over the least common
// multiple of the denominators added so far and only reduced on value(), so
// most additions need no gcd.
class ExactSum {
 public:
  ExactSum() = default;
  explicit ExactSum(const ExactCount& initial) { *this += initial; }

  ExactSum& operator+=(const ExactCount& v);
  ExactCount value() const;

  friend bool operator==(const ExactSum& a, const ExactSum& b) { return a.value() == b.value(); }
  friend bool operator==(const ExactSum& a, const ExactCount& b) { return a.value() == b; }

 private:
  mpz_class num_{0};
  mpz_class den_{1};
  mpz_class scale_;
};

}  // namespace anb
