#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace ppower {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt big_pow(std::uint64_t base, std::uint64_t exponent) {
  return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exponent));
}

inline std::string to_decimal(const BigInt& value) { return value.str(); }

/// Parses a non-negative decimal string; throws std::invalid_argument otherwise.
BigInt parse_decimal(const std::string& text);

/// An exact non-negative fraction in lowest terms.
struct Ratio {
  BigInt num;
  BigInt den = 1;

  static Ratio reduced(BigInt num, BigInt den);
  /// Cross-multiplied comparison, no floating point.
  friend bool operator<(const Ratio& a, const Ratio& b) { return a.num * b.den < b.num * a.den; }
  friend bool operator==(const Ratio& a, const Ratio& b) { return a.num * b.den == b.num * a.den; }
  friend bool operator>(const Ratio& a, const Ratio& b) { return b < a; }
  friend bool operator>=(const Ratio& a, const Ratio& b) { return !(a < b); }
  double to_double() const;
  std::string to_string() const { return num.str() + "/" + den.str(); }
};

}  // namespace ppower
