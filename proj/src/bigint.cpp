#include "ppower/bigint.hpp"

#include <stdexcept>

namespace ppower {

BigInt parse_decimal(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty decimal string");
  for (char c : text)
    if (c < '0' || c > '9') throw std::invalid_argument("not a decimal count: " + text);
  return BigInt(text);
}

Ratio Ratio::reduced(BigInt num, BigInt den) {
  if (den == 0) throw std::domain_error("zero denominator");
  BigInt g = boost::multiprecision::gcd(num, den);
  if (g == 0) g = 1;
  return {num / g, den / g};
}

double Ratio::to_double() const {
  // Long division keeps precision for huge numerators and denominators.
  BigInt scaled = num * big_pow(10, 17) / den;
  return scaled.convert_to<double>() / 1e17;
}

}  // namespace ppower
