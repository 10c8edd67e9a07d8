#include "speedscale/rational.hpp"

#include <cmath>
#include <cstdlib>

namespace speedscale {

Rat rat_from_double(double value) {
  if (!std::isfinite(value)) throw ParameterError("non-finite value has no rational form");
  if (value == 0.0) return Rat(0);
  int exp = 0;
  double mant = std::frexp(value, &exp);  // value = mant * 2^exp, |mant| in [0.5, 1)
  // 53 doublings turn the mantissa into an integer.
  auto mant_int = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  Rat r(mant_int);
  if (exp >= 0) {
    r *= Rat(BigInt(1) << exp);
  } else {
    r /= Rat(BigInt(1) << -exp);
  }
  return r;
}

std::string rat_str(const Rat& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

namespace {

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

// cpp_int reads a leading zero as an octal prefix; decimal is always meant.
BigInt decimal_int(const std::string& s) {
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  const bool negative = s[0] == '-';
  while (i + 1 < s.size() && s[i] == '0') ++i;
  BigInt value(s.substr(i));
  return negative ? -value : value;
}

}  // namespace

Rat parse_rat(const std::string& text) {
  const auto bad = [&] { return ParameterError("invalid rational: '" + text + "'"); };
  if (text.empty()) throw bad();
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den)) throw bad();
    BigInt q = decimal_int(den);
    if (q == 0) throw bad();
    return Rat(decimal_int(num), q);
  }
  const auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t frac_digits = text.size() - dot - 1;
    if (frac_digits == 0 || frac_digits > 30) throw bad();
    if (!is_integer_token(digits)) throw bad();
    BigInt den = 1;
    for (std::size_t i = 0; i < frac_digits; ++i) den *= 10;
    return Rat(decimal_int(digits), den);
  }
  if (!is_integer_token(text)) throw bad();
  return Rat(decimal_int(text));
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace speedscale
