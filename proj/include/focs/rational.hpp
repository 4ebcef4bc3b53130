#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace focs {

// Exact rational scalar used for every time, energy, power, capacity and flow
// value in the library. No floating point enters the solver path.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Parses "12", "-3.25" or "4/3". Anything else (scientific notation, hex,
// empty fields) is rejected.
inline Rat rat_from_string(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) throw ParseError("empty numeric field");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  auto all_digits = [](std::string_view part) {
    if (part.empty()) return false;
    for (char c : part)
      if (c < '0' || c > '9') return false;
    return true;
  };
  auto bad = [&]() {
    return ParseError("not a rational literal: '" + std::string(text) + "'");
  };

  Rat magnitude;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw bad();
    BigInt d{std::string(den)};
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    magnitude = Rat(BigInt{std::string(num)}, d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (!all_digits(whole) || !all_digits(frac)) throw bad();
    BigInt scale = 1;
    for (size_t k = 0; k < frac.size(); ++k) scale *= 10;
    magnitude = Rat(BigInt{std::string(whole)} * scale + BigInt{std::string(frac)}, scale);
  } else {
    if (!all_digits(s)) throw bad();
    magnitude = Rat(BigInt{std::string(s)});
  }
  return negative ? Rat(-magnitude) : magnitude;
}

// Exact decimal when the reduced denominator is 2^a * 5^b, otherwise "num/den".
inline std::string rat_to_string(const Rat& value) {
  BigInt num = numerator(value);
  BigInt den = denominator(value);
  if (den == 1) return num.str();

  BigInt rest = den;
  int twos = 0, fives = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1) return num.str() + "/" + den.str();

  int places = twos > fives ? twos : fives;
  BigInt scale = pow(BigInt(10), static_cast<unsigned>(places));
  BigInt scaled = num * scale / den;  // exact: den divides 10^places
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits = scaled.str();
  if (static_cast<int>(digits.size()) <= places)
    digits.insert(0, std::string(places + 1 - digits.size(), '0'));
  digits.insert(digits.size() - places, ".");
  return negative ? "-" + digits : digits;
}

inline Rat rat_pow(const Rat& base, int exponent) {
  if (exponent < 0) {
    if (base == 0) throw std::domain_error("rat_pow: zero base with negative exponent");
    return Rat(1) / rat_pow(base, -exponent);
  }
  Rat result = 1;
  Rat b = base;
  int e = exponent;
  while (e > 0) {
    if (e & 1) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

}  // namespace focs
