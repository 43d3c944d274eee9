#pragma once

#include <boost/rational.hpp>
#include <stdexcept>
#include <string>

namespace stam {

// Exact arithmetic for the fractional-partition polytope. All matrices
// involved are 0/1 with ground size <= 6, so long long never overflows.
using Rational = boost::rational<long long>;

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Parses "3", "-1/2"; throws on malformed input or zero denominator.
inline Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    const long long num = std::stoll(text.substr(0, slash), &used);
    if (used != (slash == std::string::npos ? text.size() : slash))
      throw std::invalid_argument(text);
    if (slash == std::string::npos) return Rational(num);
    const std::string den_text = text.substr(slash + 1);
    const long long den = std::stoll(den_text, &used);
    if (used != den_text.size()) throw std::invalid_argument(text);
    return Rational(num, den);
  } catch (const boost::bad_rational&) {
    throw std::invalid_argument("zero denominator in rational '" + text + "'");
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("bad rational '" + text + "'");
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("rational out of range '" + text + "'");
  }
}

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) /
         static_cast<double>(r.denominator());
}

}  // namespace stam
