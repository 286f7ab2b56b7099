#include "affract/rational.hpp"

#include <stdexcept>

namespace affract {

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(Int(text));
    }
    Int num(text.substr(0, slash));
    Int den(text.substr(slash + 1));
    if (den == 0) {
      throw std::invalid_argument("rational with zero denominator: " + text);
    }
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("not a rational: " + text);
  }
}

std::string format_decimal(const Rational& value, int significant) {
  if (value == 0) {
    return "0";
  }
  Int p = numerator(value);
  Int q = denominator(value);
  bool negative = p < 0;
  if (negative) {
    p = -p;
  }

  // Decimal exponent e with 10^e <= p/q < 10^(e+1).
  long e = static_cast<long>(p.str().size()) - static_cast<long>(q.str().size());
  auto pow10 = [](long k) {
    Int r = 1;
    for (long i = 0; i < k; ++i) r *= 10;
    return r;
  };
  // p.str().size() only brackets e within 1; settle it by comparison.
  while (e > 0 ? p < q * pow10(e) : p * pow10(-e) < q) --e;
  while (e + 1 > 0 ? p >= q * pow10(e + 1) : p * pow10(-(e + 1)) >= q) ++e;

  // Scaled integer with `significant` digits, rounded half away from zero.
  long shift = significant - 1 - e;
  Int num = p, den = q;
  if (shift >= 0) {
    num *= pow10(shift);
  } else {
    den *= pow10(-shift);
  }
  Int scaled = (2 * num + den) / (2 * den);
  if (scaled >= pow10(significant)) {  // rounding carried into a new digit
    scaled /= 10;
    ++e;
  }

  std::string digits = scaled.str();
  std::string out;
  if (e >= significant - 1) {
    out = digits + std::string(static_cast<std::size_t>(e - significant + 1), '0');
  } else if (e >= 0) {
    out = digits.substr(0, static_cast<std::size_t>(e + 1)) + "." +
          digits.substr(static_cast<std::size_t>(e + 1));
  } else {
    out = "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + digits;
  }
  if (out.find('.') != std::string::npos) {
    auto last = out.find_last_not_of('0');
    if (out[last] == '.') --last;
    out.erase(last + 1);
  }
  return negative ? "-" + out : out;
}

}  // namespace affract
