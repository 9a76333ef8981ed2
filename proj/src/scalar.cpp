#include "aiet/scalar.hpp"

#include <gmp.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>

#include "aiet/error.hpp"

namespace aiet {

std::string_view to_string(Mode mode) { return mode == Mode::rational ? "rational" : "float"; }

Mode parse_mode(std::string_view text) {
  if (text == "rational") return Mode::rational;
  if (text == "float") return Mode::floating;
  throw Error(ErrorCode::config_invalid, "unknown mode '" + std::string(text) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// mpz string parsing treats a leading 0 as an octal prefix
Integer decimal_integer(std::string_view digits) {
  Integer v;
  if (mpz_set_str(v.backend().data(), std::string(digits).c_str(), 10) != 0)
    throw Error(ErrorCode::malformed_input, "bad number '" + std::string(digits) + "'");
  return v;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) throw Error(ErrorCode::malformed_input, "bad number '" + std::string(whole) + "'");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw Error(ErrorCode::malformed_input, "bad number '" + std::string(whole) + "'");
  for (std::size_t k = i; k < s.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(s[k])))
      throw Error(ErrorCode::malformed_input, "bad number '" + std::string(whole) + "'");
  }
  Integer v = decimal_integer(s.substr(i));
  return s[0] == '-' ? Integer(-v) : v;
}

Integer pow10(long e) {
  Integer r(1);
  mpz_ui_pow_ui(r.backend().data(), 10, static_cast<unsigned long>(e));
  return r;
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string_view::npos) {
    auto etext = s.substr(epos + 1);
    auto res = std::from_chars(etext.data() + (etext.starts_with('+') ? 1 : 0),
                               etext.data() + etext.size(), exponent);
    if (res.ec != std::errc() || res.ptr != etext.data() + etext.size() || etext.empty())
      throw Error(ErrorCode::malformed_input, "bad exponent in '" + std::string(whole) + "'");
    s = s.substr(0, epos);
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (char c : s) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      throw Error(ErrorCode::malformed_input, "bad number '" + std::string(whole) + "'");
    }
  }
  if (digits.empty()) throw Error(ErrorCode::malformed_input, "bad number '" + std::string(whole) + "'");
  Integer mantissa = decimal_integer(digits);
  long scale = exponent - frac_digits;
  Rational value = scale >= 0 ? Rational(mantissa * pow10(scale)) : Rational(mantissa, pow10(-scale));
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto s = trim(text);
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_decimal(s, text);
  Integer num = parse_integer(trim(s.substr(0, slash)), text);
  Integer den = parse_integer(trim(s.substr(slash + 1)), text);
  if (den == 0) throw Error(ErrorCode::malformed_input, "zero denominator in '" + std::string(text) + "'");
  // the (num, den) constructor canonicalizes
  return Rational(num, den);
}

std::string format_rational(const Rational& value) {
  if (mp::denominator(value) == 1) return mp::numerator(value).str();
  return mp::numerator(value).str() + "/" + mp::denominator(value).str();
}

double log_abs(const Integer& value) {
  if (value == 0) return -std::numeric_limits<double>::infinity();
  long exp2 = 0;
  double mantissa = mpz_get_d_2exp(&exp2, value.backend().data());
  return std::log(std::fabs(mantissa)) + static_cast<double>(exp2) * std::log(2.0);
}

double log_abs(const Rational& value) {
  if (value == 0) return -std::numeric_limits<double>::infinity();
  return log_abs(Integer(mp::numerator(value))) - log_abs(Integer(mp::denominator(value)));
}

GoldenNumber golden_ratio() { return {Rational(1, 2), Rational(1, 2)}; }

bool mentions_sqrt5(std::string_view text) { return text.find("sqrt5") != std::string_view::npos; }

GoldenNumber parse_golden(std::string_view text) {
  auto s = trim(text);
  auto root = s.find("sqrt5");
  if (root == std::string_view::npos) return GoldenNumber(parse_rational(s));
  if (trim(s.substr(root + 5)).size() != 0)
    throw Error(ErrorCode::malformed_input, "sqrt5 term must come last in '" + std::string(text) + "'");
  auto head = trim(s.substr(0, root));
  if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
  // split "a+b" at the last sign that is not part of an exponent or a leading sign
  std::size_t split = std::string_view::npos;
  for (std::size_t i = head.size(); i-- > 1;) {
    char c = head[i];
    char prev = head[i - 1];
    if ((c == '+' || c == '-') && prev != 'e' && prev != 'E' && prev != '/') {
      split = i;
      break;
    }
  }
  Rational a(0);
  std::string_view coeff = head;
  if (split != std::string_view::npos) {
    a = parse_rational(head.substr(0, split));
    coeff = trim(head.substr(split));
  }
  Rational b(1);
  if (coeff.empty() || coeff == "+") {
    b = Rational(1);
  } else if (coeff == "-") {
    b = Rational(-1);
  } else {
    std::string c(coeff);
    c.erase(std::remove(c.begin(), c.end(), ' '), c.end());
    if (c.front() == '+') c.erase(0, 1);
    b = parse_rational(c);
  }
  return {a, b};
}

template <>
double parse_scalar<double>(std::string_view text) {
  auto s = trim(text);
  if (s.find('/') != std::string_view::npos) return parse_rational(s).convert_to<double>();
  std::string owned(s);
  char* end = nullptr;
  double v = std::strtod(owned.c_str(), &end);
  if (owned.empty() || end != owned.c_str() + owned.size() || !std::isfinite(v))
    throw Error(ErrorCode::malformed_input, "bad number '" + owned + "'");
  return v;
}

template <>
HighPrecision parse_scalar<HighPrecision>(std::string_view text) {
  return convert<HighPrecision>(parse_rational(text));
}

template <>
Rational parse_scalar<Rational>(std::string_view text) {
  return parse_rational(text);
}

std::string format_scalar(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_scalar(const HighPrecision& x) {
  return x.str(std::numeric_limits<HighPrecision>::digits10, std::ios_base::scientific);
}

std::string format_scalar(const Rational& x) { return format_rational(x); }

std::string format_scalar(const Integer& x) { return x.str(); }

}  // namespace aiet
