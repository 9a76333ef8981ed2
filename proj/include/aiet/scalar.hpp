#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace aiet {

namespace mp = boost::multiprecision;

using Integer = mp::number<mp::gmp_int, mp::et_off>;
using Rational = mp::number<mp::gmp_rational, mp::et_off>;
/// 100 decimal digits; used where double cannot resolve a long Rauzy path.
using HighPrecision = mp::number<mp::cpp_bin_float<100>, mp::et_off>;

enum class Mode { rational, floating };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

/// Accepts "p/q", integers and decimal notation ("-0.125", "3e-4"); the value
/// is exact, so "0.1" is 1/10.
Rational parse_rational(std::string_view text);
/// "p/q", or "p" when the denominator is 1.
std::string format_rational(const Rational& value);

/// log|x| for rationals far outside the double range.
double log_abs(const Rational& value);
double log_abs(const Integer& value);

/// Exact numbers a + b*sqrt(D) in the real quadratic field Q(sqrt(D)), D not a
/// square. Orders exactly, so induction on quadratic-irrational data never
/// needs a tie tolerance.
template <unsigned D>
class QuadraticNumber {
 public:
  QuadraticNumber() = default;
  QuadraticNumber(int a) : a_(a) {}  // NOLINT(google-explicit-constructor)
  QuadraticNumber(Rational a) : a_(std::move(a)) {}  // NOLINT
  QuadraticNumber(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

  static QuadraticNumber root() { return {Rational(0), Rational(1)}; }

  const Rational& rational_part() const { return a_; }
  const Rational& root_part() const { return b_; }

  /// -1, 0 or 1.
  int sign() const {
    int sa = a_.sign();
    int sb = b_.sign();
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    Rational lhs = a_ * a_;
    Rational rhs = b_ * b_ * Rational(D);
    return lhs > rhs ? sa : sb;
  }

  QuadraticNumber conjugate() const { return {a_, -b_}; }
  Rational norm() const { return a_ * a_ - Rational(D) * b_ * b_; }

  QuadraticNumber& operator+=(const QuadraticNumber& o) { a_ += o.a_; b_ += o.b_; return *this; }
  QuadraticNumber& operator-=(const QuadraticNumber& o) { a_ -= o.a_; b_ -= o.b_; return *this; }
  QuadraticNumber& operator*=(const QuadraticNumber& o) {
    Rational a = a_ * o.a_ + Rational(D) * b_ * o.b_;
    Rational b = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(a);
    b_ = std::move(b);
    return *this;
  }
  QuadraticNumber& operator/=(const QuadraticNumber& o) {
    Rational n = o.norm();
    if (n == 0) throw std::domain_error("QuadraticNumber: division by zero");
    *this *= o.conjugate();
    a_ /= n;
    b_ /= n;
    return *this;
  }

  friend QuadraticNumber operator+(QuadraticNumber x, const QuadraticNumber& y) { return x += y; }
  friend QuadraticNumber operator-(QuadraticNumber x, const QuadraticNumber& y) { return x -= y; }
  friend QuadraticNumber operator*(QuadraticNumber x, const QuadraticNumber& y) { return x *= y; }
  friend QuadraticNumber operator/(QuadraticNumber x, const QuadraticNumber& y) { return x /= y; }
  friend QuadraticNumber operator-(const QuadraticNumber& x) { return {-x.a_, -x.b_}; }

  friend bool operator==(const QuadraticNumber& x, const QuadraticNumber& y) {
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator<(const QuadraticNumber& x, const QuadraticNumber& y) { return (x - y).sign() < 0; }
  friend bool operator>(const QuadraticNumber& x, const QuadraticNumber& y) { return y < x; }
  friend bool operator<=(const QuadraticNumber& x, const QuadraticNumber& y) { return !(y < x); }
  friend bool operator>=(const QuadraticNumber& x, const QuadraticNumber& y) { return !(x < y); }

  template <class R>
  R to() const {
    using std::sqrt;
    return R(a_) + R(b_) * sqrt(R(D));
  }

  std::string str() const {
    return format_rational(a_) + (b_.sign() < 0 ? "-" : "+") + format_rational(abs(b_)) + "*sqrt" +
           std::to_string(D);
  }

  friend std::ostream& operator<<(std::ostream& os, const QuadraticNumber& x) { return os << x.str(); }

 private:
  Rational a_{0};
  Rational b_{0};
};

using GoldenNumber = QuadraticNumber<5>;

/// phi = (1 + sqrt 5) / 2.
GoldenNumber golden_ratio();

/// "a+b*sqrt5", "b*sqrt5", "-sqrt5" or a plain rational, with a and b in
/// parse_rational syntax.
GoldenNumber parse_golden(std::string_view text);
bool mentions_sqrt5(std::string_view text);

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr Mode mode = Mode::floating;
  static double tie_tolerance() { return 1e-12; }
  static double epsilon() { return std::numeric_limits<double>::epsilon(); }
};

template <>
struct ScalarTraits<HighPrecision> {
  static constexpr bool exact = false;
  static constexpr Mode mode = Mode::floating;
  static HighPrecision tie_tolerance() { return HighPrecision("1e-80"); }
  static HighPrecision epsilon() { return std::numeric_limits<HighPrecision>::epsilon(); }
};

template <>
struct ScalarTraits<Integer> {
  static constexpr bool exact = true;
  static constexpr Mode mode = Mode::rational;
  static Integer tie_tolerance() { return Integer(0); }
  static Integer epsilon() { return Integer(0); }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr Mode mode = Mode::rational;
  static Rational tie_tolerance() { return Rational(0); }
  static Rational epsilon() { return Rational(0); }
};

template <unsigned D>
struct ScalarTraits<QuadraticNumber<D>> {
  static constexpr bool exact = true;
  static constexpr Mode mode = Mode::rational;
  static QuadraticNumber<D> tie_tolerance() { return 0; }
  static QuadraticNumber<D> epsilon() { return 0; }
};

template <class T>
inline constexpr bool is_exact_v = ScalarTraits<T>::exact;

template <class T>
T abs_value(const T& x) {
  if constexpr (std::is_same_v<T, double>) {
    return std::fabs(x);
  } else {
    return x < T(0) ? T(-x) : x;
  }
}

/// Value conversion between the scalar kinds. Exact targets require exact or
/// binary-floating sources (doubles convert exactly as dyadic rationals).
template <class To, class From>
To convert(const From& x) {
  if constexpr (std::is_same_v<To, From>) {
    return x;
  } else if constexpr (std::is_same_v<From, Integer>) {
    if constexpr (std::is_same_v<To, double>) {
      return x.template convert_to<double>();
    } else if constexpr (std::is_same_v<To, HighPrecision>) {
      return HighPrecision(x);
    } else {
      return To(Rational(x));
    }
  } else if constexpr (std::is_same_v<From, Rational>) {
    if constexpr (std::is_same_v<To, double>) {
      return x.template convert_to<double>();
    } else if constexpr (std::is_same_v<To, HighPrecision>) {
      return HighPrecision(mp::numerator(x)) / HighPrecision(mp::denominator(x));
    } else {
      return To(x);
    }
  } else if constexpr (requires { x.template to<double>(); }) {
    if constexpr (std::is_same_v<To, double> || std::is_same_v<To, HighPrecision>) {
      return x.template to<To>();
    } else {
      static_assert(!sizeof(To*), "no exact conversion out of a quadratic field");
    }
  } else if constexpr (std::is_same_v<From, double>) {
    return To(x);
  } else if constexpr (std::is_same_v<From, HighPrecision>) {
    if constexpr (std::is_same_v<To, double>) {
      return x.template convert_to<double>();
    } else if constexpr (std::is_same_v<To, Rational>) {
      return Rational(x);
    } else {
      static_assert(!sizeof(To*), "unsupported conversion");
    }
  } else {
    return To(x);
  }
}

template <class T>
double to_double(const T& x) {
  return convert<double>(x);
}

template <class To, class From>
std::vector<To> convert_vector(std::span<const From> xs) {
  std::vector<To> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(convert<To>(x));
  return out;
}

template <class T>
T parse_scalar(std::string_view text);

template <>
double parse_scalar<double>(std::string_view text);
template <>
HighPrecision parse_scalar<HighPrecision>(std::string_view text);
template <>
Rational parse_scalar<Rational>(std::string_view text);

std::string format_scalar(double x);
std::string format_scalar(const HighPrecision& x);
std::string format_scalar(const Rational& x);
std::string format_scalar(const Integer& x);
template <unsigned D>
std::string format_scalar(const QuadraticNumber<D>& x) {
  return x.str();
}

}  // namespace aiet
