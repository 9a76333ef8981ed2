#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "aiet/error.hpp"
#include "aiet/permutation.hpp"
#include "aiet/scalar.hpp"

namespace aiet {

/// Affine interval exchange (pi, l, rho) on [0, |l|_1), with slope vector
/// rho = e^omega. Slopes are stored directly: in exact modes omega itself is
/// not representable, only e^omega is. An IET is the case rho = 1.
template <class T>
class Aiet {
 public:
  struct Unchecked {};

  /// Trusted construction; used by the induction, which preserves the
  /// closure residual exactly.
  Aiet(Unchecked, Permutation perm, std::vector<T> lengths, std::vector<T> slopes)
      : perm_(std::move(perm)), lengths_(std::move(lengths)), slopes_(std::move(slopes)) {}

  const Permutation& perm() const { return perm_; }
  std::size_t size() const { return lengths_.size(); }
  const std::vector<T>& lengths() const { return lengths_; }
  const std::vector<T>& slopes() const { return slopes_; }
  const T& length(Letter a) const { return lengths_[a]; }
  const T& slope(Letter a) const { return slopes_[a]; }

  T total_length() const {
    T s(0);
    for (const auto& l : lengths_) s += l;
    return s;
  }

  /// <l, rho>: the total length of the image intervals.
  T image_length() const {
    T s(0);
    for (std::size_t a = 0; a < size(); ++a) s += lengths_[a] * slopes_[a];
    return s;
  }

  T closure_residual() const { return abs_value(T(image_length() - total_length())); }

  bool is_iet() const {
    for (const auto& r : slopes_)
      if (!(r == T(1))) return false;
    return true;
  }

  bool is_normalized() const {
    if constexpr (is_exact_v<T>) {
      return total_length() == T(1);
    } else {
      return abs_value(T(total_length() - T(1))) <= T(64) * ScalarTraits<T>::epsilon();
    }
  }

  /// omega = log rho, as doubles.
  std::vector<double> log_slopes() const {
    std::vector<double> out;
    for (const auto& r : slopes_) out.push_back(std::log(to_double(r)));
    return out;
  }

  T interval_start(Letter a) const {
    T s(0);
    for (std::size_t i = 0; i < perm_.top_position(a); ++i) s += lengths_[perm_.top_at(i)];
    return s;
  }

  T image_start(Letter a) const {
    T s(0);
    for (std::size_t i = 0; i < perm_.bottom_position(a); ++i) {
      Letter b = perm_.bottom_at(i);
      s += lengths_[b] * slopes_[b];
    }
    return s;
  }

 private:
  Permutation perm_;
  std::vector<T> lengths_;
  std::vector<T> slopes_;
};

namespace detail {

template <class T>
void check_shape(const Permutation& p, std::size_t lengths, std::size_t slopes) {
  if (lengths != p.size() || slopes != p.size())
    throw Error(ErrorCode::malformed_input, "vector dimension does not match the alphabet (d = " +
                                                std::to_string(p.size()) + ")");
}

}  // namespace detail

/// Checked construction. Requires an irreducible permutation, positive
/// lengths and |<l, rho> - |l|_1| <= tolerance.
template <class T>
Aiet<T> make_aiet(Permutation p, std::vector<T> lengths, std::vector<T> slopes, const T& tolerance) {
  detail::check_shape<T>(p, lengths.size(), slopes.size());
  if (!p.is_irreducible()) throw Error(ErrorCode::reducible_permutation, "permutation " + p.str() + " is reducible");
  for (std::size_t a = 0; a < lengths.size(); ++a) {
    if (!(lengths[a] > T(0)))
      throw Error(ErrorCode::nonpositive_length, "length of " + p.alphabet().symbol(a) + " is not positive");
    if (!(slopes[a] > T(0)))
      throw Error(ErrorCode::malformed_input, "slope of " + p.alphabet().symbol(a) + " is not positive");
  }
  Aiet<T> f(typename Aiet<T>::Unchecked{}, std::move(p), std::move(lengths), std::move(slopes));
  if (f.closure_residual() > tolerance)
    throw Error(ErrorCode::closure_violation,
                "closure residual " + format_scalar(f.closure_residual()) + " exceeds tolerance");
  return f;
}

/// Floating-point construction from log-slopes omega.
template <class T>
Aiet<T> make_aiet_log(Permutation p, std::vector<T> lengths, std::type_identity_t<std::span<const T>> omega,
                      const T& tolerance) {
  using std::exp;
  std::vector<T> slopes;
  for (const auto& w : omega) slopes.push_back(exp(w));
  return make_aiet(std::move(p), std::move(lengths), std::move(slopes), tolerance);
}

template <class T>
Aiet<T> make_iet(Permutation p, std::vector<T> lengths) {
  std::vector<T> ones(lengths.size(), T(1));
  return make_aiet(std::move(p), std::move(lengths), std::move(ones), T(0));
}

/// Letter whose interval contains x. Float inputs that rounding pushed to
/// the right end are attributed to the last interval.
template <class T>
Letter locate(const Aiet<T>& f, const T& x) {
  const auto& p = f.perm();
  T start(0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    Letter a = p.top_at(i);
    T end = start + f.length(a);
    if (x < end) return a;
    start = end;
  }
  return p.top_last();
}

/// Right-continuous piecewise-linear map f(x) = image_start(a) + rho_a (x - start(a)).
template <class T>
T evaluate(const Aiet<T>& f, const T& x) {
  if (x < T(0) || !(x < f.total_length()))
    throw Error(ErrorCode::out_of_domain, "point " + format_scalar(x) + " outside [0, |l|)");
  Letter a = locate(f, x);
  return f.image_start(a) + f.slope(a) * (x - f.interval_start(a));
}

struct KeaneWitness {
  Letter origin;        ///< discontinuity whose orbit collides (left end of I_origin)
  std::size_t iterate;  ///< m >= 1 with f^m(u_origin) == u_hit
  Letter hit;
};

struct KeaneVerdict {
  enum class Status { passes_to_depth, fails };
  Status status = Status::passes_to_depth;
  std::size_t depth = 0;
  std::optional<KeaneWitness> witness;

  bool passes() const { return status == Status::passes_to_depth; }
};

/// Finite-depth Keane test: the forward orbits of the interior
/// discontinuities u_a (left ends of all but the first top interval) must not
/// hit an interior discontinuity within `depth` iterates. Exact scalars
/// compare exactly; floating scalars use `collision_tolerance`
/// (default 1e-12 |l|_1).
template <class T>
KeaneVerdict check_keane(const Aiet<T>& f, std::size_t depth, std::optional<T> collision_tolerance = std::nullopt) {
  if (depth == 0) throw Error(ErrorCode::precondition, "Keane check needs depth >= 1");
  const auto& p = f.perm();
  T tol(0);
  if constexpr (!is_exact_v<T>) tol = collision_tolerance ? *collision_tolerance : T(1e-12) * f.total_length();

  std::vector<Letter> interior;
  std::vector<T> points;
  for (std::size_t i = 1; i < p.size(); ++i) {
    interior.push_back(p.top_at(i));
    points.push_back(f.interval_start(p.top_at(i)));
  }
  T total = f.total_length();
  KeaneVerdict verdict;
  verdict.depth = depth;
  for (std::size_t k = 0; k < interior.size(); ++k) {
    T x = points[k];
    for (std::size_t m = 1; m <= depth; ++m) {
      Letter a = locate(f, x);
      x = f.image_start(a) + f.slope(a) * (x - f.interval_start(a));
      if constexpr (!is_exact_v<T>) {
        if (x < T(0)) x = T(0);
        if (!(x < total)) x = total - tol;  // clamped into the domain
      }
      for (std::size_t j = 0; j < interior.size(); ++j) {
        bool hit;
        if constexpr (is_exact_v<T>) {
          hit = x == points[j];
        } else {
          hit = abs_value(T(x - points[j])) <= tol;
        }
        if (hit) {
          verdict.status = KeaneVerdict::Status::fails;
          verdict.witness = KeaneWitness{interior[k], m, interior[j]};
          return verdict;
        }
      }
    }
  }
  return verdict;
}

}  // namespace aiet
