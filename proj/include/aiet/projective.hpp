#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <type_traits>
#include <vector>

#include "aiet/matrix.hpp"
#include "aiet/permutation.hpp"

namespace aiet {

/// Scalar in which projective distances of T-valued data are reported:
/// HighPrecision stays HighPrecision, everything else becomes double.
template <class T>
using DistanceType = std::conditional_t<std::is_same_v<T, HighPrecision>, HighPrecision, double>;

/// Point of the open simplex: positive coordinates summing to 1.
template <class T>
class ProjectivePoint {
 public:
  /// P(x) = x / |x|_1; fails on non-positive coordinates.
  static ProjectivePoint project(std::span<const T> x) {
    T sum(0);
    for (const auto& c : x) {
      if (!(c > T(0))) throw Error(ErrorCode::nonpositive_coordinate, "projective point needs positive coordinates");
      sum += c;
    }
    std::vector<T> coords;
    for (const auto& c : x) coords.push_back(c / sum);
    return ProjectivePoint(std::move(coords));
  }

  const std::vector<T>& coords() const { return coords_; }
  std::size_t size() const { return coords_.size(); }

 private:
  explicit ProjectivePoint(std::vector<T> c) : coords_(std::move(c)) {}
  std::vector<T> coords_;
};

namespace detail {

template <class T>
DistanceType<T> log_of(const T& x) {
  if constexpr (is_exact_v<T>) {
    if constexpr (std::is_same_v<T, Rational>) {
      return log_abs(x);
    } else {
      return std::log(to_double(x));
    }
  } else {
    using std::log;
    return DistanceType<T>(log(x));
  }
}

}  // namespace detail

/// Hilbert projective metric d_p(u, v) = log max_{a,b} (u_a v_b) / (v_a u_b).
template <class T>
DistanceType<T> hilbert_distance(std::span<const T> u, std::span<const T> v) {
  if (u.size() != v.size() || u.empty()) throw Error(ErrorCode::malformed_input, "hilbert distance needs equal dimensions");
  T hi(0), lo(0);
  for (std::size_t a = 0; a < u.size(); ++a) {
    if (!(u[a] > T(0)) || !(v[a] > T(0)))
      throw Error(ErrorCode::nonpositive_coordinate, "hilbert distance needs positive coordinates");
    T r = u[a] / v[a];
    if (a == 0 || r > hi) hi = r;
    if (a == 0 || r < lo) lo = r;
  }
  if (hi == lo) return DistanceType<T>(0);
  DistanceType<T> d = detail::log_of(T(hi / lo));
  return d > DistanceType<T>(0) ? d : DistanceType<T>(0);
}

template <class T>
DistanceType<T> hilbert_distance(const std::vector<T>& u, const std::vector<T>& v) {
  return hilbert_distance(std::span<const T>(u), std::span<const T>(v));
}

template <class T>
struct DiameterResult {
  /// +inf whenever some column is not strictly positive.
  DistanceType<T> diameter = std::numeric_limits<DistanceType<T>>::infinity();
  Letter column_a = 0;
  Letter column_b = 0;

  bool finite() const {
    using std::isfinite;
    return isfinite(diameter);
  }
};

/// Projective diameter of M(R_+^d): the largest d_p between two columns.
template <class T>
DiameterResult<T> image_diameter(const Matrix<T>& m) {
  DiameterResult<T> out;
  if (!m.is_positive()) return out;
  std::size_t d = m.cols();
  std::vector<std::vector<T>> cols;
  for (std::size_t j = 0; j < d; ++j) cols.push_back(m.column(j));
  out.diameter = DistanceType<T>(0);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b) {
      auto dist = hilbert_distance(cols[a], cols[b]);
      if (dist > out.diameter || (a == 0 && b == 1)) {
        out.diameter = dist;
        out.column_a = a;
        out.column_b = b;
      }
    }
  return out;
}

template <class T>
DiameterResult<T> image_diameter(const ScaledMatrix<T>& m) {
  return image_diameter(m.entries());
}

/// Birkhoff contraction coefficient tanh(Delta/4); 1 for non-negative
/// matrices with a zero entry.
template <class T>
DistanceType<T> contraction_coefficient(const Matrix<T>& m) {
  using R = DistanceType<T>;
  if (m.rows() != m.cols()) throw Error(ErrorCode::malformed_input, "contraction coefficient needs a square matrix");
  if (!m.is_nonnegative()) throw Error(ErrorCode::precondition, "contraction coefficient needs a non-negative matrix");
  T det = determinant(m);
  bool singular;
  if constexpr (is_exact_v<T>) {
    singular = det == T(0);
  } else {
    T scale(1);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      T col(0);
      for (std::size_t i = 0; i < m.rows(); ++i) col += m(i, j);
      scale *= col;
    }
    singular = abs_value(det) <= T(64) * ScalarTraits<T>::epsilon() * scale;
  }
  if (singular) throw Error(ErrorCode::singular_matrix, "contraction coefficient needs an invertible matrix");
  auto diam = image_diameter(m);
  if (!diam.finite()) return R(1);
  using std::tanh;
  return R(tanh(diam.diameter / R(4)));
}

template <class T>
DistanceType<T> contraction_coefficient(const ScaledMatrix<T>& m) {
  return contraction_coefficient(m.entries());
}

/// kappa(Gamma) = tanh(log Gamma): bound on the contraction coefficient of
/// every matrix with Gamma^{-1} < M_{ab} < Gamma.
double uniform_contraction_bound(double gamma);

/// Smallest Gamma >= 1 with Gamma^{-1} <= M_{ab} <= Gamma; +inf with a zero entry.
double positivity_constant(const Matrix<double>& m);

/// Largest observed d_p(Mv, Mw) / d_p(v, w) over random positive pairs;
/// a Monte-Carlo lower estimate of the contraction coefficient.
double sampled_contraction_ratio(const Matrix<double>& m, std::size_t samples, std::uint64_t seed);

}  // namespace aiet
