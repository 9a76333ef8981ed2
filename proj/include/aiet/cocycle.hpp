#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aiet/induction.hpp"
#include "aiet/matrix.hpp"

namespace aiet {

// Conventions, all checked against geometric induction:
//
//   alpha_0 = top_last, alpha_1 = bottom_last, rho = slopes of R^k(f)
//   type 0:  A = Id + rho_{alpha_1} E_{alpha_0, alpha_1}       (winner alpha_0)
//   type 1:  A = Id + E_{alpha_1, alpha_0} + (rho_{alpha_1} - 1) E_{alpha_0, alpha_0}   (winner alpha_1)
//   lengths pull back:   l^k = A_k l^{k+1},   l^m = A_{m,n} l^n
//   log-slopes push forward with the classical matrix:
//                        omega^{k+1} = A_k^T omega^k   (omega_loser += omega_winner)

/// Slope data twisting the cocycle. Floating twists keep log-slopes and
/// exponentiate; exact twists multiply slopes, so only rational e^omega is
/// representable exactly.
template <class T>
class Twist {
 public:
  static Twist none(std::size_t d) { return Twist(std::vector<T>(d, T(1)), std::nullopt); }

  static Twist from_slopes(std::vector<T> rho) { return Twist(std::move(rho), std::nullopt); }

  static Twist from_log(std::vector<T> omega) {
    static_assert(!is_exact_v<T>, "exact twists are given by their slopes");
    using std::exp;
    std::vector<T> rho;
    for (const auto& w : omega) rho.push_back(exp(w));
    return Twist(std::move(rho), std::move(omega));
  }

  static Twist of(const Aiet<T>& f) { return from_slopes(f.slopes()); }

  std::size_t size() const { return slopes_.size(); }
  const std::vector<T>& slopes() const { return slopes_; }
  const std::optional<std::vector<T>>& log_slopes() const { return log_slopes_; }

  bool is_trivial() const {
    for (const auto& r : slopes_)
      if (!(r == T(1))) return false;
    return true;
  }

 private:
  Twist(std::vector<T> rho, std::optional<std::vector<T>> omega) : slopes_(std::move(rho)), log_slopes_(std::move(omega)) {}

  std::vector<T> slopes_;
  std::optional<std::vector<T>> log_slopes_;
};

/// Walks the slope vector rho^k along a path.
template <class T>
class SlopeCursor {
 public:
  explicit SlopeCursor(const Twist<T>& twist) : rho_(twist.slopes()), omega_(twist.log_slopes()) {}

  const std::vector<T>& slopes() const { return rho_; }
  const T& slope(Letter a) const { return rho_[a]; }

  void advance(const RauzyEdge& e) {
    if constexpr (!is_exact_v<T>) {
      if (omega_) {
        using std::exp;
        auto& w = *omega_;
        w[e.loser] += w[e.winner];
        rho_[e.loser] = exp(w[e.loser]);
        return;
      }
    }
    rho_[e.loser] *= rho_[e.winner];
  }

 private:
  std::vector<T> rho_;
  std::optional<std::vector<T>> omega_;
};

/// The twisted elementary matrix A(pi, eps, omega) given the slopes rho.
template <class T>
ScaledMatrix<T> elementary_matrix(const Permutation& p, int type, const std::vector<T>& rho) {
  if (rho.size() != p.size()) throw Error(ErrorCode::malformed_input, "slope vector has the wrong dimension");
  Letter a0 = p.top_last();
  Letter a1 = p.bottom_last();
  Matrix<T> m = Matrix<T>::identity(p.size());
  if (type == 0) {
    m(a0, a1) = rho[a1];
  } else if (type == 1) {
    m(a1, a0) = T(1);
    m(a0, a0) = rho[a1];
  } else {
    throw Error(ErrorCode::malformed_input, "edge type must be 0 or 1");
  }
  return ScaledMatrix<T>(std::move(m));
}

template <class T>
ScaledMatrix<T> elementary_matrix_log(const Permutation& p, int type, const std::vector<T>& omega) {
  return elementary_matrix(p, type, Twist<T>::from_log(omega).slopes());
}

/// M <- M * A for the elementary matrix of edge e, touching one column.
template <class T>
void multiply_elementary_right(Matrix<T>& m, const RauzyEdge& e, const T& rho_a1) {
  Letter a0 = e.perm.top_last();
  Letter a1 = e.perm.bottom_last();
  std::size_t rows = m.rows();
  if (e.type == 0) {
    for (std::size_t i = 0; i < rows; ++i) m(i, a1) += rho_a1 * m(i, a0);
  } else {
    for (std::size_t i = 0; i < rows; ++i) m(i, a0) = m(i, a0) * rho_a1 + m(i, a1);
  }
}

/// v <- A^T v for the classical matrix of edge e.
template <class T>
void apply_classical_transpose(std::vector<T>& v, const RauzyEdge& e) {
  v[e.loser] += v[e.winner];
}

namespace detail {

inline void require_range(const RauzyPath& path, std::size_t m, std::size_t n) {
  if (m > n) throw Error(ErrorCode::precondition, "product range needs m <= n");
  if (n > path.size())
    throw Error(ErrorCode::insufficient_path, "path has " + std::to_string(path.size()) + " edges, need " +
                                                  std::to_string(n));
}

}  // namespace detail

template <class T>
struct SlopeTrajectory {
  std::vector<std::vector<T>> omegas;  ///< omega^0 .. omega^n
};

/// omega^0..omega^n, additive and therefore exact over exact scalars.
template <class T>
SlopeTrajectory<T> slope_trajectory(const RauzyPath& path, std::vector<T> omega, std::size_t n) {
  detail::require_range(path, 0, n);
  if (omega.size() != path.start().size())
    throw Error(ErrorCode::malformed_input, "log-slope vector has the wrong dimension");
  SlopeTrajectory<T> out;
  out.omegas.reserve(n + 1);
  out.omegas.push_back(omega);
  for (std::size_t k = 0; k < n; ++k) {
    apply_classical_transpose(omega, path[k]);
    out.omegas.push_back(omega);
  }
  return out;
}

/// rho^0..rho^n, multiplicative: rho^{k+1}_loser = rho^k_loser rho^k_winner.
template <class T>
std::vector<std::vector<T>> slope_factor_trajectory(const RauzyPath& path, const Twist<T>& twist, std::size_t n) {
  detail::require_range(path, 0, n);
  SlopeCursor<T> cursor(twist);
  std::vector<std::vector<T>> out{cursor.slopes()};
  for (std::size_t k = 0; k < n; ++k) {
    cursor.advance(path[k]);
    out.push_back(cursor.slopes());
  }
  return out;
}

/// A_{m,n}(gamma, omega) = A(R^m f) ... A(R^{n-1} f); identity when m = n.
template <class T>
ScaledMatrix<T> product_twisted(const RauzyPath& path, const Twist<T>& twist, std::size_t m, std::size_t n) {
  detail::require_range(path, m, n);
  if (twist.size() != path.start().size())
    throw Error(ErrorCode::malformed_input, "twist has the wrong dimension");
  SlopeCursor<T> cursor(twist);
  for (std::size_t k = 0; k < m; ++k) cursor.advance(path[k]);
  ScaledMatrix<T> product = ScaledMatrix<T>::identity(twist.size());
  for (std::size_t k = m; k < n; ++k) {
    const RauzyEdge& e = path[k];
    multiply_elementary_right(product.entries_mut(), e, cursor.slope(e.perm.bottom_last()));
    product.renormalize();
    cursor.advance(e);
  }
  return product;
}

/// Classical A_{m,n}(gamma): non-negative integer entries.
template <class T = Integer>
ScaledMatrix<T> product_classical(const RauzyPath& path, std::size_t m, std::size_t n) {
  return product_twisted(path, Twist<T>::none(path.start().size()), m, n);
}

/// B_{m,n} = A_{z_m, z_n} over confirmed Zorich times.
template <class T>
ScaledMatrix<T> accelerated_product(const RauzyPath& path, const Twist<T>& twist, std::size_t m, std::size_t n) {
  if (m > n) throw Error(ErrorCode::precondition, "product range needs m <= n");
  auto times = path.zorich_times();
  if (n >= times.size())
    throw Error(ErrorCode::insufficient_path, "path contains only " + std::to_string(times.size()) +
                                                  " confirmed Zorich times, need " + std::to_string(n + 1));
  return product_twisted(path, twist, times[m], times[n]);
}

struct ClauseResult {
  bool passed = true;
  /// (row, column) of the first violating entry.
  std::optional<std::pair<Letter, Letter>> witness;
};

struct MatrixLemmaReport {
  ClauseResult diagonal;     ///< (i) twisted diagonal strictly positive
  ClauseResult propagation;  ///< (ii) classical > 0 implies twisted > 0
  ClauseResult bound;        ///< (iii) twisted <= classical * max(1, rho_max)^steps
  double rho_max = 1.0;
  std::size_t steps = 0;

  bool passed() const { return diagonal.passed && propagation.passed && bound.passed; }
};

/// Evaluates the three clauses on given products; also serves as the
/// negative-control entry point for corrupted matrices.
template <class T>
MatrixLemmaReport check_matrix_lemma(const ScaledMatrix<T>& classical, const ScaledMatrix<T>& twisted, const T& rho_max,
                                     std::size_t steps) {
  MatrixLemmaReport report;
  report.rho_max = to_double(rho_max);
  report.steps = steps;
  const auto& c = classical.entries();
  const auto& t = twisted.entries();
  std::size_t d = c.rows();
  auto fail = [](ClauseResult& r, Letter i, Letter j) {
    if (r.passed) r.witness = std::make_pair(i, j);
    r.passed = false;
  };
  T growth = rho_max > T(1) ? rho_max : T(1);
  for (std::size_t i = 0; i < d; ++i) {
    if (!(t(i, i) > T(0))) fail(report.diagonal, i, i);
    for (std::size_t j = 0; j < d; ++j) {
      if (c(i, j) > T(0) && !(t(i, j) > T(0))) fail(report.propagation, i, j);
      if (t(i, j) < T(0)) fail(report.bound, i, j);
      if (!(t(i, j) > T(0))) continue;
      if constexpr (is_exact_v<T>) {
        T limit = c(i, j);
        for (std::size_t k = 0; k < steps; ++k) limit *= growth;
        if (t(i, j) > limit) fail(report.bound, i, j);
      } else {
        using std::log;
        if (!(c(i, j) > T(0))) {
          fail(report.bound, i, j);
          continue;
        }
        double lhs = to_double(T(log(t(i, j)))) + twisted.logscale();
        double rhs = to_double(T(log(c(i, j)))) + classical.logscale() +
                     static_cast<double>(steps) * to_double(T(log(growth)));
        if (lhs > rhs + 1e-12 * std::max(1.0, std::fabs(rhs))) fail(report.bound, i, j);
      }
    }
  }
  return report;
}

template <class T>
MatrixLemmaReport verify_matrix_lemma(const RauzyPath& path, const Twist<T>& twist, std::size_t m, std::size_t n) {
  detail::require_range(path, m, n);
  auto rhos = slope_factor_trajectory(path, twist, n);
  T rho_max = rhos[m][0];
  for (std::size_t k = m; k < std::max(n, m + 1) && k < rhos.size(); ++k)
    for (const auto& r : rhos[k])
      if (r > rho_max) rho_max = r;
  auto classical = product_twisted(path, Twist<T>::none(twist.size()), m, n);
  auto twisted = product_twisted(path, twist, m, n);
  return check_matrix_lemma(classical, twisted, rho_max, n - m);
}

}  // namespace aiet
