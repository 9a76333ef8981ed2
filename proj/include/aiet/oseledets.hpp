#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "aiet/cocycle.hpp"

namespace aiet {

struct LyapunovOptions {
  /// QR re-orthonormalization every this many Zorich steps.
  std::size_t reorthonormalize_every = 1;
  std::size_t batches = 20;
  /// Runs are taken a cycle at a time, so long ones are cheap; the Gauss
  /// statistics make runs past 10^6 routine over 10^5 Zorich steps.
  std::size_t zorich_cap = 1'000'000'000'000;
  /// Record running estimates every this many Zorich steps (0: no trace).
  std::size_t trace_stride = 0;
};

struct SpectrumEstimate {
  std::vector<double> exponents;   ///< descending
  std::vector<double> confidence;  ///< batch-means standard error per exponent
  std::size_t iterations = 0;      ///< Zorich steps
  std::size_t elementary_steps = 0;
  std::uint64_t seed = 0;
  /// (k, running estimates) rows when a trace stride was requested.
  std::vector<std::pair<std::size_t, std::vector<double>>> trace;

  /// max_i |theta_i + theta_{d+1-i}| / theta_1
  double pairing_defect() const;
  /// Exponents with |theta| > fraction * theta_1.
  std::size_t nonzero_count(double fraction = 0.1) const;
};

/// Lyapunov spectrum of the transpose Zorich cocycle along the path of an
/// IET, by QR propagation of a random orthonormal frame. The IET path is
/// followed in double precision with renormalization to |lambda| = 1.
SpectrumEstimate lyapunov_spectrum(const Aiet<double>& iet, std::size_t iterations, std::uint64_t seed,
                                   const LyapunovOptions& options = {});

/// Elementary path extended until `zorich_steps` Zorich times after 0 are
/// confirmed. Ties surface as keane-failure.
template <class T>
RauzyPath zorich_path(const Aiet<T>& f, std::size_t zorich_steps, std::size_t cap = default_zorich_cap) {
  RauzyPath path(f.perm());
  PathIterator<T> it(f);
  std::size_t confirmed = 0;
  std::size_t run = 0;
  int last_type = -1;
  try {
    while (confirmed < zorich_steps) {
      RauzyEdge e = it.next();
      if (e.type != last_type) {
        if (last_type != -1) ++confirmed;
        run = 0;
        last_type = e.type;
      }
      if (++run > cap)
        throw Error(ErrorCode::cap_exceeded, "more than " + std::to_string(cap) + " consecutive steps of one type",
                    path.size());
      path.append(std::move(e));
    }
  } catch (const Error& e) {
    rethrow_as_keane_failure(e);
  }
  return path;
}

/// Elementary path of exactly n edges; ties surface as keane-failure.
template <class T>
RauzyPath elementary_path(const Aiet<T>& f, std::size_t n) {
  try {
    return rotation_number(f, n);
  } catch (const Error& e) {
    rethrow_as_keane_failure(e);
  }
}

struct GrowthTrace {
  std::vector<double> log_norms;  ///< log |B_k^T v|, k = 0..n
  std::vector<double> rates;      ///< (1/k) log |B_k^T v|, k = 1..n
  /// Least-squares slope of log |B_k^T v| against k over k in [n/2, n].
  double slope = 0.0;
};

/// Growth of v under the transpose Zorich cocycle, computed exactly.
GrowthTrace growth_rate(const RauzyPath& path, std::span<const Rational> v, std::size_t n);
GrowthTrace growth_rate(const RauzyPath& path, std::span<const double> v, std::size_t n);

template <class T, class V>
GrowthTrace growth_rate(const Aiet<T>& iet, const std::vector<V>& v, std::size_t n) {
  return growth_rate(zorich_path(iet, n), std::span<const V>(v), n);
}

struct EcsOptions {
  /// Zorich steps of the growth validation; default max(20, depth / 2).
  std::optional<std::size_t> validation_steps;
  /// epsilon_slow as a fraction of the estimated top exponent.
  double slow_fraction = 0.05;
  /// theta_1 to scale the threshold by (e.g. from lyapunov_spectrum);
  /// otherwise the growth slope of (1, ..., 1) over the validation window.
  std::optional<double> theta1;
  std::uint64_t seed = 1;
  std::size_t zorich_cap = default_zorich_cap;
};

struct SubspaceEstimate {
  std::vector<std::vector<double>> basis;         ///< orthonormal, d - g vectors
  std::vector<std::vector<Rational>> exact_basis;  ///< same span, exact
  std::size_t depth = 0;                           ///< Zorich steps of B_depth
  std::size_t validation_steps = 0;
  std::vector<double> growth_slopes;
  double theta1_estimate = 0.0;
  double threshold = 0.0;
  std::size_t genus = 0;
  /// max |<v, lambda>| over basis vectors, lambda normalized to |lambda|_1 = 1.
  double lambda_inner = 0.0;

  std::size_t dimension() const { return basis.size(); }
};

/// E_cs from an explicit Zorich path: the orthogonal complement of
/// B_depth X for a seeded generic integer frame X of width g, i.e. of the
/// top g left singular directions of B_depth, each vector validated by its
/// exact growth rate.
SubspaceEstimate estimate_ecs_on_path(const RauzyPath& path, std::span<const double> lambda, std::size_t depth,
                                      const EcsOptions& options = {});

template <class T>
SubspaceEstimate estimate_ecs(const Aiet<T>& iet, std::size_t depth, const EcsOptions& options = {}) {
  if (!iet.is_iet()) throw Error(ErrorCode::precondition, "E_cs estimation expects an IET");
  std::size_t validation = options.validation_steps.value_or(std::max<std::size_t>(20, depth / 2));
  RauzyPath path = zorich_path(iet, std::max(depth, validation), options.zorich_cap);
  std::vector<double> lambda;
  for (const auto& l : iet.lengths()) lambda.push_back(to_double(l));
  return estimate_ecs_on_path(path, lambda, depth, options);
}

struct BccReport {
  std::vector<std::size_t> times;     ///< elementary steps n_k
  std::vector<double> norms;          ///< |A_{n_k}^T restricted to E_cs|
  double V_used = 0.0;
  std::size_t N = 0;
  std::size_t depth = 0;
};

/// Operator norm of A^T restricted to span(basis), where images[j] = A^T basis[j].
double restricted_norm(const std::vector<std::vector<Integer>>& basis, const std::vector<std::vector<Integer>>& images);

/// Scans n with n + N <= depth for A_{0,n}^T|_{E_cs} of norm <= V followed by a
/// strictly positive classical window A_{n, n+N}.
BccReport bcc_monitor_on_path(const RauzyPath& path, const SubspaceEstimate& ecs, double V, std::size_t N,
                              std::size_t depth);

template <class T>
BccReport bcc_monitor(const Aiet<T>& iet, const SubspaceEstimate& ecs, double V, std::size_t N, std::size_t depth) {
  if (N == 0) throw Error(ErrorCode::precondition, "positivity window needs N >= 1");
  if (ecs.exact_basis.empty()) throw Error(ErrorCode::precondition, "E_cs estimate has no basis");
  return bcc_monitor_on_path(elementary_path(iet, depth), ecs, V, N, depth);
}

/// Least-squares slope of y against x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace aiet
