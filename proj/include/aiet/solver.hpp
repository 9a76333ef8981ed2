#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "aiet/cocycle.hpp"
#include "aiet/oseledets.hpp"
#include "aiet/projective.hpp"

namespace aiet {

template <class R>
struct DiameterPoint {
  std::size_t step = 0;
  R diameter = std::numeric_limits<R>::infinity();  ///< +inf until the product is positive
  double logscale = 0.0;
};

template <class R>
struct SolveReport {
  std::vector<R> lengths;  ///< |l|_1 = 1
  std::size_t steps = 0;
  R final_diameter = std::numeric_limits<R>::infinity();
  R closure_residual = R(0);  ///< |<l, e^omega> - 1|
  std::size_t verified_depth = 0;
  std::vector<DiameterPoint<R>> diameter_trace;
  R tolerance = R(0);
  bool converged = false;
  std::vector<R> omega;          ///< after projection onto lambda-perp
  R projection_distance = R(0);  ///< distance moved by that projection
  R final_contraction = R(1);    ///< kappa(A_n(gamma, omega))
  /// Gamma with Gamma^{-1} <= c M_{ab} <= Gamma for the best scalar c.
  double positivity_constant = std::numeric_limits<double>::infinity();
};

/// Non-convergence of the solver; carries the stalled report.
template <class R>
class SolveFailure : public Error {
 public:
  SolveFailure(ErrorCode code, const std::string& message, SolveReport<R> report)
      : Error(code, message, report.steps), report_(std::move(report)) {}
  const SolveReport<R>& report() const { return report_; }

 private:
  SolveReport<R> report_;
};

struct SolveOptions {
  /// |<omega, lambda>| <= threshold * |omega|_2 with |lambda|_1 = 1.
  double orthogonality_threshold = 1e-10;
  bool keep_trace = true;
};

namespace detail {

template <class R, class P>
std::vector<R> normalized_lambda(const Aiet<P>& iet) {
  std::vector<R> lambda;
  R sum(0);
  for (const auto& l : iet.lengths()) {
    lambda.push_back(convert<R>(l));
    sum += lambda.back();
  }
  for (auto& l : lambda) l /= sum;
  return lambda;
}

/// Checks <omega, lambda> ~ 0 and projects omega onto lambda-perp.
template <class R>
R project_orthogonal(std::vector<R>& omega, const std::vector<R>& lambda, double threshold) {
  using std::sqrt;
  R inner(0), ll(0), ww(0);
  for (std::size_t a = 0; a < omega.size(); ++a) {
    inner += omega[a] * lambda[a];
    ll += lambda[a] * lambda[a];
    ww += omega[a] * omega[a];
  }
  if (abs_value(inner) > R(threshold) * sqrt(ww))
    throw Error(ErrorCode::orthogonality_violation,
                "<omega, lambda> = " + format_scalar(inner) + " is not zero; no AIET with this path and slopes");
  R coef = inner / ll;
  for (std::size_t a = 0; a < omega.size(); ++a) omega[a] -= coef * lambda[a];
  return abs_value(inner) / sqrt(ll);
}

template <class R>
double positivity_constant_of(const Matrix<R>& m) {
  using std::log;
  if (!m.is_positive()) return std::numeric_limits<double>::infinity();
  double hi = to_double(R(log(m.max_entry())));
  double lo = to_double(R(log(m.min_entry())));
  return std::exp(0.5 * (hi - lo));
}

}  // namespace detail

/// Accumulated twisted product A_n(gamma, omega) along a streamed IET path.
template <class R, class P>
class ConeWalker {
 public:
  ConeWalker(const Aiet<P>& iet, const std::vector<R>& omega)
      : it_(iet), cursor_(Twist<R>::from_log(omega)), product_(ScaledMatrix<R>::identity(iet.size())) {}

  /// Takes one elementary step and returns the new image diameter.
  DiameterPoint<R> step() {
    RauzyEdge e = [&] {
      try {
        return it_.next();
      } catch (const Error& err) {
        rethrow_as_keane_failure(err);
      }
    }();
    multiply_elementary_right(product_.entries_mut(), e, cursor_.slope(e.perm.bottom_last()));
    product_.renormalize();
    cursor_.advance(e);
    ++steps_;
    return {steps_, image_diameter(product_.entries()).diameter, product_.logscale()};
  }

  const ScaledMatrix<R>& product() const { return product_; }
  std::size_t steps() const { return steps_; }

  /// P(A_n e / d): image of the simplex barycenter.
  std::vector<R> barycenter_image() const {
    std::size_t d = product_.size();
    std::vector<R> out = product_.entries().apply(std::vector<R>(d, R(1)));
    R sum(0);
    for (const auto& x : out) sum += x;
    for (auto& x : out) x /= sum;
    return out;
  }

 private:
  PathIterator<P> it_;
  SlopeCursor<R> cursor_;
  ScaledMatrix<R> product_;
  std::size_t steps_ = 0;
};

/// Length vector of the unique AIET with the path of (pi, lambda) and
/// log-slopes omega: the point to which the nested twisted cones shrink.
template <class R, class P>
SolveReport<R> solve_unique_aiet(const Aiet<P>& iet, std::vector<R> omega, const R& tolerance, std::size_t max_steps,
                                 const SolveOptions& options = {}) {
  using std::exp;
  if (!iet.is_iet()) throw Error(ErrorCode::precondition, "solver expects an IET (omega = 0)");
  if (omega.size() != iet.size()) throw Error(ErrorCode::malformed_input, "omega has the wrong dimension");
  if (!(tolerance > R(0))) throw Error(ErrorCode::precondition, "tolerance must be positive");
  SolveReport<R> report;
  report.tolerance = tolerance;
  auto lambda = detail::normalized_lambda<R>(iet);
  report.projection_distance = detail::project_orthogonal(omega, lambda, options.orthogonality_threshold);
  report.omega = omega;

  ConeWalker<R, P> walker(iet, omega);
  while (walker.steps() < max_steps) {
    auto point = walker.step();
    if (options.keep_trace) report.diameter_trace.push_back(point);
    report.final_diameter = point.diameter;
    if (point.diameter <= tolerance) {
      report.converged = true;
      break;
    }
  }
  report.steps = walker.steps();
  report.lengths = walker.barycenter_image();
  R image(0);
  for (std::size_t a = 0; a < omega.size(); ++a) image += report.lengths[a] * R(exp(omega[a]));
  report.closure_residual = abs_value(R(image - R(1)));
  try {
    report.final_contraction = contraction_coefficient(walker.product().entries());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::singular_matrix) throw;
    // numerically rank one: Birkhoff's tanh(diameter / 4)
    using std::tanh;
    report.final_contraction = R(tanh(report.final_diameter / R(4)));
  }
  report.positivity_constant = detail::positivity_constant_of(walker.product().entries());
  if (!report.converged)
    throw SolveFailure<R>(ErrorCode::max_steps_exceeded,
                          "diameter " + format_scalar(report.final_diameter) + " above tolerance after " +
                              std::to_string(max_steps) + " steps",
                          std::move(report));
  return report;
}

/// Diameters of P(A_n(gamma, omega)(simplex)) for n = 1..depth.
template <class R, class P>
std::vector<DiameterPoint<R>> cone_diameter_trace(const Aiet<P>& iet, std::vector<R> omega, std::size_t depth,
                                                  const SolveOptions& options = {}) {
  if (!iet.is_iet()) throw Error(ErrorCode::precondition, "cone trace expects an IET (omega = 0)");
  if (omega.size() != iet.size()) throw Error(ErrorCode::malformed_input, "omega has the wrong dimension");
  auto lambda = detail::normalized_lambda<R>(iet);
  detail::project_orthogonal(omega, lambda, options.orthogonality_threshold);
  ConeWalker<R, P> walker(iet, omega);
  std::vector<DiameterPoint<R>> trace;
  while (walker.steps() < depth) trace.push_back(walker.step());
  return trace;
}

struct SemiconjugacyReport {
  bool equal = false;
  std::size_t depth = 0;
  /// Length of the common prefix (== depth when equal).
  std::size_t agreement = 0;
};

/// Compares gamma((pi, lengths, omega)) with gamma((pi, lambda)) edge by edge.
template <class R, class P>
SemiconjugacyReport verify_semiconjugacy(const Aiet<P>& iet, const std::vector<R>& lengths,
                                         const std::vector<R>& omega, std::size_t depth,
                                         const R& closure_tolerance = R(1e-6)) {
  std::vector<R> slopes;
  using std::exp;
  for (const auto& w : omega) {
    if constexpr (is_exact_v<R>) {
      // exact slopes e^omega exist only for omega = 0
      if (w != 0) throw Error(ErrorCode::precondition, "exact semiconjugacy check needs omega = 0");
      slopes.push_back(R(1));
    } else {
      slopes.push_back(R(exp(w)));
    }
  }
  Aiet<R> f = normalize(make_aiet(iet.perm(), lengths, slopes, closure_tolerance));
  PathIterator<R> candidate(f);
  PathIterator<P> reference(iet);
  SemiconjugacyReport out;
  out.depth = depth;
  for (std::size_t n = 0; n < depth; ++n) {
    RauzyEdge a = reference.next();
    RauzyEdge b = candidate.next();
    if (!(a == b)) return out;
    ++out.agreement;
  }
  out.equal = true;
  return out;
}

struct MembershipSample {
  std::size_t step = 0;
  /// min_a x_a / max_a |x_a| for the solution of A_n x = l.
  double min_coordinate = 0.0;
};

/// l in A_n(gamma, omega)(R_+^d) at the sampled steps, by solving the linear system.
template <class R, class P>
std::vector<MembershipSample> membership_check(const Aiet<P>& iet, const std::vector<R>& omega,
                                               const std::vector<R>& lengths, const std::vector<std::size_t>& steps) {
  std::vector<MembershipSample> out;
  if (steps.empty()) return out;
  std::size_t last = *std::max_element(steps.begin(), steps.end());
  ConeWalker<R, P> walker(iet, omega);
  auto check = [&](std::size_t n) {
    auto x = solve(walker.product().entries(), lengths);
    R lo = x[0], hi = abs_value(x[0]);
    for (const auto& c : x) {
      if (c < lo) lo = c;
      if (abs_value(c) > hi) hi = abs_value(c);
    }
    out.push_back({n, to_double(R(lo / hi))});
  };
  for (std::size_t n = 0; n <= last; ++n) {
    if (n > 0) walker.step();
    if (std::find(steps.begin(), steps.end(), n) != steps.end()) check(n);
  }
  return out;
}

template <class R>
struct ContractionSkeleton {
  std::vector<std::size_t> times;  ///< BCC times used (gap >= N, finite diameter above the floor)
  std::vector<R> diameters;
  std::vector<double> ratios;         ///< diameter(n_{k+1}) / diameter(n_k)
  std::vector<double> window_kappas;  ///< kappa(A_{n_k, n_k + N}(gamma, omega))
  double kappa_hat = 0.0;             ///< max ratio
  double window_kappa_sup = 0.0;
  /// kappa(A_{n_{k+1}}) <= kappa(A_{n_k}) kappa(window_k) held at every k.
  bool submultiplicative = true;

  bool contracts() const { return !ratios.empty() && kappa_hat < 1.0; }
};

/// Realizes the uniform contraction along BCC times: consecutive diameters
/// shrink by a single factor kappa_hat < 1. Times closer than N to the previous
/// kept time are skipped; times whose diameter is below `floor` are dropped so
/// ratios stay above the working precision.
template <class R, class P>
ContractionSkeleton<R> measure_contraction_skeleton(const Aiet<P>& iet, std::vector<R> omega,
                                                    const std::vector<std::size_t>& bcc_times, std::size_t N,
                                                    const R& floor, const SolveOptions& options = {}) {
  ContractionSkeleton<R> out;
  if (bcc_times.empty()) return out;
  auto lambda = detail::normalized_lambda<R>(iet);
  detail::project_orthogonal(omega, lambda, options.orthogonality_threshold);
  std::size_t last = bcc_times.back() + N;
  RauzyPath path = elementary_path(iet, last);
  auto twist = Twist<R>::from_log(omega);

  SlopeCursor<R> cursor(twist);
  ScaledMatrix<R> product = ScaledMatrix<R>::identity(iet.size());
  std::size_t n = 0;
  std::vector<R> kappas;
  for (std::size_t t : bcc_times) {
    if (!out.times.empty() && t < out.times.back() + N) continue;
    for (; n < t; ++n) {
      multiply_elementary_right(product.entries_mut(), path[n], cursor.slope(path[n].perm.bottom_last()));
      product.renormalize();
      cursor.advance(path[n]);
    }
    auto diam = image_diameter(product.entries());
    if (!diam.finite()) continue;
    if (diam.diameter < floor) break;
    using std::tanh;
    out.times.push_back(t);
    out.diameters.push_back(diam.diameter);
    kappas.push_back(R(tanh(diam.diameter / R(4))));
    out.window_kappas.push_back(to_double(contraction_coefficient(product_twisted(path, twist, t, t + N).entries())));
  }
  for (std::size_t k = 0; k + 1 < out.times.size(); ++k) {
    double ratio = to_double(R(out.diameters[k + 1] / out.diameters[k]));
    out.ratios.push_back(ratio);
    out.kappa_hat = std::max(out.kappa_hat, ratio);
    out.window_kappa_sup = std::max(out.window_kappa_sup, out.window_kappas[k]);
    if (to_double(kappas[k + 1]) > to_double(kappas[k]) * out.window_kappas[k] * (1.0 + 1e-9))
      out.submultiplicative = false;
  }
  return out;
}

/// Non-increasing up to a relative slack (nested cones).
template <class R>
bool is_non_increasing(const std::vector<DiameterPoint<R>>& trace, double slack = 1e-9) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const R& prev = trace[i - 1].diameter;
    const R& cur = trace[i].diameter;
    using std::isinf;
    if (isinf(prev)) continue;
    if (cur > prev * R(1.0 + slack)) return false;
  }
  return true;
}

}  // namespace aiet
