#include "aiet/oseledets.hpp"

#include <gmp.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace aiet {

double SpectrumEstimate::pairing_defect() const {
  if (exponents.empty() || !(exponents.front() > 0.0)) return std::numeric_limits<double>::infinity();
  std::size_t d = exponents.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < d; ++i) worst = std::max(worst, std::fabs(exponents[i] + exponents[d - 1 - i]));
  return worst / exponents.front();
}

std::size_t SpectrumEstimate::nonzero_count(double fraction) const {
  if (exponents.empty()) return 0;
  double cut = fraction * std::fabs(exponents.front());
  return static_cast<std::size_t>(
      std::count_if(exponents.begin(), exponents.end(), [cut](double t) { return std::fabs(t) > cut; }));
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::precondition, "slope fit needs two points");
  double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

namespace {

void orthonormalize(Eigen::MatrixXd& q, std::vector<double>& log_r) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(q);
  const Eigen::MatrixXd& packed = qr.matrixQR();
  Eigen::MatrixXd basis = qr.householderQ() * Eigen::MatrixXd::Identity(q.rows(), q.cols());
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    double r = packed(j, j);
    log_r[static_cast<std::size_t>(j)] += std::log(std::fabs(r));
    if (r < 0) basis.col(j) = -basis.col(j);
  }
  q = std::move(basis);
}

/// Double-precision Rauzy-Veech walk for IETs that takes whole cycles of a
/// same-type run at once. In a type-0 run the winner stays fixed and the
/// losers cycle through the bottom letters after it (top letters for type 1),
/// so c full cycles subtract c times their total length.
class IetRunner {
 public:
  explicit IetRunner(const Aiet<double>& f) : top_(f.perm().top_row()), bottom_(f.perm().bottom_row()), len_(f.lengths()) {
    normalize_lengths();
  }

  /// One Zorich step applied to the rows of q; returns its elementary length.
  std::size_t zorich(Eigen::MatrixXd& q, std::size_t cap, std::size_t index) {
    int type = type_at(index);
    std::size_t run = 0;
    do {
      auto& rows = type == 0 ? bottom_ : top_;
      Letter w = type == 0 ? top_.back() : bottom_.back();
      auto pos = std::find(rows.begin(), rows.end(), w);
      std::size_t k = static_cast<std::size_t>(rows.end() - pos) - 1;
      double cycle = 0.0;
      for (auto it = pos + 1; it != rows.end(); ++it) cycle += len_[*it];
      double full = std::floor(len_[w] / cycle);
      if (full >= 2.0) {
        double c = full - 1.0;
        len_[w] -= c * cycle;
        for (auto it = pos + 1; it != rows.end(); ++it)
          q.row(static_cast<Eigen::Index>(*it)) += c * q.row(static_cast<Eigen::Index>(w));
        run += static_cast<std::size_t>(c) * k;
      } else {
        Letter l = rows.back();
        len_[w] -= len_[l];
        q.row(static_cast<Eigen::Index>(l)) += q.row(static_cast<Eigen::Index>(w));
        rows.pop_back();
        rows.insert(pos + 1, l);
        ++run;
      }
      if (!(len_[w] > 0.0)) throw Error(ErrorCode::degenerate_lengths, "non-positive length after induction", index + run);
      if (run > cap)
        throw Error(ErrorCode::cap_exceeded, "more than " + std::to_string(cap) + " consecutive steps of one type",
                    index + run);
    } while (type_at(index + run) == type);
    normalize_lengths();
    return run;
  }

 private:
  int type_at(std::size_t index) const {
    double a = len_[top_.back()], b = len_[bottom_.back()];
    if (std::fabs(a - b) <= ScalarTraits<double>::tie_tolerance() * std::max(a, b))
      throw Error(ErrorCode::tie, "tie in the Rauzy-Veech walk (Keane condition fails)", index);
    return a > b ? 0 : 1;
  }

  void normalize_lengths() {
    double s = std::accumulate(len_.begin(), len_.end(), 0.0);
    for (auto& x : len_) x /= s;
  }

  std::vector<Letter> top_, bottom_;
  std::vector<double> len_;
};

}  // namespace

SpectrumEstimate lyapunov_spectrum(const Aiet<double>& iet, std::size_t iterations, std::uint64_t seed,
                                   const LyapunovOptions& options) {
  if (iterations < 1000) throw Error(ErrorCode::precondition, "Lyapunov estimation needs at least 1000 iterations");
  if (!iet.is_iet()) throw Error(ErrorCode::precondition, "Lyapunov estimation expects an IET (omega = 0)");
  if (options.reorthonormalize_every == 0 || options.batches == 0)
    throw Error(ErrorCode::config_invalid, "cadence and batch count must be positive");
  std::size_t d = iet.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd q(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) q(i, j) = gauss(rng);
  std::vector<double> scratch(d, 0.0);
  orthonormalize(q, scratch);

  std::size_t batches = std::min(options.batches, iterations);
  std::size_t batch_len = iterations / batches;
  std::vector<double> total(d, 0.0);
  std::vector<std::vector<double>> batch_sums(batches, std::vector<double>(d, 0.0));

  SpectrumEstimate out;
  out.iterations = iterations;
  out.seed = seed;
  IetRunner runner(iet);
  std::size_t elementary = 0;
  try {
    for (std::size_t step = 0; step < iterations; ++step) {
      elementary += runner.zorich(q, options.zorich_cap, elementary);
      bool last = step + 1 == iterations;
      if ((step + 1) % options.reorthonormalize_every == 0 || last) {
        std::vector<double> logs(d, 0.0);
        orthonormalize(q, logs);
        std::size_t b = std::min(step / batch_len, batches - 1);
        for (std::size_t j = 0; j < d; ++j) {
          total[j] += logs[j];
          batch_sums[b][j] += logs[j];
        }
      }
      if (options.trace_stride && (step + 1) % options.trace_stride == 0) {
        std::vector<double> running(d);
        for (std::size_t j = 0; j < d; ++j) running[j] = total[j] / static_cast<double>(step + 1);
        out.trace.emplace_back(step + 1, std::move(running));
      }
    }
  } catch (const Error& e) {
    rethrow_as_keane_failure(e);
  }
  out.elementary_steps = elementary;

  out.exponents.resize(d);
  for (std::size_t j = 0; j < d; ++j) out.exponents[j] = total[j] / static_cast<double>(iterations);
  out.confidence.assign(d, 0.0);
  if (batches > 1) {
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<double> means;
      for (std::size_t b = 0; b < batches; ++b) {
        std::size_t len = b + 1 == batches ? iterations - b * batch_len : batch_len;
        means.push_back(batch_sums[b][j] / static_cast<double>(len));
      }
      double m = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(batches);
      double var = 0.0;
      for (double x : means) var += (x - m) * (x - m);
      var /= static_cast<double>(batches - 1);
      out.confidence[j] = std::sqrt(var / static_cast<double>(batches));
    }
  }
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return out.exponents[a] > out.exponents[b]; });
  std::vector<double> ex, conf;
  for (auto j : order) {
    ex.push_back(out.exponents[j]);
    conf.push_back(out.confidence[j]);
  }
  out.exponents = std::move(ex);
  out.confidence = std::move(conf);
  return out;
}

namespace {

std::vector<Integer> to_integer_vector(std::span<const Rational> v) {
  Integer lcm(1);
  for (const auto& x : v) {
    Integer den = mp::denominator(x);
    lcm = Integer(lcm / mp::gcd(lcm, den) * den);
  }
  std::vector<Integer> out;
  for (const auto& x : v) out.push_back(Integer(mp::numerator(x) * (lcm / mp::denominator(x))));
  return out;
}

double log_norm(const std::vector<Integer>& v) {
  Integer s(0);
  for (const auto& x : v) s += x * x;
  return 0.5 * log_abs(s);
}

/// x * 2^-shift as a double.
double scaled_double(const Integer& x, long shift) {
  if (x == 0) return 0.0;
  long e = 0;
  double m = mpz_get_d_2exp(&e, x.backend().data());
  return std::ldexp(m, static_cast<int>(e - shift));
}

long bit_length(const Integer& x) { return x == 0 ? 0 : static_cast<long>(mpz_sizeinbase(x.backend().data(), 2)); }

}  // namespace

GrowthTrace growth_rate(const RauzyPath& path, std::span<const Rational> v, std::size_t n) {
  if (v.size() != path.start().size()) throw Error(ErrorCode::malformed_input, "vector has the wrong dimension");
  if (std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; }))
    throw Error(ErrorCode::zero_vector, "growth rate of the zero vector");
  if (n < 2) throw Error(ErrorCode::precondition, "growth rate needs n >= 2 Zorich steps");
  auto times = path.zorich_times();
  if (times.size() <= n)
    throw Error(ErrorCode::insufficient_path, "path holds " + std::to_string(times.size() - 1) +
                                                  " confirmed Zorich steps, need " + std::to_string(n));
  std::vector<Integer> w = to_integer_vector(v);
  GrowthTrace out;
  out.log_norms.push_back(log_norm(w));
  std::size_t edge = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    for (; edge < times[k]; ++edge) apply_classical_transpose(w, path[edge]);
    double ln = log_norm(w);
    out.log_norms.push_back(ln);
    out.rates.push_back(ln / static_cast<double>(k));
  }
  std::vector<double> xs, ys;
  for (std::size_t k = n / 2; k <= n; ++k) {
    xs.push_back(static_cast<double>(k));
    ys.push_back(out.log_norms[k]);
  }
  out.slope = least_squares_slope(xs, ys);
  return out;
}

GrowthTrace growth_rate(const RauzyPath& path, std::span<const double> v, std::size_t n) {
  std::vector<Rational> exact;
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::malformed_input, "non-finite vector entry");
    exact.push_back(Rational(x));
  }
  return growth_rate(path, std::span<const Rational>(exact), n);
}

SubspaceEstimate estimate_ecs_on_path(const RauzyPath& path, std::span<const double> lambda, std::size_t depth,
                                      const EcsOptions& options) {
  const Permutation& p = path.start();
  std::size_t d = p.size();
  if (lambda.size() != d) throw Error(ErrorCode::malformed_input, "lambda has the wrong dimension");
  if (depth == 0) throw Error(ErrorCode::precondition, "E_cs estimation needs depth >= 1");
  std::size_t validation = options.validation_steps.value_or(std::max<std::size_t>(20, depth / 2));
  auto times = path.zorich_times();
  if (times.size() <= std::max(depth, validation))
    throw Error(ErrorCode::insufficient_path, "path too short for the requested depth");

  SubspaceEstimate out;
  out.depth = depth;
  out.validation_steps = validation;
  out.genus = genus(p);
  std::size_t g = out.genus;

  auto b = product_classical<Integer>(path, 0, times[depth]).entries();
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> pick(1, 1000);
  Matrix<Integer> x0(d, g);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < g; ++j) x0(i, j) = pick(rng);
  Matrix<Integer> y = b * x0;
  Matrix<Rational> yt(g, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < g; ++j) yt(j, i) = Rational(y(i, j));
  auto kernel = null_space(yt);
  if (kernel.size() != d - g)
    throw Error(ErrorCode::validation_failure, "B_depth X has rank below the genus; increase depth");

  std::vector<double> ones(d, 1.0);
  out.theta1_estimate = options.theta1 ? *options.theta1 : growth_rate(path, std::span<const double>(ones), validation).slope;
  if (!(out.theta1_estimate > 0.0))
    throw Error(ErrorCode::validation_failure, "no exponential growth along the path; increase depth");
  out.threshold = options.slow_fraction * out.theta1_estimate;

  double lambda_sum = 0.0;
  for (double l : lambda) lambda_sum += l;
  Eigen::MatrixXd cols(d, kernel.size());
  for (std::size_t k = 0; k < kernel.size(); ++k) {
    auto ints = to_integer_vector(kernel[k]);
    long shift = 0;
    for (const auto& c : ints) shift = std::max(shift, bit_length(c));
    for (std::size_t i = 0; i < d; ++i) cols(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = scaled_double(ints[i], shift);
    double slope = growth_rate(path, std::span<const Rational>(kernel[k]), validation).slope;
    out.growth_slopes.push_back(slope);
    if (slope > out.threshold)
      throw Error(ErrorCode::validation_failure, "candidate direction grows at rate " + format_scalar(slope) +
                                                     " > " + format_scalar(out.threshold) + "; increase depth");
    std::vector<Rational> exact;
    for (const auto& c : ints) exact.push_back(Rational(c));
    out.exact_basis.push_back(std::move(exact));
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(cols);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), cols.cols());
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    std::vector<double> v(d);
    double inner = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      v[i] = q(static_cast<Eigen::Index>(i), k);
      inner += v[i] * lambda[i] / lambda_sum;
    }
    out.lambda_inner = std::max(out.lambda_inner, std::fabs(inner));
    out.basis.push_back(std::move(v));
  }
  return out;
}

double restricted_norm(const std::vector<std::vector<Integer>>& basis, const std::vector<std::vector<Integer>>& images) {
  std::size_t k = basis.size();
  if (k == 0 || images.size() != k) throw Error(ErrorCode::precondition, "restricted norm needs a nonempty basis");
  std::size_t d = basis[0].size();
  Matrix<Integer> g(k, k), h(k, k);
  long shift = 0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      Integer gs(0), hs(0);
      for (std::size_t a = 0; a < d; ++a) {
        gs += basis[i][a] * basis[j][a];
        hs += images[i][a] * images[j][a];
      }
      g(i, j) = gs;
      h(i, j) = hs;
      shift = std::max(shift, bit_length(gs));
    }
  Eigen::MatrixXd gd(k, k), hd(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      gd(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = scaled_double(g(i, j), shift);
      hd(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = scaled_double(h(i, j), shift);
    }
  if (!hd.allFinite()) return std::numeric_limits<double>::infinity();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(hd, gd, Eigen::EigenvaluesOnly);
  double top = solver.eigenvalues().maxCoeff();
  return std::sqrt(std::max(top, 0.0));
}

BccReport bcc_monitor_on_path(const RauzyPath& path, const SubspaceEstimate& ecs, double V, std::size_t N,
                              std::size_t depth) {
  if (N == 0) throw Error(ErrorCode::precondition, "positivity window needs N >= 1");
  if (path.size() < depth) throw Error(ErrorCode::insufficient_path, "path shorter than the scan depth");
  std::size_t d = path.start().size();
  BccReport out;
  out.V_used = V;
  out.N = N;
  out.depth = depth;
  if (N > depth || !(V > 0.0)) return out;

  std::vector<std::vector<Integer>> basis;
  for (const auto& v : ecs.exact_basis) {
    if (v.size() != d) throw Error(ErrorCode::malformed_input, "E_cs basis has the wrong dimension");
    basis.push_back(to_integer_vector(v));
  }
  auto images = basis;
  for (std::size_t n = 0; n + N <= depth; ++n) {
    if (n > 0)
      for (auto& w : images) apply_classical_transpose(w, path[n - 1]);
    // window positivity by boolean column updates
    std::vector<std::vector<bool>> pos(d, std::vector<bool>(d, false));
    for (std::size_t i = 0; i < d; ++i) pos[i][i] = true;
    for (std::size_t k = n; k < n + N; ++k) {
      const RauzyEdge& e = path[k];
      Letter a0 = e.perm.top_last(), a1 = e.perm.bottom_last();
      Letter target = e.type == 0 ? a1 : a0;
      Letter source = e.type == 0 ? a0 : a1;
      for (std::size_t i = 0; i < d; ++i) pos[i][target] = pos[i][target] || pos[i][source];
    }
    bool positive = true;
    for (std::size_t i = 0; i < d && positive; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (!pos[i][j]) {
          positive = false;
          break;
        }
    if (!positive) continue;
    double norm = restricted_norm(basis, images);
    if (norm <= V) {
      out.times.push_back(n);
      out.norms.push_back(norm);
    }
  }
  return out;
}

}  // namespace aiet
