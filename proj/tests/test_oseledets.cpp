#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "aiet/oseledets.hpp"
#include "oracle.hpp"

using namespace aiet;

namespace {

Permutation rot() { return Permutation::from_rows("A B", "B A"); }

Aiet<GoldenNumber> golden() {
  GoldenNumber phi = golden_ratio();
  return make_iet(rot(), std::vector<GoldenNumber>{GoldenNumber(2) - phi, phi - GoldenNumber(1)});
}

std::vector<double> uniform_lengths(std::mt19937_64& rng, std::size_t d) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> l(d);
  for (auto& x : l) x = u(rng);
  return l;
}

double dot(const std::vector<double>& a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("symmetric spectra pair up and count 2g nonzero exponents") {
  std::mt19937_64 rng(11);
  for (std::size_t d : {2, 3, 4}) {
    CAPTURE(d);
    auto f = make_iet(Permutation::symmetric(d), uniform_lengths(rng, d));
    auto s = lyapunov_spectrum(f, 100000, 3);
    REQUIRE(s.exponents.size() == d);
    CHECK(std::is_sorted(s.exponents.rbegin(), s.exponents.rend()));
    CHECK(s.exponents.front() > 0.0);
    CHECK(s.pairing_defect() <= 0.05);
    CHECK(s.nonzero_count() == 2 * genus(Permutation::symmetric(d)));
    CHECK(s.iterations == 100000);
    CHECK(s.elementary_steps >= s.iterations);
    for (double c : s.confidence) CHECK(c >= 0.0);
  }
}

TEST_CASE("top exponent agrees across seeds and inputs") {
  std::mt19937_64 rng(12);
  auto p = Permutation::symmetric(4);
  auto a = lyapunov_spectrum(make_iet(p, uniform_lengths(rng, 4)), 100000, 1);
  auto b = lyapunov_spectrum(make_iet(p, uniform_lengths(rng, 4)), 100000, 2);
  CHECK(std::fabs(a.exponents[0] - b.exponents[0]) <= 0.02 * a.exponents[0]);
  // hyperelliptic genus 2: theta_2 / theta_1 = 1/3
  CHECK(a.exponents[1] / a.exponents[0] == doctest::Approx(1.0 / 3.0).epsilon(0.03));
  // rotations: the Zorich-accelerated Gauss map
  auto r = lyapunov_spectrum(make_iet(rot(), uniform_lengths(rng, 2)), 100000, 1);
  CHECK(r.exponents[0] == doctest::Approx(M_PI * M_PI / (12.0 * std::log(2.0))).epsilon(0.02));
}

TEST_CASE("long same-type runs do not trip the Lyapunov loop") {
  // a partial quotient near 10^7 at the start
  auto f = make_iet(rot(), std::vector<double>{1.0, 1.0 / (1e7 + std::sqrt(2.0))});
  auto s = lyapunov_spectrum(f, 1000, 1);
  CHECK(s.elementary_steps > 10'000'000);
  CHECK(std::isfinite(s.exponents[0]));
}

TEST_CASE("spectrum preconditions and trace") {
  auto f = make_iet(rot(), std::vector<double>{0.3, 0.7 + 1e-3 * std::sqrt(2.0)});
  try {
    lyapunov_spectrum(f, 0, 1);
    FAIL("iterations = 0 accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::precondition);
  }
  CHECK_THROWS_AS(lyapunov_spectrum(f, 999, 1), Error);
  auto twisted = make_aiet(rot(), std::vector<double>{0.5, 0.5}, std::vector<double>{1.5, 0.5}, 1e-12);
  CHECK_THROWS_AS(lyapunov_spectrum(twisted, 1000, 1), Error);
  LyapunovOptions o;
  o.trace_stride = 500;
  auto s = lyapunov_spectrum(f, 2000, 1, o);
  CHECK(s.trace.size() == 4);
  CHECK(s.trace.back().first == 2000);
  try {
    lyapunov_spectrum(make_iet(rot(), std::vector<double>{0.5, 0.5}), 1000, 1);
    FAIL("rational rotation accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::keane_failure);
  }
}

TEST_CASE("golden E_cs is spanned by (lambda_B, -lambda_A)") {
  auto f = golden();
  auto e = estimate_ecs(f, 60);
  REQUIRE(e.dimension() == 1);
  CHECK(e.genus == 1);
  double la = to_double(f.length(0)), lb = to_double(f.length(1));
  double n = std::hypot(la, lb);
  auto v = e.basis[0];
  CHECK(std::fabs(std::fabs(v[0]) - lb / n) < 1e-9);
  CHECK(std::fabs(std::fabs(v[1]) - la / n) < 1e-9);
  CHECK(v[0] * v[1] < 0.0);
  CHECK(e.lambda_inner < 1e-9);
  CHECK(e.growth_slopes[0] < -0.4);
  // theta_1 of the golden rotation is log(phi) per step
  auto path = zorich_path(f, 60);
  std::vector<Rational> lam{Rational(0.3819660112501051), Rational(0.6180339887498949)};
  auto g = growth_rate(path, std::span<const Rational>(lam), 60);
  CHECK(g.slope == doctest::Approx(std::log((1 + std::sqrt(5.0)) / 2)).epsilon(1e-3));
  CHECK(g.log_norms.size() == 61);
  CHECK(g.rates.size() == 60);
}

TEST_CASE("E_cs dimension is d - g and vectors are orthogonal to lambda") {
  std::mt19937_64 rng(21);
  for (std::size_t d = 2; d <= 5; ++d) {
    auto p = Permutation::symmetric(d);
    auto l = uniform_lengths(rng, d);
    auto theta = lyapunov_spectrum(make_iet(p, l), 20000, 1).exponents[0];
    auto path = zorich_path(make_iet(p, l), 400);
    EcsOptions o;
    o.theta1 = theta;
    auto e = estimate_ecs_on_path(path, l, 400, o);
    CAPTURE(d);
    CHECK(e.dimension() == d - genus(p));
    CHECK(e.validation_steps == 200);
    CHECK(e.threshold == doctest::Approx(0.05 * theta));
    for (std::size_t i = 0; i < e.dimension(); ++i) {
      CHECK(e.growth_slopes[i] <= e.threshold);
      for (std::size_t j = 0; j < e.dimension(); ++j)
        CHECK(std::fabs(dot(e.basis[i], e.basis[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
    }
    double lsum = 0.0;
    for (double x : l) lsum += x;
    for (auto& v : e.basis) CHECK(std::fabs(dot(v, l)) / lsum <= 1e-6);
    CHECK(e.lambda_inner <= 1e-6);
    // lambda and a random vector see the top exponent
    std::normal_distribution<double> gauss;
    std::vector<double> r(d);
    for (auto& x : r) x = gauss(rng);
    CHECK(growth_rate(path, std::span<const double>(l), 400).slope >= 0.9 * theta);
    CHECK(growth_rate(path, std::span<const double>(r), 400).slope >= 0.9 * theta);
  }
}

TEST_CASE("E_cs and growth-rate errors") {
  auto f = golden();
  try {
    // a single step cannot separate the directions
    estimate_ecs(f, 1);
    FAIL("depth 1 validated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::validation_failure);
  }
  CHECK_THROWS_AS(estimate_ecs(f, 0), Error);
  auto path = zorich_path(f, 10);
  try {
    growth_rate(path, std::span<const double>(std::vector<double>{0.0, 0.0}), 5);
    FAIL("zero vector accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::zero_vector);
  }
  try {
    growth_rate(path, std::span<const double>(std::vector<double>{1.0, 0.0}), 11);
    FAIL("short path accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::insufficient_path);
  }
  CHECK_THROWS_AS(estimate_ecs_on_path(path, std::vector<double>{1.0}, 5), Error);
  CHECK(least_squares_slope(std::vector<double>{0, 1, 2}, std::vector<double>{1, 3, 5}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(least_squares_slope(std::vector<double>{0}, std::vector<double>{1}), Error);
}

TEST_CASE("bounded central condition on the golden rotation") {
  auto f = golden();
  auto e = estimate_ecs(f, 60);
  auto r = bcc_monitor(f, e, 10.0, 2, 1000);
  REQUIRE_FALSE(r.times.empty());
  CHECK(std::is_sorted(r.times.begin(), r.times.end()));
  CHECK(r.times.size() == r.norms.size());
  for (double x : r.norms) CHECK(x <= 10.0);
  CHECK(r.times.back() + 2 <= 1000);
  CHECK(r.V_used == 10.0);
  CHECK(r.N == 2);
  // the window matrices at hit times are positive (direct check)
  auto path = elementary_path(f, 1000);
  for (auto n : r.times) CHECK(product_classical<Integer>(path, n, n + 2).entries().is_positive());

  CHECK(bcc_monitor(f, e, 0.0, 2, 1000).times.empty());
  CHECK(bcc_monitor(f, e, 10.0, 1001, 1000).times.empty());
  CHECK_THROWS_AS(bcc_monitor(f, e, 10.0, 0, 1000), Error);
  SubspaceEstimate empty;
  CHECK_THROWS_AS(bcc_monitor(f, empty, 10.0, 2, 1000), Error);
}

TEST_CASE("restricted norm") {
  // identity image: norm 1; doubled image: norm 2
  std::vector<std::vector<Integer>> basis{{Integer(1), Integer(-1)}};
  CHECK(restricted_norm(basis, basis) == doctest::Approx(1.0));
  std::vector<std::vector<Integer>> twice{{Integer(2), Integer(-2)}};
  CHECK(restricted_norm(basis, twice) == doctest::Approx(2.0));
  CHECK_THROWS_AS(restricted_norm({}, {}), Error);
}
