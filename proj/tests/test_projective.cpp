#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "checks.hpp"

using namespace aiet;

TEST_CASE("Hilbert distance examples") {
  std::vector<double> u{1.0, 2.0}, v{2.0, 1.0};
  CHECK(hilbert_distance(u, u) == 0.0);
  CHECK(hilbert_distance(u, std::vector<double>{3.0, 6.0}) == doctest::Approx(0.0));
  CHECK(hilbert_distance(u, v) == doctest::Approx(std::log(4.0)));
  // exact inputs give the same value
  std::vector<Rational> qu{Rational(1), Rational(2)}, qv{Rational(2), Rational(1)};
  CHECK(hilbert_distance(qu, qv) == doctest::Approx(std::log(4.0)));
  try {
    hilbert_distance(std::vector<double>{1.0, 0.0}, v);
    FAIL("zero coordinate accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::nonpositive_coordinate);
  }
  CHECK_THROWS_AS(hilbert_distance(std::vector<double>{1.0}, v), Error);
  HighPrecision hd = hilbert_distance(std::vector<HighPrecision>{1, 2}, std::vector<HighPrecision>{2, 1});
  CHECK(abs(hd - log(HighPrecision(4))) < HighPrecision("1e-90"));
}

TEST_CASE("projective points") {
  std::vector<double> x{1.0, 3.0};
  auto p = ProjectivePoint<double>::project(x);
  CHECK(p.coords()[0] == doctest::Approx(0.25));
  CHECK(p.coords()[0] + p.coords()[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(ProjectivePoint<double>::project(std::vector<double>{1.0, -1.0}), Error);
}

TEST_CASE("contraction coefficient examples") {
  CHECK(contraction_coefficient(Matrix<double>::identity(3)) == 1.0);
  auto m = Matrix<double>::from_rows({{2, 1}, {1, 2}});
  CHECK(contraction_coefficient(m) == doctest::Approx(1.0 / 3.0));
  auto diam = image_diameter(m);
  CHECK(diam.finite());
  CHECK(diam.diameter == doctest::Approx(std::log(4.0)));
  CHECK(sampled_contraction_ratio(m, 20000, 3) <= 1.0 / 3.0 + 1e-10);
  CHECK(sampled_contraction_ratio(m, 20000, 3) > 0.25);
  CHECK_FALSE(image_diameter(Matrix<double>::identity(2)).finite());
  try {
    contraction_coefficient(Matrix<double>::from_rows({{1, 2}, {2, 4}}));
    FAIL("singular accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::singular_matrix);
  }
  CHECK_THROWS_AS(contraction_coefficient(Matrix<double>::from_rows({{1, -1}, {1, 1}})), Error);
  auto q = Matrix<Rational>::from_rows({{2, 1}, {1, 2}});
  CHECK(contraction_coefficient(q) == doctest::Approx(1.0 / 3.0));
  CHECK(contraction_coefficient(ScaledMatrix<double>(m)) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("uniform positivity bound") {
  CHECK(uniform_contraction_bound(1.0) == 0.0);
  CHECK(uniform_contraction_bound(3.0) < 1.0);
  CHECK_THROWS_AS(uniform_contraction_bound(0.5), Error);
  auto m = Matrix<double>::from_rows({{2, 1}, {1, 2}});
  CHECK(positivity_constant(m) == 2.0);
  CHECK(contraction_coefficient(m) <= uniform_contraction_bound(2.0));
  CHECK(positivity_constant(Matrix<double>::identity(2)) == std::numeric_limits<double>::infinity());
}

TEST_CASE("randomized metric and contraction properties") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 1000; ++trial) {
    auto failure = checks::projective_trial(rng);
    CAPTURE(trial);
    REQUIRE(failure == "");
  }
}

TEST_CASE("Monte-Carlo ratios stay below the coefficient") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = checks::random_positive_matrix(rng, 2 + trial % 4);
    double k = contraction_coefficient(m);
    double r = sampled_contraction_ratio(m, 400, static_cast<std::uint64_t>(trial));
    CHECK(r <= k + 1e-10);
  }
}
