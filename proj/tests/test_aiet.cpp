#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "aiet/aiet.hpp"
#include "oracle.hpp"

using namespace aiet;

namespace {

Permutation rot() { return Permutation::from_rows("A B", "B A"); }

Rational q(long n, long d) { return Rational(n, d); }

}  // namespace

TEST_CASE("construction and closure") {
  auto f = make_iet(rot(), std::vector<Rational>{q(1, 2), q(1, 2)});
  CHECK(f.closure_residual() == 0);
  CHECK(f.is_iet());
  CHECK(f.is_normalized());

  auto g = make_aiet(rot(), std::vector<Rational>{q(2, 3), q(1, 3)}, std::vector<Rational>{q(1, 2), q(2, 1)}, Rational(0));
  CHECK(g.closure_residual() == 0);
  CHECK_FALSE(g.is_iet());

  try {
    make_aiet_log(rot(), std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 1.0}, 1e-9);
    FAIL("closure accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::closure_violation);
  }
  try {
    make_iet(Permutation::from_rows("A B C D", "B A D C"), std::vector<Rational>(4, q(1, 4)));
    FAIL("reducible accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::reducible_permutation);
  }
  try {
    make_iet(rot(), std::vector<Rational>{q(1, 1), q(0, 1)});
    FAIL("zero length accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::nonpositive_length);
  }
  CHECK_THROWS_AS(make_iet(rot(), std::vector<Rational>{q(1, 1)}), Error);

  auto h = make_aiet_log(rot(), std::vector<double>{2.0 / 3, 1.0 / 3}, std::vector<double>{std::log(0.5), std::log(2.0)}, 1e-12);
  CHECK(h.closure_residual() < 1e-15);
  CHECK(h.log_slopes()[1] == doctest::Approx(std::log(2.0)));
}

TEST_CASE("evaluation examples") {
  auto f = make_iet(rot(), std::vector<double>{0.4, 0.6});
  CHECK(evaluate(f, 0.1) == doctest::Approx(0.7));
  CHECK(evaluate(f, 0.4) == doctest::Approx(0.0));
  auto g = make_aiet(rot(), std::vector<Rational>{q(2, 3), q(1, 3)}, std::vector<Rational>{q(1, 2), q(2, 1)}, Rational(0));
  CHECK(evaluate(g, Rational(0)) == q(2, 3));
  CHECK(evaluate(g, q(2, 3)) == Rational(0));
  CHECK(evaluate(g, q(1, 3)) == q(2, 3) + q(1, 6));
  try {
    evaluate(f, 1.0);
    FAIL("out of domain accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::out_of_domain);
  }
  CHECK_THROWS_AS(evaluate(f, -0.1), Error);
}

TEST_CASE("evaluate matches the direct piecewise definition and tiles the interval") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t d = 2 + trial % 4;
    auto f = oracle::random_aiet(rng, d, trial % 2 == 0).f;
    Rational total = f.total_length();
    // image blocks tile [0, |l|)
    std::vector<std::pair<Rational, Rational>> blocks;
    for (Letter a = 0; a < d; ++a) blocks.push_back({f.image_start(a), f.image_start(a) + f.length(a) * f.slope(a)});
    std::sort(blocks.begin(), blocks.end());
    CHECK(blocks.front().first == 0);
    for (std::size_t i = 1; i < blocks.size(); ++i) CHECK(blocks[i].first == blocks[i - 1].second);
    CHECK(blocks.back().second == total);
    std::uniform_int_distribution<long> u(0, 999'999);
    for (int k = 0; k < 30; ++k) {
      Rational x = total * Rational(u(rng), 1'000'000);
      Rational y = evaluate(f, x);
      CHECK(y == oracle::apply_map(f, x));
      CHECK(y >= 0);
      CHECK(y < total);
      if (f.is_iet()) {
        // pure translation by the difference of positions
        Letter a = locate(f, x);
        CHECK(y - x == f.image_start(a) - f.interval_start(a));
      }
    }
  }
}

TEST_CASE("Keane: rational rotation fails with a replayable witness") {
  auto f = make_iet(rot(), std::vector<Rational>{q(1, 2), q(1, 2)});
  auto v = check_keane(f, 10);
  REQUIRE_FALSE(v.passes());
  REQUIRE(v.witness);
  Rational x = f.interval_start(v.witness->origin);
  for (std::size_t m = 0; m < v.witness->iterate; ++m) x = oracle::apply_map(f, x);
  CHECK(x == f.interval_start(v.witness->hit));
  CHECK(v.witness->iterate == 2);

  CHECK_THROWS_AS(check_keane(f, 0), Error);

  for (auto [a, b] : {std::pair{3, 7}, std::pair{2, 5}, std::pair{1, 4}}) {
    auto g = make_iet(Permutation::symmetric(3), std::vector<Rational>{q(a, 20), q(b, 20), q(20 - a - b, 20)});
    auto w = check_keane(g, 200);
    // every IET with rational lengths has finite orbits, so connections exist
    REQUIRE_FALSE(w.passes());
    Rational x = g.interval_start(w.witness->origin);
    for (std::size_t m = 0; m < w.witness->iterate; ++m) x = evaluate(g, x);
    CHECK(x == g.interval_start(w.witness->hit));
  }
}

TEST_CASE("Keane: golden rotation passes exactly") {
  GoldenNumber phi = golden_ratio();
  auto f = make_iet(rot(), std::vector<GoldenNumber>{GoldenNumber(2) - phi, phi - GoldenNumber(1)});
  auto v = check_keane(f, 1000);
  CHECK(v.passes());
  CHECK(v.depth == 1000);
  CHECK_FALSE(v.witness);
}

TEST_CASE("Keane in float mode uses a collision tolerance") {
  auto f = make_iet(rot(), std::vector<double>{0.5, 0.5});
  CHECK_FALSE(check_keane(f, 5).passes());
  auto g = make_iet(rot(), std::vector<double>{0.5 + 1e-9, 0.5 - 1e-9});
  CHECK(check_keane(g, 5).passes());
  CHECK_FALSE(check_keane(g, 5, std::optional<double>(1e-6)).passes());
}
