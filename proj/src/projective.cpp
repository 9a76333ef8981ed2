#include "aiet/projective.hpp"

#include <random>

namespace aiet {

double uniform_contraction_bound(double gamma) {
  if (!(gamma >= 1.0)) throw Error(ErrorCode::precondition, "positivity constant must be >= 1");
  return std::tanh(std::log(gamma));
}

double positivity_constant(const Matrix<double>& m) {
  double gamma = 1.0;
  for (double x : m.data()) {
    if (!(x > 0.0)) return std::numeric_limits<double>::infinity();
    gamma = std::max({gamma, x, 1.0 / x});
  }
  return gamma;
}

double sampled_contraction_ratio(const Matrix<double>& m, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> logu(-3.0, 3.0);
  std::size_t d = m.cols();
  double best = 0.0;
  std::vector<double> v(d), w(d);
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < d; ++i) {
      v[i] = std::exp(logu(rng));
      w[i] = std::exp(logu(rng));
    }
    double before = hilbert_distance(v, w);
    if (before < 1e-9) continue;
    double after = hilbert_distance(m.apply(v), m.apply(w));
    best = std::max(best, after / before);
  }
  return best;
}

}  // namespace aiet
