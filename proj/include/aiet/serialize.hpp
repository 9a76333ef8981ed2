#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "aiet/solver.hpp"

namespace aiet {

using json = nlohmann::json;

json to_json(const Alphabet& alphabet);
json to_json(const Permutation& p);
Permutation permutation_from_json(const json& j);

json to_json(const RauzyEdge& e);
/// start permutation (with alphabet) and edges as {type, winner, loser}.
json to_json(const RauzyPath& path);
RauzyPath path_from_json(const json& j);
/// Streaming form: a header line with the start permutation, then one edge per line.
void write_path_jsonl(std::ostream& out, const RauzyPath& path);
RauzyPath read_path_jsonl(std::istream& in);

json to_json(const KeaneVerdict& v, const Permutation& p);
json to_json(const SpectrumEstimate& s);
json to_json(const SubspaceEstimate& s, const Alphabet& alphabet);
json to_json(const BccReport& r);
json to_json(const MatrixLemmaReport& r, const Alphabet& alphabet);
json to_json(const SemiconjugacyReport& r);

template <class T>
json scalar_json(const T& x) {
  if constexpr (std::is_same_v<T, double>) {
    using std::isfinite;
    if (!isfinite(x)) return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
  } else if constexpr (std::is_same_v<T, HighPrecision>) {
    if (!boost::multiprecision::isfinite(x)) return x > 0 ? "inf" : "-inf";
  }
  return format_scalar(x);
}

template <class T>
json vector_json(const std::vector<T>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(scalar_json(x));
  return out;
}

template <class T>
json to_json(const Aiet<T>& f) {
  return {{"permutation", to_json(f.perm())},
          {"mode", std::string(to_string(ScalarTraits<T>::mode))},
          {"lengths", vector_json(f.lengths())},
          {"slopes", vector_json(f.slopes())},
          {"closure_residual", scalar_json(f.closure_residual())}};
}

template <class T>
json to_json(const ScaledMatrix<T>& m, const Alphabet& alphabet) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(scalar_json(m.entries()(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"alphabet", to_json(alphabet)},
          {"mode", std::string(to_string(ScaledMatrix<T>::mode()))},
          {"entries", std::move(rows)},
          {"logscale", m.logscale()}};
}

template <class R>
json to_json(const DiameterPoint<R>& p) {
  return {{"step", p.step}, {"diameter", scalar_json(p.diameter)}, {"logscale", p.logscale}};
}

template <class R>
json to_json(const SolveReport<R>& r) {
  json trace = json::array();
  for (const auto& p : r.diameter_trace) trace.push_back(to_json(p));
  return {{"lengths", vector_json(r.lengths)},
          {"steps", r.steps},
          {"final_diameter", scalar_json(r.final_diameter)},
          {"closure_residual", scalar_json(r.closure_residual)},
          {"verified_depth", r.verified_depth},
          {"diameter_trace", std::move(trace)},
          {"tolerance", scalar_json(r.tolerance)},
          {"converged", r.converged},
          {"omega", vector_json(r.omega)},
          {"projection_distance", scalar_json(r.projection_distance)},
          {"final_contraction", scalar_json(r.final_contraction)},
          {"positivity_constant", scalar_json(r.positivity_constant)}};
}

template <class R>
json to_json(const ContractionSkeleton<R>& s) {
  return {{"times", s.times},
          {"diameters", vector_json(s.diameters)},
          {"ratios", s.ratios},
          {"window_kappas", s.window_kappas},
          {"kappa_hat", s.kappa_hat},
          {"window_kappa_sup", s.window_kappa_sup},
          {"submultiplicative", s.submultiplicative}};
}

/// "step,diameter,logscale" rows.
template <class R>
std::string diameter_csv(const std::vector<DiameterPoint<R>>& trace) {
  std::string out = "step,diameter,logscale\n";
  for (const auto& p : trace)
    out += std::to_string(p.step) + "," + scalar_json(p.diameter).template get<std::string>() + "," +
           format_scalar(p.logscale) + "\n";
  return out;
}

/// "k,theta_1,...,theta_d" rows of running estimates.
std::string lyapunov_csv(const SpectrumEstimate& s);

}  // namespace aiet
