#include "aiet/serialize.hpp"

#include <istream>
#include <ostream>

namespace aiet {

json to_json(const Alphabet& alphabet) { return alphabet.symbols(); }

json to_json(const Permutation& p) {
  return {{"alphabet", to_json(p.alphabet())}, {"top", p.top_string()}, {"bottom", p.bottom_string()}};
}

Permutation permutation_from_json(const json& j) {
  try {
    std::string top = j.at("top").get<std::string>();
    std::string bottom = j.at("bottom").get<std::string>();
    if (j.contains("alphabet")) {
      Alphabet alphabet(j.at("alphabet").get<std::vector<std::string>>());
      return Permutation::from_rows(alphabet, top, bottom);
    }
    return Permutation::from_rows(top, bottom);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::malformed_input, std::string("permutation: ") + e.what());
  }
}

json to_json(const RauzyEdge& e) {
  const Alphabet& a = e.perm.alphabet();
  return {{"type", e.type}, {"winner", a.symbol(e.winner)}, {"loser", a.symbol(e.loser)}};
}

json to_json(const RauzyPath& path) {
  json edges = json::array();
  for (const auto& e : path.edges()) edges.push_back(to_json(e));
  return {{"start", to_json(path.start())}, {"edges", std::move(edges)}, {"zorich_blocks", path.zorich_blocks()}};
}

namespace {

void append_edge(RauzyPath& path, const json& j) {
  try {
    int type = j.at("type").get<int>();
    RauzyEdge e = make_edge(path.end(), type);
    const Alphabet& a = path.end().alphabet();
    if (j.contains("winner") && a.index_of(j.at("winner").get<std::string>()) != e.winner)
      throw Error(ErrorCode::malformed_input, "edge winner does not match its type", path.size());
    if (j.contains("loser") && a.index_of(j.at("loser").get<std::string>()) != e.loser)
      throw Error(ErrorCode::malformed_input, "edge loser does not match its type", path.size());
    path.append(std::move(e));
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::malformed_input, std::string("edge: ") + ex.what(), path.size());
  }
}

}  // namespace

RauzyPath path_from_json(const json& j) {
  RauzyPath path(permutation_from_json(j.at("start")));
  for (const auto& e : j.at("edges")) append_edge(path, e);
  return path;
}

void write_path_jsonl(std::ostream& out, const RauzyPath& path) {
  out << json{{"start", to_json(path.start())}}.dump() << '\n';
  for (const auto& e : path.edges()) out << to_json(e).dump() << '\n';
  if (!out) throw Error(ErrorCode::io_failure, "failed to write path stream");
}

RauzyPath read_path_jsonl(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::malformed_input, "empty path stream");
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded()) throw Error(ErrorCode::malformed_input, "bad path stream header");
  RauzyPath path(permutation_from_json(header.at("start")));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json e = json::parse(line, nullptr, false);
    if (e.is_discarded()) throw Error(ErrorCode::malformed_input, "bad path stream line", path.size());
    append_edge(path, e);
  }
  return path;
}

json to_json(const KeaneVerdict& v, const Permutation& p) {
  json out = {{"status", v.passes() ? "passes-to-depth" : "fails"}, {"depth", v.depth}};
  if (v.witness) {
    const Alphabet& a = p.alphabet();
    out["witness"] = {{"origin", a.symbol(v.witness->origin)},
                      {"iterate", v.witness->iterate},
                      {"hit", a.symbol(v.witness->hit)}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

json to_json(const SpectrumEstimate& s) {
  return {{"exponents", s.exponents},
          {"confidence", s.confidence},
          {"iterations", s.iterations},
          {"elementary_steps", s.elementary_steps},
          {"seed", s.seed},
          {"pairing_defect", s.pairing_defect()},
          {"nonzero_count", s.nonzero_count()}};
}

json to_json(const SubspaceEstimate& s, const Alphabet& alphabet) {
  json exact = json::array();
  for (const auto& v : s.exact_basis) exact.push_back(vector_json(v));
  return {{"alphabet", to_json(alphabet)},
          {"basis", s.basis},
          {"exact_basis", std::move(exact)},
          {"depth", s.depth},
          {"validation_steps", s.validation_steps},
          {"growth_slopes", s.growth_slopes},
          {"theta1_estimate", s.theta1_estimate},
          {"threshold", s.threshold},
          {"genus", s.genus},
          {"lambda_inner", s.lambda_inner}};
}

json to_json(const BccReport& r) {
  return {{"times", r.times}, {"norms", r.norms}, {"V_used", r.V_used}, {"N", r.N}, {"depth", r.depth}};
}

namespace {

json clause_json(const ClauseResult& c, const Alphabet& a) {
  json out = {{"passed", c.passed}};
  if (c.witness)
    out["witness"] = {a.symbol(c.witness->first), a.symbol(c.witness->second)};
  else
    out["witness"] = nullptr;
  return out;
}

}  // namespace

json to_json(const MatrixLemmaReport& r, const Alphabet& alphabet) {
  return {{"diagonal", clause_json(r.diagonal, alphabet)},
          {"propagation", clause_json(r.propagation, alphabet)},
          {"bound", clause_json(r.bound, alphabet)},
          {"rho_max", r.rho_max},
          {"steps", r.steps},
          {"passed", r.passed()}};
}

json to_json(const SemiconjugacyReport& r) {
  return {{"equal", r.equal}, {"depth", r.depth}, {"agreement", r.agreement}};
}

std::string lyapunov_csv(const SpectrumEstimate& s) {
  std::string out = "k";
  for (std::size_t j = 0; j < s.exponents.size(); ++j) out += ",theta_" + std::to_string(j + 1);
  out += "\n";
  for (const auto& [k, row] : s.trace) {
    out += std::to_string(k);
    for (double x : row) out += "," + format_scalar(x);
    out += "\n";
  }
  return out;
}

}  // namespace aiet
