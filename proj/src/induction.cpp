#include "aiet/induction.hpp"

#include <algorithm>

namespace aiet {

RauzyEdge make_edge(const Permutation& p, int type) {
  if (type != 0 && type != 1) throw Error(ErrorCode::malformed_input, "edge type must be 0 or 1");
  Letter a0 = p.top_last();
  Letter a1 = p.bottom_last();
  return type == 0 ? RauzyEdge{p, 0, a0, a1} : RauzyEdge{p, 1, a1, a0};
}

void RauzyPath::append(RauzyEdge edge) {
  if (!(edge.perm == end_))
    throw Error(ErrorCode::malformed_input, "edge does not leave " + end_.str(), edges_.size());
  RauzyEdge expected = make_edge(edge.perm, edge.type);
  if (expected.winner != edge.winner || expected.loser != edge.loser)
    throw Error(ErrorCode::malformed_input, "winner/loser inconsistent with the edge type", edges_.size());
  end_ = edge.perm.rauzy_successor(edge.type);
  edges_.push_back(std::move(edge));
}

std::vector<std::size_t> RauzyPath::zorich_blocks() const {
  std::vector<std::size_t> blocks;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (i == 0 || edges_[i].type != edges_[i - 1].type)
      blocks.push_back(1);
    else
      ++blocks.back();
  }
  return blocks;
}

std::vector<std::size_t> RauzyPath::zorich_times() const {
  std::vector<std::size_t> times{0};
  for (std::size_t i = 1; i < edges_.size(); ++i)
    if (edges_[i].type != edges_[i - 1].type) times.push_back(i);
  return times;
}

bool RauzyPath::every_letter_wins() const {
  std::vector<bool> won(start_.size(), false);
  for (const auto& e : edges_) won[e.winner] = true;
  return std::all_of(won.begin(), won.end(), [](bool b) { return b; });
}

RauzyPath RauzyPath::prefix(std::size_t n) const {
  if (n > edges_.size())
    throw Error(ErrorCode::insufficient_length, "prefix of " + std::to_string(n) + " edges requested from a path of " +
                                                    std::to_string(edges_.size()));
  RauzyPath out(start_);
  out.edges_.assign(edges_.begin(), edges_.begin() + static_cast<std::ptrdiff_t>(n));
  out.end_ = n == 0 ? start_ : edges_[n - 1].perm.rauzy_successor(edges_[n - 1].type);
  return out;
}

bool paths_equal(const RauzyPath& a, const RauzyPath& b, std::size_t n) {
  if (a.size() < n || b.size() < n)
    throw Error(ErrorCode::insufficient_length, "path comparison to depth " + std::to_string(n) +
                                                    " needs both paths that long");
  if (!(a.start() == b.start())) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

std::size_t common_prefix_length(const RauzyPath& a, const RauzyPath& b) {
  if (!(a.start() == b.start())) return 0;
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!(a[i] == b[i])) return i;
  return n;
}

}  // namespace aiet
