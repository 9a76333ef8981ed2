#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "aiet/aiet.hpp"

namespace aiet {

/// One edge of the Rauzy graph: the permutation before the step, its type,
/// and the geometric winner (letter of the longer of I_{alpha_0} and
/// f(I_{alpha_1})) and loser.
struct RauzyEdge {
  Permutation perm;
  int type = 0;
  Letter winner = 0;
  Letter loser = 0;

  friend bool operator==(const RauzyEdge& a, const RauzyEdge& b) {
    return a.type == b.type && a.winner == b.winner && a.loser == b.loser && a.perm == b.perm;
  }
};

/// Builds the edge leaving p with the given type.
RauzyEdge make_edge(const Permutation& p, int type);

class RauzyPath {
 public:
  explicit RauzyPath(Permutation start) : start_(start), end_(std::move(start)) {}

  const Permutation& start() const { return start_; }
  /// Permutation reached after the last edge.
  const Permutation& end() const { return end_; }
  const std::vector<RauzyEdge>& edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  const RauzyEdge& operator[](std::size_t i) const { return edges_[i]; }

  /// Rejects edges that do not leave end() or whose winner/loser do not
  /// match the type.
  void append(RauzyEdge edge);

  /// Run lengths of equal consecutive types. The last run may still be open.
  std::vector<std::size_t> zorich_blocks() const;

  /// z_0 = 0 < z_1 < ... : indices where the type changes. Only times
  /// confirmed by a later edge of the other type are listed.
  std::vector<std::size_t> zorich_times() const;

  /// Every letter has won at least once (finite shadow of infinite completeness).
  bool every_letter_wins() const;

  RauzyPath prefix(std::size_t n) const;

 private:
  Permutation start_;
  Permutation end_;
  std::vector<RauzyEdge> edges_;
};

/// Type of f, or a tie error. Floating scalars treat relative differences
/// up to `tie_tolerance` as ties.
template <class T>
int rauzy_type(const Aiet<T>& f, const T& tie_tolerance = ScalarTraits<T>::tie_tolerance()) {
  const auto& p = f.perm();
  Letter a0 = p.top_last();
  Letter a1 = p.bottom_last();
  T top = f.length(a0);
  T bottom = f.slope(a1) * f.length(a1);
  bool tie;
  if constexpr (is_exact_v<T>) {
    tie = top == bottom;
  } else {
    T scale = top > bottom ? top : bottom;
    tie = abs_value(T(top - bottom)) <= tie_tolerance * scale;
  }
  if (tie)
    throw Error(ErrorCode::tie, "|I_" + p.alphabet().symbol(a0) + "| equals |f(I_" + p.alphabet().symbol(a1) +
                                    ")| (Keane condition fails)");
  return top > bottom ? 0 : 1;
}

template <class T>
struct StepResult {
  Aiet<T> next;
  RauzyEdge edge;
};

/// One Rauzy-Veech step: f induced on [0, |l| - min(|I_{alpha_0}|, |f(I_{alpha_1})|)).
///
/// type 0 (top wins): l'_{a0} = l_{a0} - rho_{a1} l_{a1},  rho'_{a1} = rho_{a1} rho_{a0}
/// type 1 (bottom wins): l'_{a0} = l_{a0} / rho_{a1},  l'_{a1} = l_{a1} - l'_{a0},
///                       rho'_{a0} = rho_{a0} rho_{a1}
/// The loser's slope is multiplied by the winner's in both cases.
template <class T>
StepResult<T> rauzy_step(const Aiet<T>& f, const T& tie_tolerance = ScalarTraits<T>::tie_tolerance()) {
  int type = rauzy_type(f, tie_tolerance);
  const auto& p = f.perm();
  Letter a0 = p.top_last();
  Letter a1 = p.bottom_last();
  std::vector<T> lengths = f.lengths();
  std::vector<T> slopes = f.slopes();
  if (type == 0) {
    lengths[a0] = f.length(a0) - f.slope(a1) * f.length(a1);
    slopes[a1] = f.slope(a1) * f.slope(a0);
  } else {
    T piece = f.length(a0) / f.slope(a1);
    lengths[a0] = piece;
    lengths[a1] = f.length(a1) - piece;
    slopes[a0] = f.slope(a0) * f.slope(a1);
  }
  if constexpr (!is_exact_v<T>) {
    for (const auto& l : lengths)
      if (!(l > T(0))) throw Error(ErrorCode::degenerate_lengths, "non-positive length after induction");
  }
  RauzyEdge edge = make_edge(p, type);
  return {Aiet<T>(typename Aiet<T>::Unchecked{}, p.rauzy_successor(type), std::move(lengths), std::move(slopes)),
          std::move(edge)};
}

/// Rescales the domain to [0, 1).
template <class T>
Aiet<T> normalize(const Aiet<T>& f) {
  T total = f.total_length();
  std::vector<T> lengths = f.lengths();
  for (auto& l : lengths) l /= total;
  return Aiet<T>(typename Aiet<T>::Unchecked{}, f.perm(), std::move(lengths), f.slopes());
}

/// Streams the combinatorial rotation number of an AIET. Floating scalars are
/// renormalized to |l|_1 = 1 after every step by default so long runs do not
/// underflow; the path is unaffected by this.
template <class T>
class PathIterator {
 public:
  explicit PathIterator(Aiet<T> f, bool renormalize = !is_exact_v<T>,
                        T tie_tolerance = ScalarTraits<T>::tie_tolerance())
      : current_(std::move(f)), renormalize_(renormalize), tie_tolerance_(std::move(tie_tolerance)) {}

  RauzyEdge next() {
    try {
      auto step = rauzy_step(current_, tie_tolerance_);
      current_ = renormalize_ ? normalize(step.next) : std::move(step.next);
      ++index_;
      return std::move(step.edge);
    } catch (const Error& e) {
      rethrow_at_step(e, index_);
    }
  }

  /// Type of the next step without taking it.
  int peek_type() const {
    try {
      return rauzy_type(current_, tie_tolerance_);
    } catch (const Error& e) {
      rethrow_at_step(e, index_);
    }
  }

  const Aiet<T>& current() const { return current_; }
  std::size_t index() const { return index_; }

 private:
  Aiet<T> current_;
  bool renormalize_;
  T tie_tolerance_;
  std::size_t index_ = 0;
};

template <class T>
struct ZorichResult {
  Aiet<T> next;
  std::size_t z;
  std::vector<RauzyEdge> edges;
};

inline constexpr std::size_t default_zorich_cap = 1'000'000;

/// Z(f) = R^z(f) with z the smallest k >= 1 such that the type of R^k(f)
/// differs from the type of f. Fails with cap-exceeded once z would exceed
/// `cap`.
template <class T>
ZorichResult<T> zorich_step(const Aiet<T>& f, std::size_t cap = default_zorich_cap,
                            const T& tie_tolerance = ScalarTraits<T>::tie_tolerance()) {
  int first = rauzy_type(f, tie_tolerance);
  std::vector<RauzyEdge> edges;
  Aiet<T> g = f;
  for (std::size_t k = 1;; ++k) {
    try {
      auto step = rauzy_step(g, tie_tolerance);
      g = std::move(step.next);
      edges.push_back(std::move(step.edge));
      if (rauzy_type(g, tie_tolerance) != first) return {std::move(g), k, std::move(edges)};
    } catch (const Error& e) {
      rethrow_at_step(e, k);
    }
    if (k >= cap)
      throw Error(ErrorCode::cap_exceeded, "more than " + std::to_string(cap) + " consecutive steps of type " +
                                               std::to_string(first));
  }
}

/// First n edges of gamma(f).
template <class T>
RauzyPath rotation_number(const Aiet<T>& f, std::size_t n,
                          const T& tie_tolerance = ScalarTraits<T>::tie_tolerance()) {
  RauzyPath path(f.perm());
  PathIterator<T> it(f, !is_exact_v<T>, tie_tolerance);
  for (std::size_t i = 0; i < n; ++i) path.append(it.next());
  return path;
}

/// Edge-by-edge comparison of the first n edges.
bool paths_equal(const RauzyPath& a, const RauzyPath& b, std::size_t n);

/// Length of the longest common prefix.
std::size_t common_prefix_length(const RauzyPath& a, const RauzyPath& b);

}  // namespace aiet
