#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace aiet {

/// Index of a symbol in its alphabet; also the row/column index of every
/// matrix built over that alphabet.
using Letter = std::size_t;

class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols);

  /// A, B, C, ... (then A1, B1, ... past Z).
  static Alphabet standard(std::size_t d);

  std::size_t size() const { return symbols_.size(); }
  const std::string& symbol(Letter a) const { return symbols_.at(a); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  Letter index_of(std::string_view symbol) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;
  friend auto operator<=>(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> symbols_;
};

/// A pair of orderings (top, bottom) of one alphabet. The top row orders the
/// exchanged intervals, the bottom row orders their images.
class Permutation {
 public:
  Permutation(Alphabet alphabet, std::vector<Letter> top_row, std::vector<Letter> bottom_row);
  Permutation(std::shared_ptr<const Alphabet> alphabet, std::vector<Letter> top_row,
              std::vector<Letter> bottom_row);

  /// Rows as whitespace-separated symbols; the alphabet is the top row order.
  static Permutation from_rows(std::string_view top, std::string_view bottom);
  static Permutation from_rows(const Alphabet& alphabet, std::string_view top, std::string_view bottom);
  /// ABC..Z over ZY..A.
  static Permutation symmetric(std::size_t d);

  const Alphabet& alphabet() const { return *alphabet_; }
  std::size_t size() const { return top_row_.size(); }

  std::size_t top_position(Letter a) const { return top_pos_[a]; }
  std::size_t bottom_position(Letter a) const { return bottom_pos_[a]; }
  Letter top_at(std::size_t i) const { return top_row_[i]; }
  Letter bottom_at(std::size_t i) const { return bottom_row_[i]; }
  const std::vector<Letter>& top_row() const { return top_row_; }
  const std::vector<Letter>& bottom_row() const { return bottom_row_; }

  /// alpha_0: the last interval of the domain.
  Letter top_last() const { return top_row_.back(); }
  /// alpha_1: the letter whose image is last.
  Letter bottom_last() const { return bottom_row_.back(); }

  bool is_irreducible() const;

  /// Combinatorial action of one Rauzy-Veech step of the given type.
  /// Type 0 moves the bottom-last letter right after top_last() in the
  /// bottom row; type 1 moves the top-last letter right after bottom_last()
  /// in the top row.
  Permutation rauzy_successor(int type) const;

  std::string top_string() const;
  std::string bottom_string() const;
  std::string str() const { return top_string() + " / " + bottom_string(); }

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.top_row_ == b.top_row_ && a.bottom_row_ == b.bottom_row_ &&
           (a.alphabet_ == b.alphabet_ || *a.alphabet_ == *b.alphabet_);
  }
  friend std::strong_ordering operator<=>(const Permutation& a, const Permutation& b) {
    if (a.alphabet_ != b.alphabet_) {
      if (auto c = *a.alphabet_ <=> *b.alphabet_; c != 0) return c;
    }
    if (auto c = a.top_row_ <=> b.top_row_; c != 0) return c;
    return a.bottom_row_ <=> b.bottom_row_;
  }

 private:
  std::shared_ptr<const Alphabet> alphabet_;
  std::vector<Letter> top_row_;
  std::vector<Letter> bottom_row_;
  std::vector<std::size_t> top_pos_;
  std::vector<std::size_t> bottom_pos_;
};

bool validate_permutation(const Permutation& p);

/// All permutations reachable from p by Rauzy moves, sorted.
std::vector<Permutation> rauzy_class(const Permutation& p);

/// Number of cycles of the endpoint-identification permutation of the
/// suspension (singularities, counting marked points).
std::size_t singularity_count(const Permutation& p);

/// Genus of the suspension surface: d = 2g + s - 1.
std::size_t genus(const Permutation& p);

}  // namespace aiet
