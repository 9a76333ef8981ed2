#include "aiet/permutation.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "aiet/error.hpp"

namespace aiet {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.size() < 2) throw Error(ErrorCode::malformed_input, "alphabet needs at least two symbols");
  std::vector<std::string> sorted = symbols_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(ErrorCode::malformed_input, "alphabet symbols must be distinct");
  for (const auto& s : symbols_) {
    if (s.empty() || s.find_first_of(" \t\n") != std::string::npos)
      throw Error(ErrorCode::malformed_input, "alphabet symbols must be non-empty words");
  }
}

Alphabet Alphabet::standard(std::size_t d) {
  std::vector<std::string> symbols;
  for (std::size_t i = 0; i < d; ++i) {
    std::string s(1, static_cast<char>('A' + i % 26));
    if (i >= 26) s += std::to_string(i / 26);
    symbols.push_back(s);
  }
  return Alphabet(std::move(symbols));
}

Letter Alphabet::index_of(std::string_view symbol) const {
  auto it = std::find(symbols_.begin(), symbols_.end(), symbol);
  if (it == symbols_.end())
    throw Error(ErrorCode::malformed_input, "unknown symbol '" + std::string(symbol) + "'");
  return static_cast<Letter>(it - symbols_.begin());
}

namespace {

std::vector<std::size_t> inverse_of(const std::vector<Letter>& row, std::size_t d, const char* which) {
  if (row.size() != d)
    throw Error(ErrorCode::malformed_input, std::string(which) + " row has wrong length");
  std::vector<std::size_t> pos(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (row[i] >= d || pos[row[i]] != d)
      throw Error(ErrorCode::malformed_input, std::string(which) + " row is not a bijection");
    pos[row[i]] = i;
  }
  return pos;
}

std::vector<std::string> split_words(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

std::vector<Letter> letters_of(const Alphabet& alphabet, const std::vector<std::string>& words) {
  std::vector<Letter> row;
  for (const auto& w : words) row.push_back(alphabet.index_of(w));
  return row;
}

}  // namespace

Permutation::Permutation(Alphabet alphabet, std::vector<Letter> top_row, std::vector<Letter> bottom_row)
    : Permutation(std::make_shared<const Alphabet>(std::move(alphabet)), std::move(top_row),
                  std::move(bottom_row)) {}

Permutation::Permutation(std::shared_ptr<const Alphabet> alphabet, std::vector<Letter> top_row,
                         std::vector<Letter> bottom_row)
    : alphabet_(std::move(alphabet)), top_row_(std::move(top_row)), bottom_row_(std::move(bottom_row)) {
  top_pos_ = inverse_of(top_row_, alphabet_->size(), "top");
  bottom_pos_ = inverse_of(bottom_row_, alphabet_->size(), "bottom");
}

Permutation Permutation::from_rows(std::string_view top, std::string_view bottom) {
  Alphabet alphabet(split_words(top));
  return from_rows(alphabet, top, bottom);
}

Permutation Permutation::from_rows(const Alphabet& alphabet, std::string_view top, std::string_view bottom) {
  return Permutation(alphabet, letters_of(alphabet, split_words(top)), letters_of(alphabet, split_words(bottom)));
}

Permutation Permutation::symmetric(std::size_t d) {
  std::vector<Letter> top(d), bottom(d);
  for (std::size_t i = 0; i < d; ++i) {
    top[i] = i;
    bottom[i] = d - 1 - i;
  }
  return Permutation(Alphabet::standard(d), top, bottom);
}

bool Permutation::is_irreducible() const {
  std::size_t d = size();
  std::size_t reach = 0;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    reach = std::max(reach, bottom_pos_[top_row_[k]]);
    if (reach == k) return false;
  }
  return true;
}

Permutation Permutation::rauzy_successor(int type) const {
  std::vector<Letter> top = top_row_;
  std::vector<Letter> bottom = bottom_row_;
  if (type == 0) {
    Letter loser = bottom.back();
    bottom.pop_back();
    auto at = std::find(bottom.begin(), bottom.end(), top_last());
    bottom.insert(at + 1, loser);
  } else {
    Letter loser = top.back();
    top.pop_back();
    auto at = std::find(top.begin(), top.end(), bottom_last());
    top.insert(at + 1, loser);
  }
  return Permutation(alphabet_, std::move(top), std::move(bottom));
}

std::string Permutation::top_string() const {
  std::string s;
  for (Letter a : top_row_) s += (s.empty() ? "" : " ") + alphabet_->symbol(a);
  return s;
}

std::string Permutation::bottom_string() const {
  std::string s;
  for (Letter a : bottom_row_) s += (s.empty() ? "" : " ") + alphabet_->symbol(a);
  return s;
}

bool validate_permutation(const Permutation& p) { return p.is_irreducible(); }

namespace {

void require_irreducible(const Permutation& p) {
  if (!p.is_irreducible())
    throw Error(ErrorCode::reducible_permutation, "permutation " + p.str() + " is reducible");
}

}  // namespace

std::vector<Permutation> rauzy_class(const Permutation& p) {
  require_irreducible(p);
  std::set<Permutation> seen{p};
  std::deque<Permutation> queue{p};
  while (!queue.empty()) {
    Permutation q = std::move(queue.front());
    queue.pop_front();
    for (int type : {0, 1}) {
      Permutation next = q.rauzy_successor(type);
      if (seen.insert(next).second) queue.push_back(std::move(next));
    }
  }
  return {seen.begin(), seen.end()};
}

std::size_t singularity_count(const Permutation& p) {
  require_irreducible(p);
  // 1-based monodromy m: top position -> bottom position
  std::size_t d = p.size();
  std::vector<std::size_t> m(d + 2), minv(d + 2);
  for (std::size_t j = 1; j <= d; ++j) {
    m[j] = p.bottom_position(p.top_at(j - 1)) + 1;
    minv[m[j]] = j;
  }
  // sigma on {0..d}: glues the right endpoint of each top interval to the
  // matching endpoint along the bottom
  std::vector<std::size_t> sigma(d + 1);
  for (std::size_t j = 0; j <= d; ++j) {
    if (j == 0) {
      sigma[j] = minv[1] - 1;
    } else if (j == minv[d]) {
      sigma[j] = d;
    } else {
      sigma[j] = minv[m[j] + 1] - 1;
    }
  }
  std::vector<bool> visited(d + 1, false);
  std::size_t cycles = 0;
  for (std::size_t j = 0; j <= d; ++j) {
    if (visited[j]) continue;
    ++cycles;
    for (std::size_t k = j; !visited[k]; k = sigma[k]) visited[k] = true;
  }
  return cycles;
}

std::size_t genus(const Permutation& p) {
  std::size_t s = singularity_count(p);
  return (p.size() + 1 - s) / 2;
}

}  // namespace aiet
