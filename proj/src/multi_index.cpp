#include "formwave/multi_index.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace formwave {

std::size_t binomial(int n, int k) noexcept {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

int permutation_sign(std::span<const int> seq) noexcept {
  int sign = 1;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (std::size_t j = i + 1; j < seq.size(); ++j) {
      if (seq[i] == seq[j]) return 0;
      if (seq[i] > seq[j]) sign = -sign;
    }
  }
  return sign;
}

MultiIndexBasis::MultiIndexBasis(int dim, int rank) : dim_(dim), rank_(rank) {
  lookup_.assign(std::size_t{1} << dim, 0);
  if (rank >= 0 && rank <= dim) {
    // Lexicographic order on increasing index lists.
    std::vector<int> idx(rank);
    for (int j = 0; j < rank; ++j) idx[j] = j;
    while (true) {
      std::uint32_t m = 0;
      for (int j : idx) m |= 1u << j;
      masks_.push_back(m);
      int j = rank - 1;
      while (j >= 0 && idx[j] == dim - rank + j) --j;
      if (j < 0) break;
      ++idx[j];
      for (int k = j + 1; k < rank; ++k) idx[k] = idx[k - 1] + 1;
    }
  }
  std::fill(lookup_.begin(), lookup_.end(), static_cast<std::uint32_t>(masks_.size()));
  for (std::size_t p = 0; p < masks_.size(); ++p) lookup_[masks_[p]] = static_cast<std::uint32_t>(p);
}

std::vector<int> MultiIndexBasis::index(std::size_t pos) const {
  std::vector<int> out;
  for (int a = 0; a < dim_; ++a)
    if (masks_[pos] & (1u << a)) out.push_back(a);
  return out;
}

std::size_t MultiIndexBasis::position(std::span<const int> index) const noexcept {
  if (static_cast<int>(index.size()) != rank_) return size();
  std::uint32_t m = 0;
  for (std::size_t j = 0; j < index.size(); ++j) {
    if (index[j] < 0 || index[j] >= dim_) return size();
    if (j > 0 && index[j] <= index[j - 1]) return size();
    m |= 1u << index[j];
  }
  return position_of_mask(m);
}

std::size_t MultiIndexBasis::position_of_mask(std::uint32_t mask) const noexcept {
  if (mask >= lookup_.size() || std::popcount(mask) != rank_) return size();
  return lookup_[mask];
}

namespace {

template <class T, class Build>
const T& cached(int dim, int rank, Build build) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<T>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dim, rank}];
  if (!slot) slot = std::make_unique<T>(build());
  return *slot;
}

}  // namespace

const std::vector<CovectorTerm>& covector_terms(int dim, int rank) {
  return cached<std::vector<CovectorTerm>>(dim, rank, [&] {
    std::vector<CovectorTerm> terms;
    if (rank < 0 || rank >= dim) return terms;
    const MultiIndexBasis low(dim, rank);
    const MultiIndexBasis high(dim, rank + 1);
    for (std::size_t k = 0; k < high.size(); ++k) {
      const std::uint32_t mk = high.mask(k);
      for (int axis = 0; axis < dim; ++axis) {
        if (!(mk & (1u << axis))) continue;
        const std::uint32_t mi = mk & ~(1u << axis);
        const int below = std::popcount(mi & ((1u << axis) - 1u));
        terms.push_back({static_cast<std::uint32_t>(low.position_of_mask(mi)),
                         static_cast<std::uint32_t>(k), static_cast<std::int8_t>(axis),
                         static_cast<std::int8_t>(below % 2 ? -1 : 1)});
      }
    }
    return terms;
  });
}

std::vector<WedgeTerm> wedge_terms(int dim, int left_rank, int right_rank) {
  std::vector<WedgeTerm> terms;
  const MultiIndexBasis left(dim, left_rank);
  const MultiIndexBasis right(dim, right_rank);
  const MultiIndexBasis out(dim, left_rank + right_rank);
  if (out.size() == 0) return terms;
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (std::size_t j = 0; j < right.size(); ++j) {
      if (left.mask(i) & right.mask(j)) continue;
      std::vector<int> seq = left.index(i);
      const std::vector<int> rj = right.index(j);
      seq.insert(seq.end(), rj.begin(), rj.end());
      terms.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                       static_cast<std::uint32_t>(out.position_of_mask(left.mask(i) | right.mask(j))),
                       static_cast<std::int8_t>(permutation_sign(seq))});
    }
  }
  return terms;
}

const StarTable& star_table(int dim, int rank) {
  return cached<StarTable>(dim, rank, [&] {
    StarTable table;
    const MultiIndexBasis from(dim, rank);
    const MultiIndexBasis to(dim, dim - rank);
    const std::uint32_t full = (1u << dim) - 1u;
    for (std::size_t p = 0; p < from.size(); ++p) {
      const std::uint32_t comp = full & ~from.mask(p);
      std::vector<int> seq = from.index(p);
      const std::size_t target = to.position_of_mask(comp);
      const std::vector<int> rest = to.index(target);
      seq.insert(seq.end(), rest.begin(), rest.end());
      table.target.push_back(static_cast<std::uint32_t>(target));
      table.sign.push_back(static_cast<std::int8_t>(permutation_sign(seq)));
    }
    return table;
  });
}

}  // namespace formwave
