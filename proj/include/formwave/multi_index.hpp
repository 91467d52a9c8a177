#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace formwave {

std::size_t binomial(int n, int k) noexcept;

/// Sign of the permutation sorting `seq`; 0 when an entry repeats.
int permutation_sign(std::span<const int> seq) noexcept;

/// Increasing multi-indices I of length `rank` over axes {0..dim-1}, lexicographic.
/// Ranks outside [0, dim] give an empty basis (the trivial form space).
class MultiIndexBasis {
 public:
  MultiIndexBasis(int dim, int rank);

  int dim() const noexcept { return dim_; }
  int rank() const noexcept { return rank_; }
  std::size_t size() const noexcept { return masks_.size(); }

  std::vector<int> index(std::size_t pos) const;
  std::uint32_t mask(std::size_t pos) const noexcept { return masks_[pos]; }
  /// Position of the strictly increasing index, or size() if not a basis element.
  std::size_t position(std::span<const int> index) const noexcept;
  std::size_t position_of_mask(std::uint32_t mask) const noexcept;

 private:
  int dim_;
  int rank_;
  std::vector<std::uint32_t> masks_;
  std::vector<std::uint32_t> lookup_;
};

/// One term of dx^axis ^ dx^I = sign * dx^K between a rank-q and a rank-(q+1) basis.
struct CovectorTerm {
  std::uint32_t low;   // position of I in the rank-q basis
  std::uint32_t high;  // position of K in the rank-(q+1) basis
  std::int8_t axis;
  std::int8_t sign;
};

/// All covector wedge terms for rank q in dimension N, ordered by `high` then axis.
const std::vector<CovectorTerm>& covector_terms(int dim, int rank);

/// One term of dx^I ^ dx^J = sign * dx^K.
struct WedgeTerm {
  std::uint32_t left;
  std::uint32_t right;
  std::uint32_t out;
  std::int8_t sign;
};

std::vector<WedgeTerm> wedge_terms(int dim, int left_rank, int right_rank);

/// Hodge star on basis forms: *dx^I = sign[I] dx^{complement(I)}.
struct StarTable {
  std::vector<std::uint32_t> target;
  std::vector<std::int8_t> sign;
};

const StarTable& star_table(int dim, int rank);

}  // namespace formwave
