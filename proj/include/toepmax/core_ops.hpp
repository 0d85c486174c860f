#pragma once

#include <optional>
#include <vector>

#include "toepmax/partial_toeplitz.hpp"
#include "toepmax/pattern.hpp"

namespace toepmax {

// One diagonal block of the residue-class permutation. Blocks of size 1
// carry no off-diagonals (they are just [t0]); larger blocks always have a
// non-empty sub-pattern.
struct Block {
  int size = 0;
  std::vector<int> diagonals;   // specified off-diagonals inside the block
  std::vector<double> values;   // aligned with diagonals

  // Materializes the block as its own instance; requires size >= 2.
  PartialToeplitz to_partial(double t0) const;
};

struct BlockDecomposition {
  // permutation[p] = original index of permuted position p (0-based), so
  // permuted(i, j) = original(permutation[i], permutation[j]).
  std::vector<int> permutation;
  std::vector<Block> blocks;  // ordered by residue class
  double t0 = 0.0;
};

// Groups indices by residue mod k (ordered within a class by quotient) so
// that the specified positions of a P1 or P2 instance become block
// diagonal: with p = floor((n-1)/k) there are (n - p*k) blocks of size
// p+1 and (k - (n - p*k)) of size p. P1 blocks carry the banded pattern
// {1, ..., min(r, size-1)}; P2 blocks (all of size r+1) carry
// {1, ..., r-2, r}. Data is rescaled: block diagonal j holds t_{j*k}.
// The class tag must match the instance (checked) and be P1 or P2.
BlockDecomposition block_permutation(const PartialToeplitz& pt,
                                     const PatternClass& cls);

// All maximal index sets S (0-based, |S| <= size_cap) whose pairwise
// differences lie in the pattern or are 0, i.e. the maximal cliques of the
// compatibility graph, truncated at size_cap. Deterministic lexicographic
// order. Throws BudgetExceeded past node_budget recursion nodes.
std::vector<std::vector<int>> specified_cliques(const Pattern& p,
                                                int size_cap,
                                                long node_budget = 1000000);

}  // namespace toepmax
