#pragma once

#include <string>
#include <vector>

namespace toepmax {

/**
 * The set of specified off-diagonals of an order-n partial symmetric
 * Toeplitz matrix. The main diagonal is always specified and is not part
 * of the set. Diagonals are kept sorted ascending, each in [1, n-1].
 */
class Pattern {
 public:
  // Validates: n >= 2, diagonals non-empty, sorted after normalization,
  // no duplicates, all in [1, n-1].
  Pattern(int n, std::vector<int> diagonals);

  int order() const { return n_; }
  const std::vector<int>& diagonals() const { return diagonals_; }

  // d in [0, n-1]; the main diagonal (d = 0) counts as specified.
  bool contains(int d) const;

  bool operator==(const Pattern& other) const = default;

 private:
  int n_ = 0;
  std::vector<int> diagonals_;
};

// The completable pattern families. P1 is an arithmetic progression
// {k, 2k, ..., rk}; P2 drops the (r-1)k term and pins n = (r+1)k;
// P3 is the two-diagonal cycle {k, n-k}; the primed forms relax the
// order constraint (P2': n >= (r+1)k, P3': {k, r} with n >= k+r).
enum class Form { P1, P2, P3, P2Prime, P3Prime, General };

struct PatternClass {
  Form form = Form::General;
  int k = 0;  // base diagonal (unused for General)
  int r = 0;  // progression parameter (P1/P2/P2'), second diagonal (P3'),
              // unused for P3/General

  bool operator==(const PatternClass& other) const = default;
};

// Wire names: "P1(k=..,r=..)", "P2(..)", "P3(k=..)", "P2prime(..)",
// "P3prime(..)", "General".
std::string to_string(const PatternClass& c);

// The diagonal set a tag describes, for reconstruction checks. General is
// rejected.
std::vector<int> class_diagonals(const PatternClass& c, int n);

// Returns every family tag whose defining equations the pattern satisfies
// exactly, in a fixed order (P1, P2, P2', P3, P3'); returns {General} iff
// none match.
std::vector<PatternClass> classify(const Pattern& p);

}  // namespace toepmax
