#pragma once

#include <vector>

#include "toepmax/pattern.hpp"

namespace toepmax {

/**
 * A partial symmetric Toeplitz matrix: diagonal value t0, plus one value
 * per specified off-diagonal. t0 > 0 is required by the PD-completion
 * solvers, not by construction (classification works for any t0).
 */
class PartialToeplitz {
 public:
  // values aligned with pattern.diagonals(); everything must be finite.
  PartialToeplitz(Pattern pattern, double t0, std::vector<double> values);

  const Pattern& pattern() const { return pattern_; }
  int order() const { return pattern_.order(); }
  double t0() const { return t0_; }
  const std::vector<double>& values() const { return values_; }

  // Value on a specified off-diagonal d; throws if d is free.
  double value(int d) const;

  // Same data with the main diagonal shifted to t0 + alpha.
  PartialToeplitz shifted(double alpha) const;

 private:
  Pattern pattern_;
  double t0_ = 0.0;
  std::vector<double> values_;
};

}  // namespace toepmax
