#include "toepmax/partial_toeplitz.hpp"

#include <algorithm>
#include <cmath>

#include "toepmax/errors.hpp"

namespace toepmax {

PartialToeplitz::PartialToeplitz(Pattern pattern, double t0,
                                 std::vector<double> values)
    : pattern_(std::move(pattern)), t0_(t0), values_(std::move(values)) {
  if (values_.size() != pattern_.diagonals().size())
    throw InvalidInput("PartialToeplitz: one value per specified diagonal");
  if (!std::isfinite(t0_))
    throw InvalidInput("PartialToeplitz: t0 must be finite");
  for (double v : values_)
    if (!std::isfinite(v))
      throw InvalidInput("PartialToeplitz: data must be finite");
}

double PartialToeplitz::value(int d) const {
  const auto& diags = pattern_.diagonals();
  const auto it = std::lower_bound(diags.begin(), diags.end(), d);
  if (it == diags.end() || *it != d)
    throw InvalidInput("PartialToeplitz: diagonal is not specified");
  return values_[static_cast<std::size_t>(it - diags.begin())];
}

PartialToeplitz PartialToeplitz::shifted(double alpha) const {
  return PartialToeplitz(pattern_, t0_ + alpha, values_);
}

}  // namespace toepmax
