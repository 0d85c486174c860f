#include "toepmax/pattern.hpp"

#include <algorithm>

#include "toepmax/errors.hpp"

namespace toepmax {

Pattern::Pattern(int n, std::vector<int> diagonals)
    : n_(n), diagonals_(std::move(diagonals)) {
  if (n < 2) throw InvalidInput("Pattern: order must be >= 2");
  if (diagonals_.empty()) throw InvalidInput("Pattern: no diagonals given");
  std::sort(diagonals_.begin(), diagonals_.end());
  for (std::size_t i = 0; i < diagonals_.size(); ++i) {
    const int d = diagonals_[i];
    if (d < 1 || d > n - 1)
      throw InvalidInput("Pattern: diagonal out of [1, n-1]");
    if (i > 0 && d == diagonals_[i - 1])
      throw InvalidInput("Pattern: duplicate diagonal");
  }
}

bool Pattern::contains(int d) const {
  if (d == 0) return true;
  return std::binary_search(diagonals_.begin(), diagonals_.end(), d);
}

std::string to_string(const PatternClass& c) {
  const auto kr = [&c] {
    return "(k=" + std::to_string(c.k) + ",r=" + std::to_string(c.r) + ")";
  };
  switch (c.form) {
    case Form::P1:
      return "P1" + kr();
    case Form::P2:
      return "P2" + kr();
    case Form::P3:
      return "P3(k=" + std::to_string(c.k) + ")";
    case Form::P2Prime:
      return "P2prime" + kr();
    case Form::P3Prime:
      return "P3prime" + kr();
    case Form::General:
      return "General";
  }
  return "General";
}

std::vector<int> class_diagonals(const PatternClass& c, int n) {
  std::vector<int> d;
  switch (c.form) {
    case Form::P1:
      for (int j = 1; j <= c.r; ++j) d.push_back(j * c.k);
      break;
    case Form::P2:
    case Form::P2Prime:
      for (int j = 1; j <= c.r - 2; ++j) d.push_back(j * c.k);
      d.push_back(c.r * c.k);
      break;
    case Form::P3:
      d = {c.k, n - c.k};
      break;
    case Form::P3Prime:
      d = {c.k, c.r};
      break;
    case Form::General:
      throw InvalidInput("class_diagonals: General has no diagonal set");
  }
  return d;
}

std::vector<PatternClass> classify(const Pattern& p) {
  const int n = p.order();
  const std::vector<int>& d = p.diagonals();
  const int s = static_cast<int>(d.size());
  std::vector<PatternClass> out;

  // P1: full arithmetic progression {k, 2k, ..., rk}.
  {
    const int k = d[0];
    bool ok = true;
    for (int i = 0; i < s; ++i)
      if (d[static_cast<std::size_t>(i)] != (i + 1) * k) {
        ok = false;
        break;
      }
    if (ok) out.push_back({Form::P1, k, s});
  }

  // P2 / P2': progression {k, ..., (r-2)k} plus the jump rk, with
  // n == (r+1)k for P2 and n >= (r+1)k for the relaxed form. For a
  // singleton the progression part is empty and the set is {2k}.
  {
    int k = 0, r = 0;
    bool ok = false;
    if (s == 1) {
      if (d[0] % 2 == 0) {
        k = d[0] / 2;
        r = 2;
        ok = true;
      }
    } else {
      k = d[0];
      ok = true;
      for (int i = 0; i + 1 < s; ++i)
        if (d[static_cast<std::size_t>(i)] != (i + 1) * k) {
          ok = false;
          break;
        }
      if (ok && d[static_cast<std::size_t>(s - 1)] != (s + 1) * k) ok = false;
      r = s + 1;
    }
    if (ok) {
      if (n == (r + 1) * k) out.push_back({Form::P2, k, r});
      if (n >= (r + 1) * k) out.push_back({Form::P2Prime, k, r});
    }
  }

  // P3: cycle {k, n-k} with k < n-k.
  if (s == 2 && d[1] == n - d[0] && d[0] < d[1])
    out.push_back({Form::P3, d[0], 0});

  // P3': any two diagonals {k, r} with n >= k + r.
  if (s == 2 && n >= d[0] + d[1]) out.push_back({Form::P3Prime, d[0], d[1]});

  if (out.empty()) out.push_back({Form::General, 0, 0});
  return out;
}

}  // namespace toepmax
