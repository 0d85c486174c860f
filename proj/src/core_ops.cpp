#include "toepmax/core_ops.hpp"

#include <algorithm>

#include "toepmax/errors.hpp"

namespace toepmax {

PartialToeplitz Block::to_partial(double t0) const {
  if (size < 2)
    throw InvalidInput("Block::to_partial: size-1 blocks have no pattern");
  return PartialToeplitz(Pattern(size, diagonals), t0, values);
}

namespace {

// The class tag must be one the instance actually classifies as.
void require_class(const PartialToeplitz& pt, const PatternClass& cls) {
  const auto tags = classify(pt.pattern());
  if (std::find(tags.begin(), tags.end(), cls) == tags.end())
    throw InvalidInput("pattern does not match the requested class: " +
                       to_string(cls));
}

}  // namespace

BlockDecomposition block_permutation(const PartialToeplitz& pt,
                                     const PatternClass& cls) {
  if (cls.form != Form::P1 && cls.form != Form::P2)
    throw InvalidInput("block_permutation: class must be P1 or P2");
  require_class(pt, cls);

  const int n = pt.order();
  const int k = cls.k;
  const int r = cls.r;
  const int p = (n - 1) / k;  // largest p with p*k <= n-1

  BlockDecomposition dec;
  dec.t0 = pt.t0();
  dec.permutation.reserve(static_cast<std::size_t>(n));

  // Residue classes c, c+k, c+2k, ... (0-based c in [0, k)). Classes with
  // c < n - p*k have p+1 members, the rest p.
  for (int c = 0; c < k; ++c) {
    const int size = c < n - p * k ? p + 1 : p;
    Block b;
    b.size = size;
    for (int q = 0; q < size; ++q) dec.permutation.push_back(c + q * k);

    // Members differ by multiples of k, so the block's diagonal j carries
    // the parent diagonal j*k.
    if (cls.form == Form::P1) {
      const int band = std::min(r, size - 1);
      for (int j = 1; j <= band; ++j) {
        b.diagonals.push_back(j);
        b.values.push_back(pt.value(j * k));
      }
    } else {  // P2: n == (r+1)k forces every block to size r+1
      for (int j = 1; j <= r - 2; ++j) {
        b.diagonals.push_back(j);
        b.values.push_back(pt.value(j * k));
      }
      b.diagonals.push_back(r);
      b.values.push_back(pt.value(r * k));
    }
    dec.blocks.push_back(std::move(b));
  }
  return dec;
}

namespace {

struct CliqueSearch {
  int n = 0;
  int size_cap = 0;
  long budget = 0;
  long nodes = 0;
  std::vector<std::vector<bool>> adj;
  std::vector<std::vector<int>> found;

  // Bron-Kerbosch without pivoting; candidates and excluded sets keep the
  // enumeration restricted to maximal cliques, in lexicographic order.
  // Branches reaching size_cap are emitted as maximal-within-cap.
  void expand(std::vector<int>& current, std::vector<int>& cand,
              std::vector<int>& excl) {
    if (++nodes > budget)
      throw BudgetExceeded("specified_cliques: node budget exceeded");
    if (static_cast<int>(current.size()) == size_cap) {
      found.push_back(current);
      return;
    }
    if (cand.empty() && excl.empty()) {
      found.push_back(current);
      return;
    }
    std::vector<int> cand_left = cand;
    std::vector<int> excl_now = excl;
    for (int v : cand) {
      std::vector<int> next_cand, next_excl;
      for (int u : cand_left)
        if (u != v && adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)])
          next_cand.push_back(u);
      for (int u : excl_now)
        if (adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)])
          next_excl.push_back(u);
      current.push_back(v);
      expand(current, next_cand, next_excl);
      current.pop_back();
      cand_left.erase(std::find(cand_left.begin(), cand_left.end(), v));
      excl_now.push_back(v);
    }
  }
};

}  // namespace

std::vector<std::vector<int>> specified_cliques(const Pattern& p,
                                                int size_cap,
                                                long node_budget) {
  if (size_cap < 1) throw InvalidInput("specified_cliques: size_cap >= 1");
  const int n = p.order();

  CliqueSearch search;
  search.n = n;
  search.size_cap = size_cap;
  search.budget = node_budget;
  search.adj.assign(static_cast<std::size_t>(n),
                    std::vector<bool>(static_cast<std::size_t>(n), false));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) search.adj[static_cast<std::size_t>(i)]
                            [static_cast<std::size_t>(j)] =
          p.contains(std::abs(i - j));

  std::vector<int> current, cand(static_cast<std::size_t>(n)), excl;
  for (int i = 0; i < n; ++i) cand[static_cast<std::size_t>(i)] = i;
  search.expand(current, cand, excl);

  // Capped branches may emit subsets of other results; keep only the
  // inclusion-maximal ones.
  auto& sets = search.found;
  for (auto& s : sets) std::sort(s.begin(), s.end());
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<std::vector<int>> out;
  for (const auto& s : sets) {
    bool dominated = false;
    for (const auto& t : sets) {
      if (&t == &s || t.size() <= s.size()) continue;
      if (std::includes(t.begin(), t.end(), s.begin(), s.end())) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(s);
  }
  return out;
}

}  // namespace toepmax
