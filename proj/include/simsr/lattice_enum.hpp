#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "simsr/error.hpp"
#include "simsr/lattice.hpp"

namespace simsr {

namespace detail {

struct LevelKey {
  std::size_t height = 0;  // longest chain from the bottom
  std::size_t down = 0;
  std::size_t up = 0;
  friend auto operator<=>(const LevelKey&, const LevelKey&) = default;
};

/// Relabels L (bottom = 0, top = n-1, inner elements sorted by level key) and
/// returns the lexicographically least join table among all relabellings that
/// permute elements within equal level keys.
inline std::vector<Elem> canonical_join_table(const FiniteLattice& L) {
  const std::size_t n = L.size();
  std::vector<LevelKey> key(n);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) {
      if (L.leq(y, x)) ++key[x].down;
      if (L.leq(x, y)) ++key[x].up;
    }
  // heights by increasing down-set size (a topological order)
  std::vector<Elem> topo(n);
  for (Elem i = 0; i < n; ++i) topo[i] = i;
  std::sort(topo.begin(), topo.end(), [&](Elem x, Elem y) { return key[x].down < key[y].down; });
  for (Elem x : topo)
    for (Elem y = 0; y < n; ++y)
      if (y != x && L.leq(y, x)) key[x].height = std::max(key[x].height, key[y].height + 1);

  std::vector<Elem> order(n);
  for (Elem i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](Elem x, Elem y) {
    if (key[x] != key[y]) return key[x] < key[y];
    return x < y;
  });
  // blocks of equal keys
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && key[order[j]] == key[order[i]]) ++j;
    blocks.emplace_back(i, j);
    i = j;
  }

  std::vector<Elem> best;
  std::vector<Elem> label(n);
  std::vector<Elem> table(n * n);
  auto evaluate = [&]() {
    for (std::size_t pos = 0; pos < n; ++pos) label[order[pos]] = static_cast<Elem>(pos);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        table[i * n + j] = label[L.join(order[i], order[j])];
    if (best.empty() || table < best) best = table;
  };
  auto permute = [&](auto&& self, std::size_t b) -> void {
    if (b == blocks.size()) {
      evaluate();
      return;
    }
    auto [lo, hi] = blocks[b];
    std::sort(order.begin() + static_cast<long>(lo), order.begin() + static_cast<long>(hi));
    do {
      self(self, b + 1);
    } while (std::next_permutation(order.begin() + static_cast<long>(lo),
                                   order.begin() + static_cast<long>(hi)));
  };
  permute(permute, 0);
  return best;
}

}  // namespace detail

/// The canonical representative of L's isomorphism class (bottom = 0).
inline FiniteLattice canonical_form(const FiniteLattice& L) {
  return FiniteLattice::validate(L.size(), detail::canonical_join_table(L), 0, L.name());
}

struct EnumerateOptions {
  std::size_t limit = 7;
};

/// One lattice per isomorphism class for every size 1..max_n, sorted by size
/// and then canonical join table. Inner elements (neither bottom nor top) are
/// enumerated as posets labelled along a linear extension; posets in which
/// every pair has a least upper bound are kept.
inline std::vector<FiniteLattice> enumerate_lattices(std::size_t max_n,
                                                     EnumerateOptions opts = {}) {
  if (max_n > opts.limit)
    throw Error(ErrorCode::LimitExceeded, "enumerate_lattices(" + std::to_string(max_n) +
                                              ") exceeds limit " + std::to_string(opts.limit));
  std::vector<FiniteLattice> out;
  for (std::size_t n = 1; n <= max_n; ++n) {
    if (n <= 2) {
      out.push_back(fixtures::chain(n, n == 1 ? "L1" : "L2"));
      continue;
    }
    const std::size_t k = n - 2;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
    std::set<std::vector<Elem>> seen;
    const std::uint64_t total = std::uint64_t{1} << pairs.size();
    std::vector<char> lt(k * k);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      std::fill(lt.begin(), lt.end(), 0);
      for (std::size_t p = 0; p < pairs.size(); ++p)
        if ((mask >> p) & 1u) lt[pairs[p].first * k + pairs[p].second] = 1;
      bool transitive = true;
      for (std::size_t i = 0; i < k && transitive; ++i)
        for (std::size_t j = i + 1; j < k && transitive; ++j)
          if (lt[i * k + j])
            for (std::size_t l = j + 1; l < k; ++l)
              if (lt[j * k + l] && !lt[i * k + l]) {
                transitive = false;
                break;
              }
      if (!transitive) continue;
      // element 0 = bottom, 1..k = inner, k+1 = top
      std::vector<std::pair<Elem, Elem>> less;
      for (Elem i = 1; i <= k; ++i) {
        less.emplace_back(0, i);
        less.emplace_back(i, static_cast<Elem>(k + 1));
      }
      if (k == 0) less.emplace_back(0, 1);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
          if (lt[i * k + j]) less.emplace_back(static_cast<Elem>(i + 1), static_cast<Elem>(j + 1));
      try {
        auto L = lattice_from_order(n, less);
        seen.insert(detail::canonical_join_table(L));
      } catch (const Error&) {
        // some pair lacks a least upper bound
      }
    }
    std::size_t idx = 0;
    for (const auto& t : seen) {
      out.push_back(FiniteLattice::validate(n, t, 0,
                                            "L" + std::to_string(n) + "_" + std::to_string(idx)));
      ++idx;
    }
  }
  return out;
}

}  // namespace simsr
