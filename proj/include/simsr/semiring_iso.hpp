#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "simsr/bitset.hpp"
#include "simsr/semiring.hpp"

namespace simsr {

namespace detail {

inline std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h * 0xff51afd7ed558ccdull;
}

/// Per-element isomorphism invariants, refined twice by the multiset of
/// neighbour invariants under +, left and right multiplication.
inline std::vector<std::uint64_t> element_invariants(const FiniteSemiring& R) {
  const Elem n = static_cast<Elem>(R.size());
  std::vector<std::uint64_t> inv(n);
  for (Elem x = 0; x < n; ++x) {
    std::uint64_t c[10] = {};
    for (Elem y = 0; y < n; ++y) {
      c[0] += R.add(x, y) == x;
      c[1] += R.add(x, y) == y;
      c[2] += R.mul(x, y) == R.zero();
      c[3] += R.mul(y, x) == R.zero();
      c[4] += R.mul(x, y) == x;
      c[5] += R.mul(y, x) == x;
      c[6] += R.mul(x, y) == y;
      c[7] += R.mul(y, x) == y;
    }
    c[8] = (R.mul(x, x) == x) + 2u * (R.add(x, x) == x) + 4u * (x == R.zero());
    // length of the multiplicative orbit x, x^2, ...
    Bitset seen(n);
    Elem p = x;
    while (!seen.test(p)) {
      seen.set(p);
      ++c[9];
      p = R.mul(p, x);
    }
    std::uint64_t h = 0;
    for (auto v : c) h = mix(h, v);
    inv[x] = h;
  }
  for (int round = 0; round < 2; ++round) {
    std::vector<std::uint64_t> next(n);
    std::vector<std::uint64_t> nb;
    for (Elem x = 0; x < n; ++x) {
      nb.clear();
      for (Elem y = 0; y < n; ++y)
        nb.push_back(mix(mix(mix(inv[y], inv[R.add(x, y)]), inv[R.mul(x, y)]), inv[R.mul(y, x)]));
      std::sort(nb.begin(), nb.end());
      std::uint64_t h = inv[x];
      for (auto v : nb) h = mix(h, v);
      next[x] = h;
    }
    inv = std::move(next);
  }
  return inv;
}

}  // namespace detail

/// Searches for a bijection R1 -> R2 preserving + and *. Generators of R1 are
/// chosen greedily from the rarest invariant classes; once their images are
/// fixed the map extends uniquely over everything they generate, so the
/// backtracking only branches on generators.
inline std::optional<std::vector<Elem>> semiring_iso(const FiniteSemiring& a,
                                                     const FiniteSemiring& b) {
  const Elem n = static_cast<Elem>(a.size());
  if (b.size() != n) return std::nullopt;
  const auto ia = detail::element_invariants(a);
  const auto ib = detail::element_invariants(b);
  {
    auto sa = ia, sb = ib;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }
  auto class_size = [&](std::uint64_t v) {
    return static_cast<std::size_t>(std::count(ia.begin(), ia.end(), v));
  };
  std::vector<Elem> order(n);
  for (Elem i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](Elem x, Elem y) { return class_size(ia[x]) < class_size(ia[y]); });
  std::vector<Elem> gens;
  {
    Bitset gen(n);
    Bitset closed = subsemiring_closure(a, gen);
    for (Elem x : order) {
      if (closed.test(x)) continue;
      gens.push_back(x);
      gen.set(x);
      closed = subsemiring_closure(a, gen);
    }
  }

  constexpr Elem kNone = static_cast<Elem>(-1);
  struct State {
    std::vector<Elem> map;
    std::vector<char> used;
    std::vector<Elem> known;
  };

  // Assigns x -> img and propagates through all sums and products of known elements.
  auto extend = [&](State& s, Elem x, Elem img) -> bool {
    std::vector<std::pair<Elem, Elem>> work{{x, img}};
    while (!work.empty()) {
      auto [u, t] = work.back();
      work.pop_back();
      if (s.map[u] != kNone) {
        if (s.map[u] != t) return false;
        continue;
      }
      if (s.used[t] || ia[u] != ib[t]) return false;
      s.map[u] = t;
      s.used[t] = 1;
      s.known.push_back(u);
      for (Elem v : s.known) {
        const Elem tv = s.map[v];
        work.emplace_back(a.add(u, v), b.add(t, tv));
        work.emplace_back(a.mul(u, v), b.mul(t, tv));
        work.emplace_back(a.mul(v, u), b.mul(tv, t));
      }
    }
    return true;
  };

  State init{std::vector<Elem>(n, kNone), std::vector<char>(n, 0), {}};
  if (!extend(init, a.zero(), b.zero())) return std::nullopt;

  std::optional<std::vector<Elem>> result;
  auto search = [&](auto&& self, const State& s, std::size_t depth) -> bool {
    if (depth == gens.size()) {
      if (std::find(s.map.begin(), s.map.end(), kNone) != s.map.end()) return false;
      if (!is_homomorphism(a, b, s.map)) return false;
      result = s.map;
      return true;
    }
    const Elem g = gens[depth];
    if (s.map[g] != kNone) return self(self, s, depth + 1);
    for (Elem c = 0; c < n; ++c) {
      if (s.used[c] || ib[c] != ia[g]) continue;
      State t = s;
      if (extend(t, g, c) && self(self, t, depth + 1)) return true;
    }
    return false;
  };
  search(search, init, 0);
  return result;
}

/// A bijection reversing multiplication: phi(xy) = phi(y) phi(x).
inline std::optional<std::vector<Elem>> semiring_anti_iso(const FiniteSemiring& a,
                                                          const FiniteSemiring& b) {
  return semiring_iso(a, opposite(b));
}

}  // namespace simsr
