#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "simsr/bitset.hpp"
#include "simsr/error.hpp"
#include "simsr/partition.hpp"

namespace simsr {

/// A finite idempotent commutative monoid (M, +) read as a lattice: x <= y iff
/// x + y = y. Elements are the indices 0..n-1. The zero is usually index 0 but
/// dual lattices keep the original numbering, so it may be any index.
class FiniteLattice {
 public:
  FiniteLattice() = default;

  /// Checks the monoid axioms exhaustively and derives order, meet and top.
  /// `join` is row-major n*n.
  static FiniteLattice validate(std::size_t n, std::vector<Elem> join, Elem zero,
                                std::string name = {}) {
    if (n == 0) throw Error(ErrorCode::BadTable, "empty element set");
    if (join.size() != n * n)
      throw Error(ErrorCode::BadTable, "join table has " + std::to_string(join.size()) +
                                           " entries, expected " + std::to_string(n * n));
    for (std::size_t i = 0; i < join.size(); ++i)
      if (join[i] >= n)
        throw Error(ErrorCode::BadTable, "entry (" + std::to_string(i / n) + "," +
                                             std::to_string(i % n) + ") out of range");
    if (zero >= n) throw Error(ErrorCode::BadZero, "zero index out of range");

    FiniteLattice L;
    L.n_ = n;
    L.join_ = std::move(join);
    L.zero_ = zero;
    L.name_ = std::move(name);

    for (Elem x = 0; x < n; ++x)
      if (L.join(zero, x) != x)
        throw Error(ErrorCode::BadZero, "join(" + std::to_string(zero) + "," +
                                            std::to_string(x) + ") != " + std::to_string(x));
    for (Elem x = 0; x < n; ++x)
      if (L.join(x, x) != x)
        throw Error(ErrorCode::NotIdempotent, "join(" + std::to_string(x) + "," +
                                                  std::to_string(x) + ") != " + std::to_string(x));
    for (Elem x = 0; x < n; ++x)
      for (Elem y = x + 1; y < n; ++y)
        if (L.join(x, y) != L.join(y, x))
          throw Error(ErrorCode::NotCommutative,
                      "witness (" + std::to_string(x) + "," + std::to_string(y) + ")");
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y)
        for (Elem z = 0; z < n; ++z)
          if (L.join(L.join(x, y), z) != L.join(x, L.join(y, z)))
            throw Error(ErrorCode::NotAssociative, "witness (" + std::to_string(x) + "," +
                                                       std::to_string(y) + "," +
                                                       std::to_string(z) + ")");
    L.derive();
    return L;
  }

  /// Convenience overload taking the table as rows.
  static FiniteLattice validate(const std::vector<std::vector<Elem>>& rows, Elem zero,
                                std::string name = {}) {
    const std::size_t n = rows.size();
    std::vector<Elem> flat;
    flat.reserve(n * n);
    for (const auto& r : rows) {
      if (r.size() != n) throw Error(ErrorCode::BadTable, "join table is not square");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return validate(n, std::move(flat), zero, std::move(name));
  }

  std::size_t size() const noexcept { return n_; }
  Elem zero() const noexcept { return zero_; }
  Elem top() const noexcept { return top_; }
  const std::string& name() const noexcept { return name_; }
  void set_name(std::string s) { name_ = std::move(s); }

  Elem join(Elem x, Elem y) const { return join_[x * n_ + y]; }
  Elem meet(Elem x, Elem y) const { return meet_[x * n_ + y]; }
  bool leq(Elem x, Elem y) const { return join(x, y) == y; }

  const std::vector<Elem>& join_table() const noexcept { return join_; }
  const std::vector<Elem>& meet_table() const noexcept { return meet_; }

  /// Join over a range; the empty join is zero.
  template <class Range>
  Elem join_all(const Range& xs) const {
    Elem acc = zero_;
    for (Elem x : xs) acc = join(acc, x);
    return acc;
  }

  /// Meet over a range; the empty meet is top.
  template <class Range>
  Elem meet_all(const Range& xs) const {
    Elem acc = top_;
    for (Elem x : xs) acc = meet(acc, x);
    return acc;
  }

  friend bool operator==(const FiniteLattice& a, const FiniteLattice& b) {
    return a.n_ == b.n_ && a.zero_ == b.zero_ && a.join_ == b.join_;
  }

 private:
  void derive() {
    top_ = zero_;
    for (Elem x = 0; x < n_; ++x) top_ = join(top_, x);
    // x ^ y = sum of all common lower bounds
    meet_.assign(n_ * n_, zero_);
    for (Elem x = 0; x < n_; ++x)
      for (Elem y = 0; y < n_; ++y) {
        Elem acc = zero_;
        for (Elem z = 0; z < n_; ++z)
          if (leq(z, x) && leq(z, y)) acc = join(acc, z);
        meet_[x * n_ + y] = acc;
      }
  }

  std::size_t n_ = 0;
  std::vector<Elem> join_;
  std::vector<Elem> meet_;
  Elem zero_ = 0;
  Elem top_ = 0;
  std::string name_;
};

inline FiniteLattice validate_lattice(const std::vector<std::vector<Elem>>& rows, Elem zero,
                                      std::string name = {}) {
  return FiniteLattice::validate(rows, zero, std::move(name));
}

inline Elem meet(const FiniteLattice& L, Elem x, Elem y) { return L.meet(x, y); }

/// The order-reversed lattice on the same indices: its join is L's meet and its
/// zero is L's top.
inline FiniteLattice dual(const FiniteLattice& L) {
  std::string name = L.name().empty() ? std::string{} : "dual(" + L.name() + ")";
  return FiniteLattice::validate(L.size(), L.meet_table(), L.top(), std::move(name));
}

/// Builds a lattice from a strict order given by covering (or any generating)
/// pairs lo < hi. The element 0 must be the least element.
inline FiniteLattice lattice_from_order(std::size_t n,
                                        const std::vector<std::pair<Elem, Elem>>& less,
                                        std::string name = {}) {
  std::vector<char> le(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) le[i * n + i] = 1;
  for (auto [a, b] : less) {
    if (a >= n || b >= n) throw Error(ErrorCode::BadTable, "order pair out of range");
    le[a * n + b] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (le[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (le[k * n + j]) le[i * n + j] = 1;
  std::vector<Elem> join(n * n);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) {
      std::optional<Elem> least;
      for (Elem u = 0; u < n; ++u) {
        if (!le[x * n + u] || !le[y * n + u]) continue;
        bool below_all = true;
        for (Elem v = 0; v < n && below_all; ++v)
          if (le[x * n + v] && le[y * n + v] && !le[u * n + v]) below_all = false;
        if (below_all) least = u;
      }
      if (!least)
        throw Error(ErrorCode::BadTable, "no least upper bound for (" + std::to_string(x) +
                                             "," + std::to_string(y) + ")");
      join[x * n + y] = *least;
    }
  return FiniteLattice::validate(n, std::move(join), 0, std::move(name));
}

namespace fixtures {

inline FiniteLattice chain(std::size_t n, std::string name = {}) {
  std::vector<Elem> join(n * n);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) join[x * n + y] = std::max(x, y);
  if (name.empty()) name = n == 2 ? "L2" : "CHAIN" + std::to_string(n);
  return FiniteLattice::validate(n, std::move(join), 0, std::move(name));
}

inline FiniteLattice l2() { return chain(2, "L2"); }

// 0 < a,b < 1 with elements 0,a=1,b=2,1=3
inline FiniteLattice diamond() {
  return lattice_from_order(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}, "DIAMOND");
}

// three atoms 1,2,3 under top 4
inline FiniteLattice m3() {
  return lattice_from_order(5, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}}, "M3");
}

// pentagon: 0 < 1 < 2 < 4 and 0 < 3 < 4
inline FiniteLattice n5() {
  return lattice_from_order(5, {{0, 1}, {1, 2}, {2, 4}, {0, 3}, {3, 4}}, "N5");
}

// diamond stacked above a 2-chain: 0 < 1 < 2,3 < 4
inline FiniteLattice lat50a() {
  return lattice_from_order(5, {{0, 1}, {1, 2}, {1, 3}, {2, 4}, {3, 4}}, "LAT50A");
}

// diamond below a 2-chain: 0 < 1,2 < 3 < 4
inline FiniteLattice lat50b() {
  return lattice_from_order(5, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}}, "LAT50B");
}

}  // namespace fixtures

/// Witness of an isomorphism source -> target.
struct LatticeIso {
  FiniteLattice source;
  FiniteLattice target;
  std::vector<Elem> map;

  bool verify() const {
    const std::size_t n = source.size();
    if (target.size() != n || map.size() != n) return false;
    std::vector<char> hit(n, 0);
    for (Elem m : map) {
      if (m >= n || hit[m]) return false;
      hit[m] = 1;
    }
    if (map[source.zero()] != target.zero()) return false;
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y)
        if (map[source.join(x, y)] != target.join(map[x], map[y])) return false;
    return true;
  }
};

namespace detail {

struct ElemProfile {
  std::size_t down = 0;
  std::size_t up = 0;
  std::size_t lower_covers = 0;
  std::size_t upper_covers = 0;
  friend auto operator<=>(const ElemProfile&, const ElemProfile&) = default;
};

inline std::vector<ElemProfile> profiles(const FiniteLattice& L) {
  const std::size_t n = L.size();
  std::vector<ElemProfile> out(n);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) {
      if (L.leq(y, x)) ++out[x].down;
      if (L.leq(x, y)) ++out[x].up;
    }
  // covers: y < x with nothing strictly between
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) {
      if (x == y || !L.leq(y, x)) continue;
      bool cover = true;
      for (Elem z = 0; z < n && cover; ++z)
        if (z != x && z != y && L.leq(y, z) && L.leq(z, x)) cover = false;
      if (cover) {
        ++out[x].lower_covers;
        ++out[y].upper_covers;
      }
    }
  return out;
}

}  // namespace detail

/// Backtracking search for an order isomorphism, pruned by down-set, up-set and
/// cover-count profiles. An order isomorphism between lattices preserves joins.
inline std::optional<LatticeIso> lattice_iso(const FiniteLattice& a, const FiniteLattice& b) {
  const std::size_t n = a.size();
  if (b.size() != n) return std::nullopt;
  auto pa = detail::profiles(a);
  auto pb = detail::profiles(b);
  {
    auto sa = pa, sb = pb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }
  // assign in order of increasing down-set size so comparable pairs are checked early
  std::vector<Elem> order(n);
  for (Elem i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](Elem x, Elem y) { return pa[x].down < pa[y].down; });

  std::vector<Elem> map(n, 0);
  std::vector<char> used(n, 0);
  std::vector<char> assigned(n, 0);

  auto consistent = [&](Elem x, Elem img) {
    for (Elem y = 0; y < n; ++y) {
      if (!assigned[y]) continue;
      if (a.leq(x, y) != b.leq(img, map[y])) return false;
      if (a.leq(y, x) != b.leq(map[y], img)) return false;
    }
    return true;
  };

  auto search = [&](auto&& self, std::size_t depth) -> bool {
    if (depth == n) return true;
    Elem x = order[depth];
    for (Elem c = 0; c < n; ++c) {
      if (used[c] || pb[c] != pa[x] || !consistent(x, c)) continue;
      map[x] = c;
      used[c] = assigned[x] = 1;
      if (self(self, depth + 1)) return true;
      used[c] = assigned[x] = 0;
    }
    return false;
  };
  if (!search(search, 0)) return std::nullopt;
  LatticeIso iso{a, b, map};
  return iso;
}

/// M* = Hom(M, L2) under pointwise max, with the bijection a -> e_a where
/// e_a(x) = 0 iff x <= a.
struct DualHoms {
  FiniteLattice lattice;                 // M*, elements numbered as in `homs`
  std::vector<std::vector<Elem>> homs;   // each a 0/1 image array, sorted lexicographically
  std::vector<Elem> e_index;             // e_index[a] = position of e_a in homs
};

/// Enumerates all zero- and join-preserving maps M -> {0,1} by brute force.
inline DualHoms hom_to_L2(const FiniteLattice& L, std::size_t max_n = 24) {
  const std::size_t n = L.size();
  if (n > max_n)
    throw Error(ErrorCode::LimitExceeded, "hom_to_L2 brute force limited to " +
                                              std::to_string(max_n) + " elements");
  DualHoms out;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    if ((mask >> L.zero()) & 1u) continue;
    bool ok = true;
    for (Elem x = 0; x < n && ok; ++x)
      for (Elem y = x + 1; y < n && ok; ++y) {
        auto fx = (mask >> x) & 1u, fy = (mask >> y) & 1u;
        if (((mask >> L.join(x, y)) & 1u) != (fx | fy)) ok = false;
      }
    if (!ok) continue;
    std::vector<Elem> img(n);
    for (Elem x = 0; x < n; ++x) img[x] = static_cast<Elem>((mask >> x) & 1u);
    out.homs.push_back(std::move(img));
  }
  std::sort(out.homs.begin(), out.homs.end());
  const std::size_t m = out.homs.size();
  auto index_of = [&](const std::vector<Elem>& h) {
    auto it = std::lower_bound(out.homs.begin(), out.homs.end(), h);
    return static_cast<Elem>(it - out.homs.begin());
  };
  std::vector<Elem> join(m * m);
  for (Elem i = 0; i < m; ++i)
    for (Elem j = 0; j < m; ++j) {
      std::vector<Elem> h(n);
      for (Elem x = 0; x < n; ++x) h[x] = std::max(out.homs[i][x], out.homs[j][x]);
      join[i * m + j] = index_of(h);
    }
  out.lattice = FiniteLattice::validate(m, std::move(join), 0,
                                        L.name().empty() ? "" : "hom(" + L.name() + ",L2)");
  out.e_index.resize(n);
  for (Elem a = 0; a < n; ++a) {
    std::vector<Elem> e(n);
    for (Elem x = 0; x < n; ++x) e[x] = L.leq(x, a) ? 0 : 1;
    auto it = std::lower_bound(out.homs.begin(), out.homs.end(), e);
    if (it == out.homs.end() || *it != e)
      throw Error(ErrorCode::BadTable, "e_a missing from Hom(M,L2)");
    out.e_index[a] = static_cast<Elem>(it - out.homs.begin());
  }
  return out;
}

inline bool is_distributive(const FiniteLattice& L) {
  const std::size_t n = L.size();
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y)
      for (Elem z = 0; z < n; ++z)
        if (L.meet(x, L.join(y, z)) != L.join(L.meet(x, y), L.meet(x, z))) return false;
  return true;
}

/// b_a = meet of all x with x not <= a (top when no such x exists).
inline std::vector<Elem> meet_outside_downsets(const FiniteLattice& L) {
  const std::size_t n = L.size();
  std::vector<Elem> b(n);
  for (Elem a = 0; a < n; ++a) {
    Elem acc = L.top();
    for (Elem x = 0; x < n; ++x)
      if (!L.leq(x, a)) acc = L.meet(acc, x);
    b[a] = acc;
  }
  return b;
}

/// Evaluates z == join_{a : z not<= a} b_a for every z.
inline bool condition_D(const FiniteLattice& L) {
  const auto b = meet_outside_downsets(L);
  const std::size_t n = L.size();
  for (Elem z = 0; z < n; ++z) {
    Elem acc = L.zero();
    for (Elem a = 0; a < n; ++a)
      if (!L.leq(z, a)) acc = L.join(acc, b[a]);
    if (acc != z) return false;
  }
  return true;
}

/// Phi(z) = { b_a : z not<= a } as subsets of Omega = { b_a }.
struct RingOfSets {
  std::vector<Elem> omega;     // distinct b_a values, increasing
  std::vector<Bitset> sets;    // sets[z] over positions in omega

  /// The family with union as join, as a lattice on the indices of `sets`.
  FiniteLattice induced_lattice() const {
    const std::size_t n = sets.size();
    std::vector<Elem> join(n * n);
    Elem empty = 0;
    for (Elem z = 0; z < n; ++z)
      if (sets[z].count() == 0) empty = z;
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y) {
        Bitset u = sets[x];
        u |= sets[y];
        auto it = std::find(sets.begin(), sets.end(), u);
        if (it == sets.end()) throw Error(ErrorCode::BadTable, "family not closed under union");
        join[x * n + y] = static_cast<Elem>(it - sets.begin());
      }
    return FiniteLattice::validate(n, std::move(join), empty, "ring-of-sets");
  }
};

/// a != top is meet-irreducible when it has exactly one upper cover.
inline bool is_meet_irreducible(const FiniteLattice& L, Elem a) {
  if (a == L.top()) return false;
  std::size_t covers = 0;
  for (Elem y = 0; y < L.size(); ++y) {
    if (y == a || !L.leq(a, y)) continue;
    bool cover = true;
    for (Elem t = 0; t < L.size() && cover; ++t)
      if (t != a && t != y && L.leq(a, t) && L.leq(t, y)) cover = false;
    covers += cover;
  }
  return covers == 1;
}

/// Phi(z) = { b_a : a meet-irreducible, z not<= a }. Ranging a over all of M
/// gives a join-preserving order embedding that can break meets (on the
/// diamond b_0 = 0 lies in Phi(a) and Phi(b) but not in Phi(a ^ b)); over the
/// meet-irreducibles, which are meet-prime here, Phi is a lattice embedding.
inline RingOfSets embed_ring_of_sets(const FiniteLattice& L) {
  if (!condition_D(L))
    throw Error(ErrorCode::NotDistributive,
                "lattice" + (L.name().empty() ? std::string{} : " " + L.name()) +
                    " violates condition (D)");
  const auto b = meet_outside_downsets(L);
  const std::size_t n = L.size();
  std::vector<Elem> irr;
  for (Elem a = 0; a < n; ++a)
    if (is_meet_irreducible(L, a)) irr.push_back(a);
  RingOfSets out;
  for (Elem a : irr) out.omega.push_back(b[a]);
  std::sort(out.omega.begin(), out.omega.end());
  out.omega.erase(std::unique(out.omega.begin(), out.omega.end()), out.omega.end());
  out.sets.assign(n, Bitset(out.omega.size()));
  for (Elem z = 0; z < n; ++z)
    for (Elem a : irr)
      if (!L.leq(z, a)) {
        auto pos = std::lower_bound(out.omega.begin(), out.omega.end(), b[a]) - out.omega.begin();
        out.sets[z].set(static_cast<std::size_t>(pos));
      }
  return out;
}

}  // namespace simsr
