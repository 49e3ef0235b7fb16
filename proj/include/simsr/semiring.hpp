#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "simsr/bitset.hpp"
#include "simsr/error.hpp"
#include "simsr/lattice.hpp"
#include "simsr/partition.hpp"

namespace simsr {

/// A finite semiring with zero given by its two Cayley tables (row-major).
/// mul(x, y) is x*y; for endomorphism semirings that is x o y.
class FiniteSemiring {
 public:
  FiniteSemiring() = default;

  static FiniteSemiring validate(std::size_t n, std::vector<Elem> add, std::vector<Elem> mul,
                                 Elem zero, std::string name = {}) {
    FiniteSemiring R = unchecked(n, std::move(add), std::move(mul), zero, std::move(name));
    R.check_axioms();
    return R;
  }

  /// Skips the axiom checks. For tables derived from an already valid semiring
  /// (restrictions, quotients, opposites).
  static FiniteSemiring unchecked(std::size_t n, std::vector<Elem> add, std::vector<Elem> mul,
                                  Elem zero, std::string name = {}) {
    if (n == 0) throw Error(ErrorCode::BadTable, "empty semiring");
    if (add.size() != n * n || mul.size() != n * n)
      throw Error(ErrorCode::BadTable, "table size does not match n = " + std::to_string(n));
    for (std::size_t i = 0; i < n * n; ++i)
      if (add[i] >= n || mul[i] >= n)
        throw Error(ErrorCode::BadTable, "entry (" + std::to_string(i / n) + "," +
                                             std::to_string(i % n) + ") out of range");
    if (zero >= n) throw Error(ErrorCode::BadTable, "zero index out of range");
    FiniteSemiring R;
    R.n_ = n;
    R.add_ = std::move(add);
    R.mul_ = std::move(mul);
    R.zero_ = zero;
    R.name_ = std::move(name);
    return R;
  }

  std::size_t size() const noexcept { return n_; }
  Elem zero() const noexcept { return zero_; }
  const std::string& name() const noexcept { return name_; }
  void set_name(std::string s) { name_ = std::move(s); }

  Elem add(Elem x, Elem y) const { return add_[x * n_ + y]; }
  Elem mul(Elem x, Elem y) const { return mul_[x * n_ + y]; }
  const std::vector<Elem>& add_table() const noexcept { return add_; }
  const std::vector<Elem>& mul_table() const noexcept { return mul_; }

  friend bool operator==(const FiniteSemiring& a, const FiniteSemiring& b) {
    return a.n_ == b.n_ && a.zero_ == b.zero_ && a.add_ == b.add_ && a.mul_ == b.mul_;
  }

 private:
  void check_axioms() const {
    auto w2 = [](Elem x, Elem y) {
      return "witness (" + std::to_string(x) + "," + std::to_string(y) + ")";
    };
    auto w3 = [](Elem x, Elem y, Elem z) {
      return "witness (" + std::to_string(x) + "," + std::to_string(y) + "," +
             std::to_string(z) + ")";
    };
    const Elem n = static_cast<Elem>(n_);
    for (Elem x = 0; x < n; ++x)
      if (add(zero_, x) != x) throw Error(ErrorCode::AddZeroNotNeutral, w2(zero_, x));
    for (Elem x = 0; x < n; ++x)
      for (Elem y = x + 1; y < n; ++y)
        if (add(x, y) != add(y, x)) throw Error(ErrorCode::AddNotCommutative, w2(x, y));
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y)
        for (Elem z = 0; z < n; ++z)
          if (add(add(x, y), z) != add(x, add(y, z)))
            throw Error(ErrorCode::AddNotAssociative, w3(x, y, z));
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y)
        for (Elem z = 0; z < n; ++z)
          if (mul(mul(x, y), z) != mul(x, mul(y, z)))
            throw Error(ErrorCode::MulNotAssociative, w3(x, y, z));
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y)
        for (Elem z = 0; z < n; ++z) {
          if (mul(x, add(y, z)) != add(mul(x, y), mul(x, z)))
            throw Error(ErrorCode::LeftDistFail, w3(x, y, z));
          if (mul(add(x, y), z) != add(mul(x, z), mul(y, z)))
            throw Error(ErrorCode::RightDistFail, w3(x, y, z));
        }
    for (Elem x = 0; x < n; ++x)
      if (mul(zero_, x) != zero_ || mul(x, zero_) != zero_)
        throw Error(ErrorCode::ZeroNotAbsorbing, w2(zero_, x));
  }

  std::size_t n_ = 0;
  std::vector<Elem> add_;
  std::vector<Elem> mul_;
  Elem zero_ = 0;
  std::string name_;
};

inline FiniteSemiring validate_semiring(const std::vector<std::vector<Elem>>& add,
                                        const std::vector<std::vector<Elem>>& mul, Elem zero,
                                        std::string name = {}) {
  const std::size_t n = add.size();
  if (mul.size() != n) throw Error(ErrorCode::BadTable, "add and mul tables differ in size");
  std::vector<Elem> a, m;
  for (std::size_t i = 0; i < n; ++i) {
    if (add[i].size() != n || mul[i].size() != n)
      throw Error(ErrorCode::BadTable, "tables are not square");
    a.insert(a.end(), add[i].begin(), add[i].end());
    m.insert(m.end(), mul[i].begin(), mul[i].end());
  }
  return FiniteSemiring::validate(n, std::move(a), std::move(m), zero, std::move(name));
}

/// Congruences are partitions of the carrier.
using Congruence = Partition;

namespace semirings {

/// Order 2, idempotent addition, trivial multiplication.
inline FiniteSemiring r2a() {
  return FiniteSemiring::validate(2, {0, 1, 1, 1}, {0, 0, 0, 0}, 0, "R2a");
}

/// The Boolean semiring, End(L2).
inline FiniteSemiring r2b() {
  return FiniteSemiring::validate(2, {0, 1, 1, 1}, {0, 0, 0, 1}, 0, "R2b");
}

inline FiniteSemiring field_f2() {
  return FiniteSemiring::validate(2, {0, 1, 1, 0}, {0, 0, 0, 1}, 0, "F2");
}

inline FiniteSemiring trivial() { return FiniteSemiring::validate(1, {0}, {0}, 0, "R1"); }

/// Componentwise operations on pairs; (x1,x2) has index x1*|R2| + x2.
inline FiniteSemiring direct_product(const FiniteSemiring& a, const FiniteSemiring& b) {
  const std::size_t na = a.size(), nb = b.size(), n = na * nb;
  std::vector<Elem> add(n * n), mul(n * n);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) {
      Elem x1 = x / static_cast<Elem>(nb), x2 = x % static_cast<Elem>(nb);
      Elem y1 = y / static_cast<Elem>(nb), y2 = y % static_cast<Elem>(nb);
      add[x * n + y] = a.add(x1, y1) * static_cast<Elem>(nb) + b.add(x2, y2);
      mul[x * n + y] = a.mul(x1, y1) * static_cast<Elem>(nb) + b.mul(x2, y2);
    }
  Elem zero = a.zero() * static_cast<Elem>(nb) + b.zero();
  return FiniteSemiring::unchecked(n, std::move(add), std::move(mul), zero,
                                   a.name() + "x" + b.name());
}

}  // namespace semirings

/// The same additive structure with multiplication reversed.
inline FiniteSemiring opposite(const FiniteSemiring& R) {
  const std::size_t n = R.size();
  std::vector<Elem> mul(n * n);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) mul[x * n + y] = R.mul(y, x);
  return FiniteSemiring::unchecked(n, R.add_table(), std::move(mul), R.zero(),
                                   R.name().empty() ? "" : R.name() + "^op");
}

// ---------------------------------------------------------------------------
// Subsemirings

/// Least subsemiring containing `gens` (and zero), by worklist closure.
inline Bitset subsemiring_closure(const FiniteSemiring& R, const Bitset& gens) {
  Bitset in(R.size());
  std::vector<Elem> members;
  std::deque<Elem> work;
  auto push = [&](Elem x) {
    if (!in.test(x)) {
      in.set(x);
      work.push_back(x);
    }
  };
  push(R.zero());
  for (Elem g : gens.members()) push(g);
  while (!work.empty()) {
    Elem u = work.front();
    work.pop_front();
    members.push_back(u);
    for (Elem v : members) {
      push(R.add(u, v));
      push(R.mul(u, v));
      push(R.mul(v, u));
    }
  }
  return in;
}

/// Closure of `closed` plus e when `closed` is already a subsemiring: only
/// products and sums involving new elements need to be formed.
inline Bitset extend_closure(const FiniteSemiring& R, const Bitset& closed, Elem e) {
  Bitset in = closed;
  if (in.test(e)) return in;
  std::vector<Elem> old = closed.members();
  std::vector<Elem> fresh;
  std::deque<Elem> work;
  auto push = [&](Elem x) {
    if (!in.test(x)) {
      in.set(x);
      work.push_back(x);
    }
  };
  push(e);
  while (!work.empty()) {
    Elem u = work.front();
    work.pop_front();
    fresh.push_back(u);
    for (Elem v : old) {
      push(R.add(u, v));
      push(R.mul(u, v));
      push(R.mul(v, u));
    }
    for (Elem v : fresh) {
      push(R.add(u, v));
      push(R.mul(u, v));
      push(R.mul(v, u));
    }
  }
  return in;
}

inline bool is_subsemiring(const FiniteSemiring& R, const Bitset& s) {
  if (!s.test(R.zero())) return false;
  auto m = s.members();
  for (Elem x : m)
    for (Elem y : m)
      if (!s.test(R.add(x, y)) || !s.test(R.mul(x, y))) return false;
  return true;
}

/// Orders member sets by size descending, then by member list ascending.
inline bool member_set_less(const Bitset& a, const Bitset& b) {
  auto ca = a.count(), cb = b.count();
  if (ca != cb) return ca > cb;
  return a.members() < b.members();
}

/// All subsemirings containing `base`. Every such set is reached from the
/// closure of `base` by adding one outside element at a time and closing.
inline std::vector<Bitset> enumerate_subsemirings(const FiniteSemiring& R, const Bitset& base,
                                                  std::size_t max_results = 1'000'000) {
  std::unordered_set<Bitset, BitsetHash> seen;
  std::vector<Bitset> stack{subsemiring_closure(R, base)};
  seen.insert(stack.back());
  while (!stack.empty()) {
    Bitset s = std::move(stack.back());
    stack.pop_back();
    for (Elem e = 0; e < R.size(); ++e) {
      if (s.test(e)) continue;
      Bitset c = extend_closure(R, s, e);
      if (seen.insert(c).second) {
        if (seen.size() > max_results)
          throw Error(ErrorCode::SizeLimit,
                      "more than " + std::to_string(max_results) + " subsemirings");
        stack.push_back(std::move(c));
      }
    }
  }
  std::vector<Bitset> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), member_set_less);
  return out;
}

/// The subsemiring on the members of `s`, renumbered in increasing order.
inline FiniteSemiring restrict_to(const FiniteSemiring& R, const Bitset& s, std::string name = {}) {
  auto mem = s.members();
  const std::size_t k = mem.size();
  std::vector<Elem> pos(R.size(), static_cast<Elem>(-1));
  for (Elem i = 0; i < k; ++i) pos[mem[i]] = i;
  std::vector<Elem> add(k * k), mul(k * k);
  for (Elem i = 0; i < k; ++i)
    for (Elem j = 0; j < k; ++j) {
      Elem a = pos[R.add(mem[i], mem[j])], m = pos[R.mul(mem[i], mem[j])];
      if (a == static_cast<Elem>(-1) || m == static_cast<Elem>(-1))
        throw Error(ErrorCode::BadTable, "member set is not closed");
      add[i * k + j] = a;
      mul[i * k + j] = m;
    }
  if (pos[R.zero()] == static_cast<Elem>(-1))
    throw Error(ErrorCode::BadTable, "member set lacks zero");
  return FiniteSemiring::unchecked(k, std::move(add), std::move(mul), pos[R.zero()],
                                   std::move(name));
}

// ---------------------------------------------------------------------------
// Congruences

namespace detail {

/// Closes the union-find under compatibility with + and both multiplications,
/// starting from the pending merged pairs.
inline void close_congruence(const FiniteSemiring& R, UnionFind& uf,
                             std::vector<std::pair<Elem, Elem>> pending) {
  const Elem n = static_cast<Elem>(R.size());
  while (!pending.empty()) {
    auto [x, y] = pending.back();
    pending.pop_back();
    for (Elem a = 0; a < n; ++a) {
      Elem p[3][2] = {{R.add(a, x), R.add(a, y)},
                      {R.mul(a, x), R.mul(a, y)},
                      {R.mul(x, a), R.mul(y, a)}};
      for (auto& q : p)
        if (uf.unite(q[0], q[1])) pending.emplace_back(q[0], q[1]);
    }
  }
}

}  // namespace detail

/// Least congruence identifying x and y.
inline Congruence principal_congruence(const FiniteSemiring& R, Elem x, Elem y) {
  UnionFind uf(R.size());
  std::vector<std::pair<Elem, Elem>> pending;
  if (uf.unite(x, y)) pending.emplace_back(x, y);
  detail::close_congruence(R, uf, std::move(pending));
  return Partition::from_union_find(uf);
}

/// Least congruence containing both c and d.
inline Congruence congruence_join(const FiniteSemiring& R, const Congruence& c,
                                  const Congruence& d) {
  UnionFind uf(R.size());
  std::vector<std::pair<Elem, Elem>> pending;
  for (const auto* p : {&c, &d})
    for (const auto& cls : p->classes())
      for (std::size_t i = 1; i < cls.size(); ++i)
        if (uf.unite(cls[0], cls[i])) pending.emplace_back(cls[0], cls[i]);
  detail::close_congruence(R, uf, std::move(pending));
  return Partition::from_union_find(uf);
}

inline bool is_congruence(const FiniteSemiring& R, const Partition& c) {
  const Elem n = static_cast<Elem>(R.size());
  if (c.size() != n) return false;
  for (const auto& cls : c.classes())
    for (std::size_t i = 1; i < cls.size(); ++i) {
      Elem x = cls[0], y = cls[i];
      for (Elem a = 0; a < n; ++a)
        if (!c.same(R.add(a, x), R.add(a, y)) || !c.same(R.mul(a, x), R.mul(a, y)) ||
            !c.same(R.mul(x, a), R.mul(y, a)))
          return false;
    }
  return true;
}

/// A proper congruence exists iff some principal congruence is proper.
inline bool is_congruence_simple(const FiniteSemiring& R) {
  const Elem n = static_cast<Elem>(R.size());
  for (Elem x = 0; x < n; ++x)
    for (Elem y = x + 1; y < n; ++y)
      if (!principal_congruence(R, x, y).is_total()) return false;
  return true;
}

/// A pair witnessing non-simplicity, if any.
inline std::optional<std::pair<Elem, Elem>> proper_congruence_witness(const FiniteSemiring& R) {
  const Elem n = static_cast<Elem>(R.size());
  for (Elem x = 0; x < n; ++x)
    for (Elem y = x + 1; y < n; ++y)
      if (!principal_congruence(R, x, y).is_total()) return std::pair{x, y};
  return std::nullopt;
}

/// Semiring on the classes of c; class k is the block with canonical id k.
inline FiniteSemiring quotient_semiring(const FiniteSemiring& R, const Congruence& c) {
  if (!is_congruence(R, c))
    throw Error(ErrorCode::NotCompatible, "partition is not a congruence");
  const std::size_t k = c.block_count();
  auto cls = c.classes();
  std::vector<Elem> add(k * k), mul(k * k);
  for (Elem i = 0; i < k; ++i)
    for (Elem j = 0; j < k; ++j) {
      add[i * k + j] = c.block_of(R.add(cls[i][0], cls[j][0]));
      mul[i * k + j] = c.block_of(R.mul(cls[i][0], cls[j][0]));
    }
  return FiniteSemiring::unchecked(k, std::move(add), std::move(mul), c.block_of(R.zero()),
                                   R.name().empty() ? "" : R.name() + "/~");
}

inline bool is_homomorphism(const FiniteSemiring& R, const FiniteSemiring& S,
                            const std::vector<Elem>& f) {
  if (f.size() != R.size() || f[R.zero()] != S.zero()) return false;
  for (Elem x = 0; x < R.size(); ++x)
    for (Elem y = 0; y < R.size(); ++y)
      if (f[R.add(x, y)] != S.add(f[x], f[y]) || f[R.mul(x, y)] != S.mul(f[x], f[y]))
        return false;
  return true;
}

struct StructureFlags {
  bool is_ring = false;
  bool add_idempotent = false;
  bool has_one = false;
  bool trivial_mul = false;
  std::optional<Elem> one;
  std::optional<Elem> absorbing;
};

inline std::optional<Elem> additive_absorbing(const FiniteSemiring& R) {
  for (Elem z = 0; z < R.size(); ++z) {
    bool ok = true;
    for (Elem x = 0; x < R.size() && ok; ++x) ok = R.add(z, x) == z;
    if (ok) return z;
  }
  return std::nullopt;
}

inline std::optional<Elem> multiplicative_one(const FiniteSemiring& R) {
  for (Elem e = 0; e < R.size(); ++e) {
    bool ok = true;
    for (Elem x = 0; x < R.size() && ok; ++x) ok = R.mul(e, x) == x && R.mul(x, e) == x;
    if (ok) return e;
  }
  return std::nullopt;
}

inline StructureFlags structure_flags(const FiniteSemiring& R) {
  StructureFlags f;
  const Elem n = static_cast<Elem>(R.size());
  // a finite commutative monoid is a group iff every element has an inverse
  f.is_ring = true;
  for (Elem x = 0; x < n && f.is_ring; ++x) {
    bool inv = false;
    for (Elem y = 0; y < n && !inv; ++y) inv = R.add(x, y) == R.zero();
    f.is_ring = inv;
  }
  f.add_idempotent = true;
  for (Elem x = 0; x < n && f.add_idempotent; ++x) f.add_idempotent = R.add(x, x) == x;
  f.trivial_mul = true;
  for (std::size_t i = 0; i < R.mul_table().size() && f.trivial_mul; ++i)
    f.trivial_mul = R.mul_table()[i] == R.zero();
  f.one = multiplicative_one(R);
  f.has_one = f.one.has_value();
  f.absorbing = additive_absorbing(R);
  return f;
}

/// x ~ y iff m*x in R+y and n*y in R+x for some m, n in 0..|R|.
inline Congruence monico_congruence(const FiniteSemiring& R) {
  const Elem n = static_cast<Elem>(R.size());
  std::vector<Bitset> translates(n, Bitset(n));  // R + y
  for (Elem y = 0; y < n; ++y)
    for (Elem r = 0; r < n; ++r) translates[y].set(R.add(r, y));
  std::vector<Bitset> multiples(n, Bitset(n));  // { m x : 0 <= m <= n }
  for (Elem x = 0; x < n; ++x) {
    Elem acc = R.zero();
    for (Elem m = 0; m <= n; ++m) {
      multiples[x].set(acc);
      acc = R.add(acc, x);
    }
  }
  auto reaches = [&](Elem x, Elem y) {
    Bitset b = multiples[x];
    b &= translates[y];
    return b.count() > 0;
  };
  std::vector<Elem> label(n);
  for (Elem x = 0; x < n; ++x) {
    label[x] = x;
    for (Elem y = 0; y < x; ++y)
      if (reaches(x, y) && reaches(y, x)) {
        label[x] = label[y];
        break;
      }
  }
  return Partition::from_labels(label);
}

/// The multiplicative center { x : xr = rx for all r }.
inline std::vector<Elem> center(const FiniteSemiring& R) {
  std::vector<Elem> out;
  for (Elem x = 0; x < R.size(); ++x) {
    bool ok = true;
    for (Elem r = 0; r < R.size() && ok; ++r) ok = R.mul(x, r) == R.mul(r, x);
    if (ok) out.push_back(x);
  }
  return out;
}

/// The monoid Rz = { r z } for the additively absorbing z, as a lattice with
/// elements numbered by increasing index in R (zero first). Requires
/// idempotent addition and an absorbing element.
inline std::optional<FiniteLattice> recover_monoid(const FiniteSemiring& R,
                                                   std::vector<Elem>* members = nullptr) {
  auto flags = structure_flags(R);
  if (!flags.add_idempotent || !flags.absorbing) return std::nullopt;
  const Elem z = *flags.absorbing;
  Bitset in(R.size());
  for (Elem r = 0; r < R.size(); ++r) in.set(R.mul(r, z));
  auto mem = in.members();
  // zero is the least index in Rz only if R.zero() is smallest; put it first
  std::stable_partition(mem.begin(), mem.end(), [&](Elem x) { return x == R.zero(); });
  const std::size_t k = mem.size();
  std::vector<Elem> pos(R.size(), static_cast<Elem>(-1));
  for (Elem i = 0; i < k; ++i) pos[mem[i]] = i;
  std::vector<Elem> join(k * k);
  for (Elem i = 0; i < k; ++i)
    for (Elem j = 0; j < k; ++j) join[i * k + j] = pos[R.add(mem[i], mem[j])];
  if (members) *members = mem;
  return FiniteLattice::validate(k, std::move(join), 0,
                                 R.name().empty() ? "" : "Rz(" + R.name() + ")");
}

}  // namespace simsr
