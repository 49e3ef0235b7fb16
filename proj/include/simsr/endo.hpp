#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "simsr/bitset.hpp"
#include "simsr/error.hpp"
#include "simsr/lattice.hpp"
#include "simsr/semiring.hpp"

namespace simsr {

/// A zero- and join-preserving self-map of a lattice, stored as its image array.
struct Endomorphism {
  std::vector<Elem> image;

  Elem operator()(Elem x) const { return image[x]; }
  std::size_t size() const noexcept { return image.size(); }

  friend auto operator<=>(const Endomorphism&, const Endomorphism&) = default;
};

struct EndomorphismHash {
  std::size_t operator()(const Endomorphism& f) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Elem x : f.image) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

inline bool is_endomorphism(const FiniteLattice& L, const std::vector<Elem>& image) {
  const std::size_t n = L.size();
  if (image.size() != n) return false;
  for (Elem v : image)
    if (v >= n) return false;
  if (image[L.zero()] != L.zero()) return false;
  for (Elem x = 0; x < n; ++x)
    for (Elem y = x + 1; y < n; ++y)
      if (image[L.join(x, y)] != L.join(image[x], image[y])) return false;
  return true;
}

inline Endomorphism zero_map(const FiniteLattice& L) {
  return Endomorphism{std::vector<Elem>(L.size(), L.zero())};
}

inline Endomorphism identity_map(const FiniteLattice& L) {
  Endomorphism f{std::vector<Elem>(L.size())};
  for (Elem x = 0; x < L.size(); ++x) f.image[x] = x;
  return f;
}

/// (f o g)(x) = f(g(x))
inline Endomorphism compose(const Endomorphism& f, const Endomorphism& g) {
  Endomorphism h{std::vector<Elem>(g.size())};
  for (std::size_t x = 0; x < g.size(); ++x) h.image[x] = f.image[g.image[x]];
  return h;
}

/// Pointwise join.
inline Endomorphism add(const FiniteLattice& L, const Endomorphism& f, const Endomorphism& g) {
  Endomorphism h{std::vector<Elem>(f.size())};
  for (Elem x = 0; x < f.size(); ++x) h.image[x] = L.join(f.image[x], g.image[x]);
  return h;
}

/// Pointwise order f <= g.
inline bool leq(const FiniteLattice& L, const Endomorphism& f, const Endomorphism& g) {
  for (Elem x = 0; x < f.size(); ++x)
    if (!L.leq(f.image[x], g.image[x])) return false;
  return true;
}

/// e_{a,b}(x) = 0 if x <= a, else b.
inline Endomorphism elementary(const FiniteLattice& L, Elem a, Elem b) {
  Endomorphism e{std::vector<Elem>(L.size())};
  for (Elem x = 0; x < L.size(); ++x) e.image[x] = L.leq(x, a) ? L.zero() : b;
  return e;
}

/// The distinct maps e_{a,b}, sorted.
inline std::vector<Endomorphism> elementary_maps(const FiniteLattice& L) {
  std::set<Endomorphism> s;
  for (Elem a = 0; a < L.size(); ++a)
    for (Elem b = 0; b < L.size(); ++b) s.insert(elementary(L, a, b));
  return {s.begin(), s.end()};
}

/// All endomorphisms in lexicographic order of image arrays, by backtracking
/// over elements in index order with join and monotonicity checks against the
/// already assigned prefix.
inline std::vector<Endomorphism> enumerate_endomorphisms(const FiniteLattice& L,
                                                         std::size_t limit = 20000) {
  const std::size_t n = L.size();
  std::vector<Endomorphism> out;
  std::vector<Elem> img(n, 0);
  auto consistent = [&](Elem x) {
    if (x == L.zero() && img[x] != L.zero()) return false;
    for (Elem y = 0; y < x; ++y) {
      if (L.leq(y, x) && !L.leq(img[y], img[x])) return false;
      if (L.leq(x, y) && !L.leq(img[x], img[y])) return false;
    }
    // every triple (y, z, y+z) whose largest index is x is checked exactly here
    for (Elem y = 0; y <= x; ++y)
      for (Elem z = 0; z <= y; ++z) {
        Elem j = L.join(y, z);
        if (j > x || (y != x && j != x)) continue;
        if (img[j] != L.join(img[y], img[z])) return false;
      }
    return true;
  };
  auto rec = [&](auto&& self, Elem x) -> void {
    if (x == n) {
      out.push_back(Endomorphism{img});
      if (out.size() > limit)
        throw Error(ErrorCode::SizeLimit, "|End(M)| exceeds " + std::to_string(limit));
      return;
    }
    for (Elem v = 0; v < n; ++v) {
      img[x] = v;
      if (consistent(x)) self(self, x + 1);
    }
  };
  rec(rec, 0);
  return out;
}

/// End(M) with its Cayley tables; elements are numbered in lexicographic order
/// of their image arrays, so the zero map has index 0.
struct EndSemiring {
  FiniteLattice lattice;
  std::vector<Endomorphism> elements;
  FiniteSemiring semiring;
  Elem identity = 0;

  std::optional<Elem> index_of(const Endomorphism& f) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), f);
    if (it == elements.end() || *it != f) return std::nullopt;
    return static_cast<Elem>(it - elements.begin());
  }

  Elem require_index(const Endomorphism& f) const {
    auto i = index_of(f);
    if (!i) throw Error(ErrorCode::NotEndomorphism, "map is not an element of End(M)");
    return *i;
  }

  std::size_t size() const noexcept { return elements.size(); }
};

inline EndSemiring end_semiring(const FiniteLattice& L, std::size_t limit = 20000) {
  EndSemiring E;
  E.lattice = L;
  E.elements = enumerate_endomorphisms(L, limit);
  const std::size_t k = E.elements.size();
  std::vector<Elem> add_t(k * k), mul_t(k * k);
  for (Elem i = 0; i < k; ++i)
    for (Elem j = 0; j < k; ++j) {
      add_t[i * k + j] = E.require_index(add(L, E.elements[i], E.elements[j]));
      mul_t[i * k + j] = E.require_index(compose(E.elements[i], E.elements[j]));
    }
  E.identity = E.require_index(identity_map(L));
  E.semiring = FiniteSemiring::unchecked(k, std::move(add_t), std::move(mul_t),
                                         E.require_index(zero_map(L)),
                                         L.name().empty() ? "" : "End(" + L.name() + ")");
  return E;
}

/// A subsemiring of End(M) given by its members (sorted image arrays).
class EndoSubsemiring {
 public:
  EndoSubsemiring() = default;
  EndoSubsemiring(FiniteLattice L, std::vector<Endomorphism> members)
      : lattice_(std::move(L)), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (!contains(zero_map(lattice_)))
      throw Error(ErrorCode::BadTable, "subsemiring lacks the zero map");
    for (const auto& f : members_)
      for (const auto& g : members_)
        if (!contains(add(lattice_, f, g)) || !contains(compose(f, g)))
          throw Error(ErrorCode::BadTable, "member set is not closed under + and o");
    dense_ = true;
    for (Elem a = 0; a < lattice_.size() && dense_; ++a)
      for (Elem b = 0; b < lattice_.size() && dense_; ++b)
        dense_ = contains(elementary(lattice_, a, b));
  }

  const FiniteLattice& lattice() const noexcept { return lattice_; }
  const std::vector<Endomorphism>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool dense() const noexcept { return dense_; }

  bool contains(const Endomorphism& f) const {
    return std::binary_search(members_.begin(), members_.end(), f);
  }

  /// Cayley tables on the members in their sorted order.
  FiniteSemiring to_semiring(std::string name = {}) const {
    const std::size_t k = members_.size();
    auto idx = [&](const Endomorphism& f) {
      return static_cast<Elem>(std::lower_bound(members_.begin(), members_.end(), f) -
                               members_.begin());
    };
    std::vector<Elem> a(k * k), m(k * k);
    for (Elem i = 0; i < k; ++i)
      for (Elem j = 0; j < k; ++j) {
        a[i * k + j] = idx(add(lattice_, members_[i], members_[j]));
        m[i * k + j] = idx(compose(members_[i], members_[j]));
      }
    return FiniteSemiring::unchecked(k, std::move(a), std::move(m), idx(zero_map(lattice_)),
                                     std::move(name));
  }

  /// Member set as a bitset over the element numbering of End(M).
  Bitset to_bitset(const EndSemiring& E) const {
    Bitset b(E.size());
    for (const auto& f : members_) b.set(E.require_index(f));
    return b;
  }

 private:
  FiniteLattice lattice_;
  std::vector<Endomorphism> members_;
  bool dense_ = false;
};

inline bool is_dense(const EndoSubsemiring& S) { return S.dense(); }

inline EndoSubsemiring from_bitset(const EndSemiring& E, const Bitset& s) {
  std::vector<Endomorphism> m;
  for (Elem i : s.members()) m.push_back(E.elements[i]);
  return EndoSubsemiring(E.lattice, std::move(m));
}

/// Worklist closure of a set of endomorphisms under + and o (plus the zero map).
inline std::vector<Endomorphism> close_endomorphisms(const FiniteLattice& L,
                                                     std::vector<Endomorphism> gens,
                                                     std::size_t limit = 20000) {
  std::unordered_set<Endomorphism, EndomorphismHash> in;
  std::vector<Endomorphism> members;
  std::deque<Endomorphism> work;
  auto push = [&](Endomorphism f) {
    if (in.insert(f).second) {
      if (in.size() > limit)
        throw Error(ErrorCode::SizeLimit, "closure exceeds " + std::to_string(limit));
      work.push_back(std::move(f));
    }
  };
  push(zero_map(L));
  for (auto& g : gens) push(std::move(g));
  while (!work.empty()) {
    Endomorphism u = std::move(work.front());
    work.pop_front();
    members.push_back(u);
    for (std::size_t i = 0; i < members.size(); ++i) {
      const Endomorphism& v = members[i];
      push(add(L, u, v));
      push(compose(u, v));
      push(compose(v, u));
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

/// Least dense subsemiring: the closure of all e_{a,b}.
inline EndoSubsemiring dense_closure(const FiniteLattice& L, std::size_t limit = 20000) {
  return EndoSubsemiring(L, close_endomorphisms(L, elementary_maps(L), limit));
}

struct SROptions {
  std::size_t max_end_size = 20000;
  std::size_t max_sr_base = 512;
  std::size_t max_members = 1'000'000;
};

/// Every dense subsemiring of End(M), largest first; equal sizes ordered by
/// member list. The family is the interval between the dense closure and End(M).
inline std::vector<EndoSubsemiring> enumerate_SR(const FiniteLattice& L, SROptions opt = {}) {
  auto E = end_semiring(L, opt.max_end_size);
  if (E.size() > opt.max_sr_base)
    throw Error(ErrorCode::SizeLimit, "|End(M)| = " + std::to_string(E.size()) +
                                          " exceeds the SR base bound " +
                                          std::to_string(opt.max_sr_base));
  Bitset base(E.size());
  for (const auto& e : elementary_maps(L)) base.set(E.require_index(e));
  auto sets = enumerate_subsemirings(E.semiring, base, opt.max_members);
  std::vector<EndoSubsemiring> out;
  out.reserve(sets.size());
  for (const auto& s : sets) out.push_back(from_bitset(E, s));
  return out;
}

/// |SR(M)| = 1 iff the dense closure is already all of End(M).
inline bool sr_is_singleton(const FiniteLattice& L, std::size_t limit = 20000) {
  return dense_closure(L, limit).size() == enumerate_endomorphisms(L, limit).size();
}

/// f*(a) = join{ x : f(x) <= a }, the upper adjoint of f, read as an
/// endomorphism of the dual lattice on the same indices.
inline Endomorphism transpose(const FiniteLattice& L, const Endomorphism& f) {
  Endomorphism t{std::vector<Elem>(L.size())};
  for (Elem a = 0; a < L.size(); ++a) {
    Elem acc = L.zero();
    for (Elem x = 0; x < L.size(); ++x)
      if (L.leq(f.image[x], a)) acc = L.join(acc, x);
    t.image[a] = acc;
  }
  return t;
}

/// The identity decomposition used to decide |SR(M)| = 1: the sum of all
/// e_{a,b} that lie below the identity.
inline Endomorphism sum_of_elementary_below_identity(const FiniteLattice& L) {
  const auto id = identity_map(L);
  Endomorphism acc = zero_map(L);
  for (Elem a = 0; a < L.size(); ++a)
    for (Elem b = 0; b < L.size(); ++b) {
      auto e = elementary(L, a, b);
      if (leq(L, e, id)) acc = add(L, acc, e);
    }
  return acc;
}

}  // namespace simsr
