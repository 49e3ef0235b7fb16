#pragma once

#include <algorithm>
#include <deque>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "simsr/bitset.hpp"
#include "simsr/endo.hpp"
#include "simsr/error.hpp"
#include "simsr/lattice.hpp"
#include "simsr/partition.hpp"
#include "simsr/semiring.hpp"

namespace simsr {

/// A left semimodule over a finite semiring: a commutative monoid (madd, zero)
/// on 0..m-1 with a dense |R| x m action table, act(r, x) = r x.
class Semimodule {
 public:
  Semimodule() = default;

  static Semimodule validate(std::shared_ptr<const FiniteSemiring> ring, std::size_t m,
                             std::vector<Elem> madd, std::vector<Elem> act, Elem zero) {
    Semimodule M = unchecked(std::move(ring), m, std::move(madd), std::move(act), zero);
    M.check_axioms();
    return M;
  }

  static Semimodule unchecked(std::shared_ptr<const FiniteSemiring> ring, std::size_t m,
                              std::vector<Elem> madd, std::vector<Elem> act, Elem zero) {
    if (!ring) throw Error(ErrorCode::BadTable, "semimodule without a semiring");
    if (m == 0) throw Error(ErrorCode::BadTable, "empty semimodule");
    if (madd.size() != m * m || act.size() != ring->size() * m)
      throw Error(ErrorCode::BadTable, "semimodule table sizes do not match");
    for (Elem v : madd)
      if (v >= m) throw Error(ErrorCode::BadTable, "module addition entry out of range");
    for (Elem v : act)
      if (v >= m) throw Error(ErrorCode::BadTable, "action entry out of range");
    if (zero >= m) throw Error(ErrorCode::BadTable, "module zero out of range");
    Semimodule M;
    M.ring_ = std::move(ring);
    M.m_ = m;
    M.madd_ = std::move(madd);
    M.act_ = std::move(act);
    M.zero_ = zero;
    return M;
  }

  const FiniteSemiring& ring() const noexcept { return *ring_; }
  const std::shared_ptr<const FiniteSemiring>& ring_ptr() const noexcept { return ring_; }
  std::size_t size() const noexcept { return m_; }
  Elem zero() const noexcept { return zero_; }
  Elem add(Elem x, Elem y) const { return madd_[x * m_ + y]; }
  Elem act(Elem r, Elem x) const { return act_[r * m_ + x]; }
  const std::vector<Elem>& add_table() const noexcept { return madd_; }
  const std::vector<Elem>& act_table() const noexcept { return act_; }

 private:
  void check_axioms() const {
    const Elem m = static_cast<Elem>(m_);
    const FiniteSemiring& R = *ring_;
    const Elem n = static_cast<Elem>(R.size());
    auto w = [](std::initializer_list<Elem> xs) {
      std::string s = "witness (";
      bool first = true;
      for (Elem x : xs) {
        s += (first ? "" : ",") + std::to_string(x);
        first = false;
      }
      return s + ")";
    };
    for (Elem x = 0; x < m; ++x)
      if (add(zero_, x) != x) throw Error(ErrorCode::ModuleAddInvalid, "zero not neutral " + w({x}));
    for (Elem x = 0; x < m; ++x)
      for (Elem y = 0; y < m; ++y) {
        if (add(x, y) != add(y, x))
          throw Error(ErrorCode::ModuleAddInvalid, "not commutative " + w({x, y}));
        for (Elem z = 0; z < m; ++z)
          if (add(add(x, y), z) != add(x, add(y, z)))
            throw Error(ErrorCode::ModuleAddInvalid, "not associative " + w({x, y, z}));
      }
    // zero laws first, so a bad zero is reported as such
    for (Elem x = 0; x < m; ++x)
      if (act(R.zero(), x) != zero_) throw Error(ErrorCode::ActionZeroRing, w({x}));
    for (Elem r = 0; r < n; ++r)
      if (act(r, zero_) != zero_) throw Error(ErrorCode::ActionZeroModule, w({r}));
    for (Elem r = 0; r < n; ++r)
      for (Elem s = 0; s < n; ++s)
        for (Elem x = 0; x < m; ++x) {
          if (act(r, act(s, x)) != act(R.mul(r, s), x))
            throw Error(ErrorCode::ActionNotAssociative, w({r, s, x}));
          if (act(R.add(r, s), x) != add(act(r, x), act(s, x)))
            throw Error(ErrorCode::ActionAddDistFail, w({r, s, x}));
        }
    for (Elem r = 0; r < n; ++r)
      for (Elem x = 0; x < m; ++x)
        for (Elem y = 0; y < m; ++y)
          if (act(r, add(x, y)) != add(act(r, x), act(r, y)))
            throw Error(ErrorCode::ActionModuleDistFail, w({r, x, y}));
  }

  std::shared_ptr<const FiniteSemiring> ring_;
  std::size_t m_ = 0;
  std::vector<Elem> madd_;
  std::vector<Elem> act_;
  Elem zero_ = 0;
};

using ModuleCongruence = Partition;

inline Semimodule validate_semimodule(std::shared_ptr<const FiniteSemiring> ring,
                                      std::size_t m, std::vector<Elem> madd,
                                      std::vector<Elem> act, Elem zero) {
  return Semimodule::validate(std::move(ring), m, std::move(madd), std::move(act), zero);
}

/// R acting on itself by left multiplication.
inline Semimodule regular_module(std::shared_ptr<const FiniteSemiring> R) {
  const std::size_t n = R->size();
  auto madd = R->add_table();
  auto act = R->mul_table();
  Elem z = R->zero();
  return Semimodule::unchecked(std::move(R), n, std::move(madd), std::move(act), z);
}

/// The lattice M under End(M) acting by evaluation.
inline Semimodule natural_module(const EndSemiring& E) {
  const std::size_t n = E.lattice.size();
  std::vector<Elem> act(E.size() * n);
  for (Elem r = 0; r < E.size(); ++r)
    for (Elem x = 0; x < n; ++x) act[r * n + x] = E.elements[r](x);
  return Semimodule::unchecked(std::make_shared<const FiniteSemiring>(E.semiring), n,
                               E.lattice.join_table(), std::move(act), E.lattice.zero());
}

/// Every r acts as zero.
inline Semimodule zero_action_module(std::shared_ptr<const FiniteSemiring> R,
                                     const FiniteLattice& L) {
  std::vector<Elem> act(R->size() * L.size(), L.zero());
  return Semimodule::unchecked(std::move(R), L.size(), L.join_table(), std::move(act), L.zero());
}

inline bool acts_nonzero(const Semimodule& M) {
  for (Elem v : M.act_table())
    if (v != M.zero()) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Subsemimodules

inline Bitset submodule_closure(const Semimodule& M, const Bitset& gens) {
  Bitset in(M.size());
  std::vector<Elem> members;
  std::deque<Elem> work;
  auto push = [&](Elem x) {
    if (!in.test(x)) {
      in.set(x);
      work.push_back(x);
    }
  };
  push(M.zero());
  for (Elem g : gens.members()) push(g);
  while (!work.empty()) {
    Elem u = work.front();
    work.pop_front();
    members.push_back(u);
    for (Elem v : members) push(M.add(u, v));
    for (Elem r = 0; r < M.ring().size(); ++r) push(M.act(r, u));
  }
  return in;
}

inline Bitset submodule_generated_by(const Semimodule& M, Elem x) {
  Bitset g(M.size());
  g.set(x);
  return submodule_closure(M, g);
}

/// All subsemimodules, by adding one element at a time to closed sets.
inline std::vector<Bitset> subsemimodules(const Semimodule& M, std::size_t limit = 100000) {
  std::unordered_set<Bitset, BitsetHash> seen;
  std::vector<Bitset> stack{submodule_closure(M, Bitset(M.size()))};
  seen.insert(stack.back());
  while (!stack.empty()) {
    Bitset s = std::move(stack.back());
    stack.pop_back();
    for (Elem e = 0; e < M.size(); ++e) {
      if (s.test(e)) continue;
      Bitset g = s;
      g.set(e);
      Bitset c = submodule_closure(M, g);
      if (seen.insert(c).second) {
        if (seen.size() > limit)
          throw Error(ErrorCode::SizeLimit, "more than " + std::to_string(limit) +
                                                " subsemimodules");
        stack.push_back(std::move(c));
      }
    }
  }
  std::vector<Bitset> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), [](const Bitset& a, const Bitset& b) {
    if (a.count() != b.count()) return a.count() < b.count();
    return a.members() < b.members();
  });
  return out;
}

/// The subsemimodule on `s`, renumbered in increasing order.
inline Semimodule restrict_module(const Semimodule& M, const Bitset& s) {
  auto mem = s.members();
  const std::size_t k = mem.size();
  constexpr Elem kNone = static_cast<Elem>(-1);
  std::vector<Elem> pos(M.size(), kNone);
  for (Elem i = 0; i < k; ++i) pos[mem[i]] = i;
  if (pos[M.zero()] == kNone) throw Error(ErrorCode::BadTable, "subset lacks zero");
  std::vector<Elem> madd(k * k), act(M.ring().size() * k);
  for (Elem i = 0; i < k; ++i)
    for (Elem j = 0; j < k; ++j) {
      madd[i * k + j] = pos[M.add(mem[i], mem[j])];
      if (madd[i * k + j] == kNone) throw Error(ErrorCode::BadTable, "subset not closed under +");
    }
  for (Elem r = 0; r < M.ring().size(); ++r)
    for (Elem i = 0; i < k; ++i) {
      act[r * k + i] = pos[M.act(r, mem[i])];
      if (act[r * k + i] == kNone) throw Error(ErrorCode::BadTable, "subset not closed under R");
    }
  return Semimodule::unchecked(M.ring_ptr(), k, std::move(madd), std::move(act), pos[M.zero()]);
}

// ---------------------------------------------------------------------------
// Congruences

namespace detail {

inline void close_module_congruence(const Semimodule& M, UnionFind& uf,
                                    std::vector<std::pair<Elem, Elem>> pending) {
  const Elem m = static_cast<Elem>(M.size());
  const Elem n = static_cast<Elem>(M.ring().size());
  while (!pending.empty()) {
    auto [x, y] = pending.back();
    pending.pop_back();
    for (Elem a = 0; a < m; ++a) {
      Elem p = M.add(a, x), q = M.add(a, y);
      if (uf.unite(p, q)) pending.emplace_back(p, q);
    }
    for (Elem r = 0; r < n; ++r) {
      Elem p = M.act(r, x), q = M.act(r, y);
      if (uf.unite(p, q)) pending.emplace_back(p, q);
    }
  }
}

inline UnionFind union_find_of(const Partition& c) {
  UnionFind uf(c.size());
  for (const auto& cls : c.classes())
    for (std::size_t i = 1; i < cls.size(); ++i) uf.unite(cls[0], cls[i]);
  return uf;
}

}  // namespace detail

/// Least module congruence identifying x and y.
inline ModuleCongruence module_principal(const Semimodule& M, Elem x, Elem y) {
  UnionFind uf(M.size());
  std::vector<std::pair<Elem, Elem>> pending;
  if (uf.unite(x, y)) pending.emplace_back(x, y);
  detail::close_module_congruence(M, uf, std::move(pending));
  return Partition::from_union_find(uf);
}

/// Least module congruence containing c and the pair (x, y). c must already be
/// a module congruence.
inline ModuleCongruence module_join(const Semimodule& M, const ModuleCongruence& c, Elem x,
                                    Elem y) {
  std::vector<std::pair<Elem, Elem>> pending;
  UnionFind uf = detail::union_find_of(c);
  if (uf.unite(x, y)) pending.emplace_back(x, y);
  detail::close_module_congruence(M, uf, std::move(pending));
  return Partition::from_union_find(uf);
}

inline ModuleCongruence module_join(const Semimodule& M, const ModuleCongruence& c,
                                    const ModuleCongruence& d) {
  std::vector<std::pair<Elem, Elem>> pending;
  UnionFind uf = detail::union_find_of(c);
  for (const auto& cls : d.classes())
    for (std::size_t i = 1; i < cls.size(); ++i)
      if (uf.unite(cls[0], cls[i])) pending.emplace_back(cls[0], cls[i]);
  detail::close_module_congruence(M, uf, std::move(pending));
  return Partition::from_union_find(uf);
}

inline bool is_module_congruence(const Semimodule& M, const Partition& c) {
  if (c.size() != M.size()) return false;
  for (const auto& cls : c.classes())
    for (std::size_t i = 1; i < cls.size(); ++i) {
      Elem x = cls[0], y = cls[i];
      for (Elem a = 0; a < M.size(); ++a)
        if (!c.same(M.add(a, x), M.add(a, y))) return false;
      for (Elem r = 0; r < M.ring().size(); ++r)
        if (!c.same(M.act(r, x), M.act(r, y))) return false;
    }
  return true;
}

/// All module congruences: the principal ones closed under joins.
inline std::vector<ModuleCongruence> module_congruences(const Semimodule& M,
                                                        std::size_t limit = 100000) {
  const Elem m = static_cast<Elem>(M.size());
  std::vector<ModuleCongruence> principal;
  for (Elem x = 0; x < m; ++x)
    for (Elem y = x + 1; y < m; ++y) principal.push_back(module_principal(M, x, y));
  std::sort(principal.begin(), principal.end());
  principal.erase(std::unique(principal.begin(), principal.end()), principal.end());

  std::set<ModuleCongruence> all{Partition::identity(m)};
  std::vector<ModuleCongruence> work{Partition::identity(m)};
  while (!work.empty()) {
    auto c = std::move(work.back());
    work.pop_back();
    for (const auto& p : principal) {
      auto d = module_join(M, c, p);
      if (all.insert(d).second) {
        if (all.size() > limit)
          throw Error(ErrorCode::SizeLimit,
                      "more than " + std::to_string(limit) + " module congruences");
        work.push_back(std::move(d));
      }
    }
  }
  return {all.begin(), all.end()};
}

/// A maximal congruence other than the total one. Pairs are tried in
/// lexicographic order and kept whenever the join stays nontotal; a pair whose
/// join is total once stays total for every larger congruence, so one pass
/// suffices.
inline ModuleCongruence maximal_nontotal_congruence(const Semimodule& M) {
  const Elem m = static_cast<Elem>(M.size());
  if (m < 2) throw Error(ErrorCode::PreconditionFailed, "no nontotal congruence on a 1-element module");
  auto c = Partition::identity(m);
  for (Elem x = 0; x < m; ++x)
    for (Elem y = x + 1; y < m; ++y) {
      if (c.same(x, y)) continue;
      auto d = module_join(M, c, x, y);
      if (!d.is_total()) c = std::move(d);
    }
  return c;
}

inline Semimodule quotient_module(const Semimodule& M, const ModuleCongruence& c) {
  if (!is_module_congruence(M, c))
    throw Error(ErrorCode::NotCompatible, "partition is not a module congruence");
  const std::size_t k = c.block_count();
  auto cls = c.classes();
  std::vector<Elem> madd(k * k), act(M.ring().size() * k);
  for (Elem i = 0; i < k; ++i)
    for (Elem j = 0; j < k; ++j) madd[i * k + j] = c.block_of(M.add(cls[i][0], cls[j][0]));
  for (Elem r = 0; r < M.ring().size(); ++r)
    for (Elem i = 0; i < k; ++i) act[r * k + i] = c.block_of(M.act(r, cls[i][0]));
  return Semimodule::unchecked(M.ring_ptr(), k, std::move(madd), std::move(act),
                               c.block_of(M.zero()));
}

struct Irreducibility {
  bool acts_nonzero = false;
  bool sub_irreducible = false;
  bool quotient_irreducible = false;
  bool irreducible = false;
};

inline bool has_only_trivial_submodules(const Semimodule& M) {
  for (Elem x = 0; x < M.size(); ++x) {
    if (x == M.zero()) continue;
    if (submodule_generated_by(M, x).count() != M.size()) return false;
  }
  return true;
}

inline bool has_only_trivial_quotients(const Semimodule& M) {
  for (Elem x = 0; x < M.size(); ++x)
    for (Elem y = x + 1; y < M.size(); ++y)
      if (!module_principal(M, x, y).is_total()) return false;
  return true;
}

inline Irreducibility irreducibility(const Semimodule& M) {
  Irreducibility f;
  f.acts_nonzero = acts_nonzero(M);
  f.sub_irreducible = f.acts_nonzero && has_only_trivial_submodules(M);
  f.quotient_irreducible = f.acts_nonzero && has_only_trivial_quotients(M);
  f.irreducible = f.sub_irreducible && f.quotient_irreducible;
  return f;
}

/// Smallest subsemimodule generated by a single nonzero element; ties go to
/// the least generator. Such a set is a minimal nonzero subsemimodule.
inline Bitset minimal_nonzero_submodule(const Semimodule& M) {
  std::optional<Bitset> best;
  for (Elem x = 0; x < M.size(); ++x) {
    if (x == M.zero()) continue;
    auto s = submodule_generated_by(M, x);
    if (!best || s.count() < best->count()) best = std::move(s);
  }
  if (!best) throw Error(ErrorCode::PreconditionFailed, "module has no nonzero element");
  return *best;
}

struct DescentStep {
  enum class Kind { Regular, Quotient, Submodule } kind = Kind::Regular;
  std::size_t size = 0;
  Irreducibility flags;
};

/// Finds a finite irreducible semimodule over a congruence-simple R with
/// nontrivial multiplication: start from R acting on itself, divide by a
/// maximal nontotal congruence, then alternately pass to a minimal nonzero
/// subsemimodule or to a maximal nontotal quotient until both kinds of
/// irreducibility hold.
inline Semimodule find_irreducible(std::shared_ptr<const FiniteSemiring> R,
                                   std::vector<DescentStep>* trace = nullptr) {
  if (structure_flags(*R).trivial_mul)
    throw Error(ErrorCode::PreconditionFailed, "R R = {0}");
  if (!is_congruence_simple(*R))
    throw Error(ErrorCode::PreconditionFailed, "R is not congruence-simple");
  Semimodule M = regular_module(R);
  if (trace) trace->push_back({DescentStep::Kind::Regular, M.size(), irreducibility(M)});
  M = quotient_module(M, maximal_nontotal_congruence(M));
  auto flags = irreducibility(M);
  if (trace) trace->push_back({DescentStep::Kind::Quotient, M.size(), flags});
  while (!flags.irreducible) {
    DescentStep::Kind kind;
    if (flags.quotient_irreducible) {
      M = restrict_module(M, minimal_nonzero_submodule(M));
      kind = DescentStep::Kind::Submodule;
    } else if (flags.sub_irreducible) {
      M = quotient_module(M, maximal_nontotal_congruence(M));
      kind = DescentStep::Kind::Quotient;
    } else {
      throw Error(ErrorCode::PreconditionFailed,
                  "descent reached a module that is neither sub- nor quotient-irreducible");
    }
    flags = irreducibility(M);
    if (trace) trace->push_back({kind, M.size(), flags});
  }
  return M;
}

/// (M, +) as a lattice on the module's own indices.
inline FiniteLattice module_lattice(const Semimodule& M) {
  for (Elem x = 0; x < M.size(); ++x)
    if (M.add(x, x) != x) throw Error(ErrorCode::NotALattice, "module addition not idempotent");
  return FiniteLattice::validate(M.size(), M.add_table(), M.zero(), "module");
}

struct Representation {
  FiniteLattice lattice;
  std::vector<Endomorphism> maps;  // maps[r] = T_r
  EndoSubsemiring image;
  bool faithful = false;
  bool dense = false;
};

/// r -> T_r with T_r(x) = r x, landing in End(M) for the lattice (M, +).
inline Representation representation(const Semimodule& M) {
  Representation rep;
  rep.lattice = module_lattice(M);
  const std::size_t m = M.size();
  for (Elem r = 0; r < M.ring().size(); ++r) {
    Endomorphism t{std::vector<Elem>(m)};
    for (Elem x = 0; x < m; ++x) t.image[x] = M.act(r, x);
    rep.maps.push_back(std::move(t));
  }
  rep.image = EndoSubsemiring(rep.lattice, rep.maps);
  rep.faithful = rep.image.size() == M.ring().size();
  rep.dense = rep.image.dense();
  return rep;
}

/// x ~ y iff I_x = I_y where I_x = { r : r x = 0 }.
inline ModuleCongruence annihilator_congruence(const Semimodule& M) {
  const std::size_t n = M.ring().size();
  std::vector<Bitset> ann(M.size(), Bitset(n));
  for (Elem x = 0; x < M.size(); ++x)
    for (Elem r = 0; r < n; ++r)
      if (M.act(r, x) == M.zero()) ann[x].set(r);
  std::vector<Elem> label(M.size());
  for (Elem x = 0; x < M.size(); ++x) {
    label[x] = x;
    for (Elem y = 0; y < x; ++y)
      if (ann[x] == ann[y]) {
        label[x] = label[y];
        break;
      }
  }
  return Partition::from_labels(label);
}

inline Bitset annihilator(const Semimodule& M, Elem x) {
  Bitset a(M.ring().size());
  for (Elem r = 0; r < M.ring().size(); ++r)
    if (M.act(r, x) == M.zero()) a.set(r);
  return a;
}

/// A = { x : R x = {0} }.
inline Bitset annulator(const Semimodule& M) {
  Bitset a(M.size());
  for (Elem x = 0; x < M.size(); ++x) {
    bool zero = true;
    for (Elem r = 0; r < M.ring().size() && zero; ++r) zero = M.act(r, x) == M.zero();
    if (zero) a.set(x);
  }
  return a;
}

/// x ~ y iff x + a = y + b for some a, b in the annulator.
inline ModuleCongruence annulator_congruence(const Semimodule& M) {
  auto A = annulator(M).members();
  const Elem m = static_cast<Elem>(M.size());
  UnionFind uf(m);
  for (Elem x = 0; x < m; ++x)
    for (Elem y = x + 1; y < m; ++y) {
      bool related = false;
      for (Elem a : A)
        for (Elem b : A)
          if (!related && M.add(x, a) == M.add(y, b)) related = true;
      if (related) uf.unite(x, y);
    }
  return Partition::from_union_find(uf);
}

inline Semimodule annulator_quotient(const Semimodule& M) {
  if (annulator(M).count() == M.size())
    throw Error(ErrorCode::AnnulatorIsEverything, "R M = {0}");
  return quotient_module(M, annulator_congruence(M));
}

struct Commutant {
  EndoSubsemiring members;
  bool is_semifield = false;
  bool is_trivial = false;
};

/// Endomorphisms of (M, +) commuting with every T_r.
inline Commutant commutant(const Semimodule& M, std::size_t limit = 20000) {
  auto L = module_lattice(M);
  auto all = enumerate_endomorphisms(L, limit);
  std::vector<Endomorphism> keep;
  for (const auto& f : all) {
    bool ok = true;
    for (Elem r = 0; r < M.ring().size() && ok; ++r)
      for (Elem x = 0; x < M.size() && ok; ++x) ok = f(M.act(r, x)) == M.act(r, f(x));
    if (ok) keep.push_back(f);
  }
  Commutant c;
  c.members = EndoSubsemiring(L, keep);
  const auto zero = zero_map(L), id = identity_map(L);
  c.is_trivial = c.members.size() == (L.size() == 1 ? 1u : 2u) && c.members.contains(zero) &&
                 c.members.contains(id);
  c.is_semifield = true;
  for (const auto& f : c.members.members()) {
    if (f == zero) continue;
    bool inverse = false;
    for (const auto& g : c.members.members())
      if (compose(f, g) == id && compose(g, f) == id) inverse = true;
    if (!inverse) {
      c.is_semifield = false;
      break;
    }
  }
  return c;
}

/// The left ideal R z for the additively absorbing z, as a subsemimodule of
/// the regular module. Requires idempotent addition and an absorbing element.
inline std::optional<Semimodule> absorbing_ideal_module(std::shared_ptr<const FiniteSemiring> R) {
  auto flags = structure_flags(*R);
  if (!flags.add_idempotent || !flags.absorbing) return std::nullopt;
  Bitset s(R->size());
  for (Elem r = 0; r < R->size(); ++r) s.set(R->mul(r, *flags.absorbing));
  return restrict_module(regular_module(R), s);
}

/// Whether R is isomorphic to a dense subsemiring of End(M) for some finite
/// lattice M. If so M must be R z, on which R acts by left multiplication.
/// Orders 1 and 2 count as realizable.
inline bool is_dense_realizable(std::shared_ptr<const FiniteSemiring> R) {
  if (R->size() <= 2) return true;
  auto M = absorbing_ideal_module(R);
  if (!M) return false;
  auto rep = representation(*M);
  return rep.faithful && rep.dense;
}

}  // namespace simsr
