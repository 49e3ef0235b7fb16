#include <gtest/gtest.h>

#include <set>

#include "simsr/endo.hpp"
#include "simsr/lattice_enum.hpp"
#include "simsr/semiring_iso.hpp"

using namespace simsr;
namespace fx = simsr::fixtures;

namespace {

std::vector<FiniteLattice> small_fixtures() {
  return {fx::l2(), fx::chain(3), fx::chain(4), fx::diamond(), fx::n5(), fx::m3()};
}

// Independent brute force: all n^n maps, filtered by the two equations.
std::size_t brute_force_end_count(const FiniteLattice& L) {
  const std::size_t n = L.size();
  std::vector<Elem> img(n, 0);
  std::size_t count = 0;
  while (true) {
    if (is_endomorphism(L, img)) ++count;
    std::size_t i = 0;
    while (i < n && ++img[i] == n) img[i++] = 0;
    if (i == n) break;
  }
  return count;
}

}  // namespace

TEST(IsEndomorphism, Examples) {
  auto d = fx::diamond();
  EXPECT_TRUE(is_endomorphism(d, {0, 1, 2, 3}));
  EXPECT_FALSE(is_endomorphism(d, {3, 3, 3, 3}));
  EXPECT_TRUE(is_endomorphism(d, {0, 2, 1, 3}));   // swap the atoms
  EXPECT_FALSE(is_endomorphism(d, {0, 1, 1, 3}));  // 1 v 2 = 3 but f(1) v f(2) = 1
  EXPECT_TRUE(is_endomorphism(fx::chain(1), {0}));
}

TEST(EndSemiring, Orders) {
  EXPECT_EQ(end_semiring(fx::l2()).size(), 2u);
  EXPECT_EQ(end_semiring(fx::chain(3)).size(), 6u);
  EXPECT_EQ(end_semiring(fx::diamond()).size(), 16u);
  EXPECT_EQ(end_semiring(fx::chain(4)).size(), 20u);
  EXPECT_EQ(end_semiring(fx::chain(5)).size(), 70u);
  EXPECT_EQ(end_semiring(fx::lat50a()).size(), 50u);
  EXPECT_EQ(end_semiring(fx::m3()).size(), 50u);
  EXPECT_EQ(end_semiring(fx::n5()).size(), 43u);
}

TEST(EndSemiring, MatchesBruteForceCount) {
  for (const auto& L : enumerate_lattices(5)) EXPECT_EQ(end_semiring(L).size(), brute_force_end_count(L)) << L.name();
}

TEST(EndSemiring, TablesValidateAndHaveOne) {
  for (const auto& L : small_fixtures()) {
    auto E = end_semiring(L);
    const auto& R = E.semiring;
    EXPECT_NO_THROW(FiniteSemiring::validate(R.size(), R.add_table(), R.mul_table(), R.zero()));
    EXPECT_EQ(E.elements[R.zero()], zero_map(L));
    EXPECT_EQ(R.zero(), 0u);
    EXPECT_EQ(multiplicative_one(R), std::optional<Elem>(E.identity));
  }
}

TEST(EndSemiring, SizeLimit) {
  try {
    end_semiring(fx::chain(5), 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SizeLimit);
  }
}

TEST(Elementary, TopGivesZeroMap) {
  for (const auto& L : small_fixtures())
    for (Elem b = 0; b < L.size(); ++b) EXPECT_EQ(elementary(L, L.top(), b), zero_map(L));
}

TEST(Elementary, ZeroTopIsAdditivelyAbsorbing) {
  for (const auto& L : small_fixtures()) {
    auto z = elementary(L, L.zero(), L.top());
    for (const auto& h : enumerate_endomorphisms(L)) EXPECT_EQ(add(L, z, h), z);
  }
}

TEST(Elementary, CompositionLaws) {
  for (const auto& L : small_fixtures()) {
    auto all = enumerate_endomorphisms(L);
    for (const auto& f : all)
      for (Elem a = 0; a < L.size(); ++a)
        for (Elem b = 0; b < L.size(); ++b) {
          auto e = elementary(L, a, b);
          EXPECT_TRUE(is_endomorphism(L, e.image));
          EXPECT_EQ(compose(f, e), elementary(L, a, f(b)));
          for (Elem c = 0; c < L.size(); ++c)
            for (Elem d = 0; d < L.size(); ++d) {
              auto lhs = compose(elementary(L, c, d), compose(f, e));
              auto rhs = L.leq(f(b), c) ? zero_map(L) : elementary(L, a, d);
              EXPECT_EQ(lhs, rhs);
            }
        }
  }
}

TEST(DenseClosure, Orders) {
  EXPECT_EQ(dense_closure(fx::chain(3)).size(), 6u);
  EXPECT_EQ(dense_closure(fx::m3()).size(), 44u);
  EXPECT_EQ(dense_closure(fx::n5()).size(), 42u);
  for (const auto& L : small_fixtures()) EXPECT_TRUE(is_dense(dense_closure(L)));
}

TEST(DenseClosure, IsSetOfSumsOfElementaryMaps) {
  for (const auto& L : small_fixtures()) {
    auto elem = elementary_maps(L);
    std::set<Endomorphism> sums(elem.begin(), elem.end());
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<Endomorphism> cur(sums.begin(), sums.end());
      for (const auto& f : cur)
        for (const auto& e : elem) grew |= sums.insert(add(L, f, e)).second;
    }
    auto D = dense_closure(L);
    EXPECT_EQ(std::vector<Endomorphism>(sums.begin(), sums.end()), D.members()) << L.name();
  }
}

TEST(IsDense, Examples) {
  auto L = fx::chain(3);
  EndoSubsemiring s(L, {zero_map(L), identity_map(L)});
  EXPECT_FALSE(is_dense(s));
  EndoSubsemiring full(L, enumerate_endomorphisms(L));
  EXPECT_TRUE(is_dense(full));
}

TEST(EndoSubsemiring, RejectsNonClosedSets) {
  auto L = fx::chain(3);
  EXPECT_THROW(EndoSubsemiring(L, {identity_map(L)}), Error);
  EXPECT_THROW(EndoSubsemiring(L, {zero_map(L), elementary(L, 0, 1), elementary(L, 1, 2)}), Error);
}

TEST(EnumerateSR, Fixtures) {
  auto orders = [](const FiniteLattice& L) {
    std::vector<std::size_t> o;
    for (const auto& s : enumerate_SR(L)) o.push_back(s.size());
    return o;
  };
  EXPECT_EQ(orders(fx::m3()), (std::vector<std::size_t>{50, 47, 46, 46, 46, 45, 44}));
  EXPECT_EQ(orders(fx::chain(5)), (std::vector<std::size_t>{70}));
  EXPECT_EQ(orders(fx::n5()), (std::vector<std::size_t>{43, 42}));
  EXPECT_EQ(orders(fx::lat50b()), (std::vector<std::size_t>{50}));
}

TEST(EnumerateSR, MembersAreClosedDenseAndDistinct) {
  auto L = fx::m3();
  auto sr = enumerate_SR(L);
  std::set<std::vector<Endomorphism>> seen;
  for (const auto& s : sr) {
    EXPECT_TRUE(s.dense());
    EXPECT_TRUE(seen.insert(s.members()).second);
    for (const auto& f : s.members())
      for (const auto& g : s.members()) {
        EXPECT_TRUE(s.contains(add(L, f, g)));
        EXPECT_TRUE(s.contains(compose(f, g)));
      }
  }
}

TEST(EnumerateSR, BaseLimit) {
  SROptions o;
  o.max_sr_base = 40;
  EXPECT_THROW(enumerate_SR(fx::m3(), o), Error);
}

TEST(EnumerateSR, SingletonIffConditionD) {
  for (const auto& L : enumerate_lattices(5)) {
    if (L.size() < 2) continue;
    bool single = enumerate_SR(L).size() == 1;
    EXPECT_EQ(single, condition_D(L)) << L.name();
    EXPECT_EQ(single, sr_is_singleton(L)) << L.name();
    EXPECT_EQ(single, sum_of_elementary_below_identity(L) == identity_map(L)) << L.name();
  }
}

TEST(Transpose, IdentityAndInjectivity) {
  auto d = fx::diamond();
  EXPECT_EQ(transpose(d, identity_map(d)), identity_map(d));
  auto all = enumerate_endomorphisms(d);
  std::set<Endomorphism> images;
  for (const auto& f : all) images.insert(transpose(d, f));
  EXPECT_EQ(images.size(), all.size());
  EXPECT_EQ(enumerate_endomorphisms(dual(d)).size(), all.size());
}

TEST(Transpose, AntiHomomorphismIntoDualEnd) {
  for (const auto& L : small_fixtures()) {
    auto D = dual(L);
    auto all = enumerate_endomorphisms(L);
    std::set<Endomorphism> images;
    for (const auto& f : all) {
      auto ft = transpose(L, f);
      EXPECT_TRUE(is_endomorphism(D, ft.image)) << L.name();
      images.insert(ft);
      for (const auto& g : all) {
        auto gt = transpose(L, g);
        EXPECT_EQ(transpose(L, compose(f, g)), compose(gt, ft));
        EXPECT_EQ(transpose(L, add(L, f, g)), add(D, ft, gt));
      }
    }
    EXPECT_EQ(images.size(), enumerate_endomorphisms(D).size()) << L.name();
  }
}

TEST(Transpose, AgreesWithPrecompositionOnHoms) {
  // e_{f*(a)} = e_a o f under the bijection a -> e_a
  for (const auto& L : {fx::chain(3), fx::diamond(), fx::n5()}) {
    auto H = hom_to_L2(L);
    for (const auto& f : enumerate_endomorphisms(L)) {
      auto ft = transpose(L, f);
      for (Elem a = 0; a < L.size(); ++a) {
        const auto& ea = H.homs[H.e_index[a]];
        std::vector<Elem> pre(L.size());
        for (Elem x = 0; x < L.size(); ++x) pre[x] = ea[f(x)];
        EXPECT_EQ(H.homs[H.e_index[ft(a)]], pre);
      }
    }
  }
}

TEST(Transpose, EndOfDualIsAntiIsomorphic) {
  for (const auto& L : {fx::chain(3), fx::diamond(), fx::lat50a(), fx::n5()}) {
    auto E = end_semiring(L).semiring;
    auto ED = end_semiring(dual(L)).semiring;
    EXPECT_TRUE(semiring_anti_iso(E, ED)) << L.name();
  }
}
