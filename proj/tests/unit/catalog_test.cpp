#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <set>

#include <unistd.h>

#include "simsr/catalog.hpp"

using namespace simsr;
using namespace simsr::catalog;
namespace fs = std::filesystem;

namespace {

const fs::path kData = SIMSR_DATA_DIR;

Table1Expectation expected() {
  return parse_table1_expectation(io::read_file(kData / "table1_expected.json"));
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag)
      : path_(fs::temp_directory_path() / ("simsr_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp_dir(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& p : files) all += fs::relative(p, dir).string() + "\n" + io::read_file(p);
  return all;
}

// Sums of elementary maps, closed under + only; its size is the dense closure order.
std::size_t elementary_sum_count(const FiniteLattice& L) {
  auto elem = elementary_maps(L);
  std::set<Endomorphism> sums(elem.begin(), elem.end());
  std::vector<Endomorphism> frontier(sums.begin(), sums.end());
  while (!frontier.empty()) {
    std::vector<Endomorphism> next;
    for (const auto& f : frontier)
      for (const auto& e : elem) {
        auto s = add(L, f, e);
        if (sums.insert(s).second) next.push_back(s);
      }
    frontier.swap(next);
  }
  return sums.size();
}

}  // namespace

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (std::size_t jobs : {1u, 3u, 16u}) {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(hits.size(), jobs, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

TEST(ParallelFor, RethrowsWorkerErrors) {
  EXPECT_THROW(parallel_for(10, 2,
                            [](std::size_t i) {
                              if (i == 7) throw Error(ErrorCode::BadTable, "boom");
                            }),
               Error);
}

TEST(FixtureTable, ExpectationParses) {
  auto e = expected();
  ASSERT_EQ(e.rows.size(), 9u);
  EXPECT_EQ(e.rows.back().file, "M3.lat");
  EXPECT_EQ(e.rows.back().sr_orders, (std::vector<std::size_t>{50, 47, 46, 46, 46, 45, 44}));
  EXPECT_EQ(e.orders_without_one, (std::vector<std::size_t>{42, 44}));
  ASSERT_EQ(e.anti_iso_pairs.size(), 1u);
  EXPECT_THROW(parse_table1_expectation("{\"rows\": 3"), std::exception);
}

TEST(FixtureTable, RecomputedRowsMatch) {
  auto res = run_table1(kData / "lattices", expected(), 2);
  EXPECT_TRUE(res.ok());
  for (const auto& m : res.mismatches) ADD_FAILURE() << m;
  EXPECT_EQ(res.rows.size(), 9u);
}

TEST(FixtureTable, DetectsAlteredExpectation) {
  auto e = expected();
  e.rows[7].sr_orders = {43};  // N5 has two members
  e.orders_without_one = {44};
  auto res = run_table1(kData / "lattices", e);
  EXPECT_FALSE(res.ok());
  EXPECT_GE(res.mismatches.size(), 2u);
}

TEST(Analyze, OverBudgetIsReportedNotThrown) {
  AnalyzeOptions o;
  o.sr.max_members = 3;
  auto r = analyze_lattice(fixtures::m3(), o);
  EXPECT_FALSE(r.sr_complete);
  EXPECT_EQ(r.end_order, 50u);
  EXPECT_EQ(r.min_order, 44u);
  auto full = analyze_lattice(fixtures::m3());
  EXPECT_TRUE(full.sr_complete);
  EXPECT_EQ(full.members.size(), 7u);
}

TEST(Analyze, IsoClassesNumberedByFirstAppearance) {
  auto r = analyze_lattice(fixtures::m3());
  std::vector<std::size_t> cls;
  for (const auto& m : r.members) cls.push_back(m.iso_class);
  EXPECT_EQ(cls, (std::vector<std::size_t>{0, 1, 2, 2, 2, 3, 4}));
}

TEST(Entry, RoundTrip) {
  auto e = make_entry(analyze_lattice(fixtures::n5()));
  auto text = serialize_entry(e);
  auto back = parse_entry(text);
  EXPECT_EQ(serialize_entry(back), text);
  EXPECT_EQ(back.members.size(), 2u);
  EXPECT_EQ(content_hash(back.canonical), content_hash(e.canonical));
}

TEST(Entry, HashIgnoresLabelling) {
  auto a = make_entry(analyze_lattice(fixtures::lat50a()));
  auto b = make_entry(analyze_lattice(dual(fixtures::lat50b())));
  EXPECT_EQ(a.canonical, b.canonical);
  auto c = make_entry(analyze_lattice(fixtures::lat50b()));
  EXPECT_NE(content_hash(a.canonical), content_hash(c.canonical));
}

TEST(Catalog, BuildIsDeterministicAcrossJobCounts) {
  TempDir a("cat_a"), b("cat_b");
  BuildOptions o;
  o.max_size = 5;
  auto entries = build_catalog(a.path(), o);
  EXPECT_EQ(entries.size(), 9u);
  o.jobs = 3;
  build_catalog(b.path(), o);
  EXPECT_EQ(slurp_dir(a.path()), slurp_dir(b.path()));
}

TEST(Catalog, QueryUpTo70GivesFixtureOrders) {
  TempDir d("cat_q");
  BuildOptions o;
  o.max_size = 5;
  build_catalog(d.path(), o);
  auto entries = load_catalog(d.path());
  QueryFilter f;
  f.max_order = 70;
  std::multiset<std::size_t> got, want;
  for (const auto& r : query_catalog(entries, f)) got.insert(r.info.order);
  for (const auto& row : expected().rows) want.insert(row.sr_orders.begin(), row.sr_orders.end());
  EXPECT_EQ(got, want);

  f = {};
  f.has_one = false;
  std::multiset<std::size_t> no_one;
  for (const auto& r : query_catalog(entries, f)) no_one.insert(r.info.order);
  EXPECT_EQ(no_one, (std::multiset<std::size_t>{42, 44}));

  f = {};
  f.distributive = true;
  f.lattice_size = 5;
  std::multiset<std::size_t> dist;
  for (const auto& r : query_catalog(entries, f)) dist.insert(r.info.order);
  EXPECT_EQ(dist, (std::multiset<std::size_t>{50, 50, 70}));  // CHAIN5, LAT50A, LAT50B
}

TEST(Catalog, MissingAndStale) {
  TempDir d("cat_s");
  try {
    load_catalog(d.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CatalogMissing);
  }
  BuildOptions o;
  o.max_size = 3;
  build_catalog(d.path(), o);
  EXPECT_EQ(load_catalog(d.path()).size(), 2u);
  auto idx = io::read_file(d.path() / "index.txt");
  io::write_file(d.path() / "index.txt", "version simsr-0.9.0" + idx.substr(idx.find('\n')));
  try {
    load_catalog(d.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StaleVersion);
  }
}

TEST(Catalog, TamperedRecordIsRejected) {
  TempDir d("cat_t");
  BuildOptions o;
  o.max_size = 3;
  build_catalog(d.path(), o);
  for (const auto& e : fs::directory_iterator(d.path() / "records")) {
    auto text = io::read_file(e.path());
    auto pos = text.find("canonical ");
    ASSERT_NE(pos, std::string::npos);
    text[pos + 10] = text[pos + 10] == '0' ? '1' : '0';
    io::write_file(e.path(), text);
    break;
  }
  EXPECT_THROW(load_catalog(d.path()), Error);
}

TEST(MinOrder, NothingBelowSizeSix) {
  auto r = min_order_sweep(5);
  EXPECT_FALSE(r.minimum);
  EXPECT_TRUE(r.complete);
}

TEST(MinOrder, SizeSixAgainstElementarySums) {
  auto r = min_order_sweep(6);
  ASSERT_TRUE(r.minimum);
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.lattices_total, 15u);
  std::size_t oracle = SIZE_MAX;
  for (const auto& L : enumerate_lattices(6))
    if (L.size() == 6) oracle = std::min(oracle, elementary_sum_count(L));
  EXPECT_EQ(*r.minimum, oracle);
  EXPECT_EQ(*r.minimum, 98u);
}
