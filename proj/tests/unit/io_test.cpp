#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <functional>

#include "simsr/io.hpp"
#include "simsr/semiring_iso.hpp"

using namespace simsr;
namespace fs = std::filesystem;
namespace fx = simsr::fixtures;

namespace {

const fs::path kData = SIMSR_DATA_DIR;

std::string parse_error(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "no error thrown";
  return {};
}

std::vector<fs::path> files_with(const fs::path& dir, const std::string& ext) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ext) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(LatticeFormat, FixturesRoundTripBitExact) {
  auto files = files_with(kData / "lattices", ".lat");
  ASSERT_EQ(files.size(), 9u);
  for (const auto& p : files) {
    auto text = io::read_file(p);
    auto L = io::parse_lattice(text);
    EXPECT_EQ(io::serialize_lattice(L), text) << p;
    EXPECT_EQ(L.name(), p.stem().string());
  }
}

TEST(LatticeFormat, FixturesMatchBuiltins) {
  std::vector<FiniteLattice> builtin = {fx::l2(),     fx::chain(3), fx::chain(4),
                                        fx::chain(5), fx::diamond(), fx::lat50a(),
                                        fx::lat50b(), fx::n5(),      fx::m3()};
  for (const auto& L : builtin) {
    auto F = io::parse_lattice(io::read_file(kData / "lattices" / (L.name() + ".lat")));
    EXPECT_EQ(F.join_table(), L.join_table()) << L.name();
  }
}

TEST(LatticeFormat, DualIsWrittenWithZeroFirst) {
  auto D = dual(fx::n5());
  auto text = io::serialize_lattice(D);
  auto back = io::parse_lattice(text);
  EXPECT_EQ(back.zero(), 0u);
  EXPECT_TRUE(lattice_iso(back, D));
  EXPECT_EQ(io::serialize_lattice(back), text);
}

TEST(LatticeFormat, NameIsOptional) {
  auto L = io::parse_lattice("n 2\n0 1\n1 1\n");
  EXPECT_EQ(L.name(), "");
  EXPECT_EQ(io::serialize_lattice(L), "n 2\n0 1\n1 1\n");
}

TEST(LatticeFormat, ErrorsCarryLineAndColumn) {
  EXPECT_NE(parse_error([] { io::parse_lattice("n 2\n0 1\n1 x\n"); }).find("line 3, column 3"),
            std::string::npos);
  EXPECT_NE(parse_error([] { io::parse_lattice("n 2\n0 1\n"); }).find("line 3"), std::string::npos);
  EXPECT_NE(parse_error([] { io::parse_lattice("size 2\n"); }).find("line 1"), std::string::npos);
  EXPECT_NE(parse_error([] { io::parse_lattice("n 2\n0 1 1\n1 1\n"); }).find("expected 2 entries"),
            std::string::npos);
  EXPECT_NE(parse_error([] { io::parse_lattice("n 2\n0 1\n1 7\n"); }).find("out of range"),
            std::string::npos);
  EXPECT_NE(parse_error([] { io::parse_lattice("n 2\n0 1\n1 1\nextra\n"); }).find("trailing"),
            std::string::npos);
}

TEST(LatticeFormat, ValidationErrorsAreForwarded) {
  try {
    io::parse_lattice("n 2\n0 1\n1 0\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotIdempotent);
  }
}

TEST(SemiringFormat, FilesRoundTripBitExact) {
  auto files = files_with(kData / "semirings", ".sr");
  ASSERT_GE(files.size(), 4u);
  for (const auto& p : files) {
    auto text = io::read_file(p);
    EXPECT_EQ(io::serialize_semiring(io::parse_semiring(text)), text) << p;
  }
}

TEST(SemiringFormat, EndChain4IsEnd) {
  auto R = io::parse_semiring(io::read_file(kData / "semirings" / "end_chain4.sr"));
  EXPECT_EQ(R.size(), 20u);
  EXPECT_TRUE(semiring_iso(R, end_semiring(fx::chain(4)).semiring));
}

TEST(SemiringFormat, Errors) {
  EXPECT_NE(parse_error([] { io::parse_semiring("n 2\nzero 0\n0 1\n1 1\n0 0\n0 1\n"); })
                .find("line 5"),
            std::string::npos);
  EXPECT_NE(parse_error([] { io::parse_semiring("n 2\nzero 5\n"); }).find("zero index"),
            std::string::npos);
  try {
    io::parse_semiring("n 2\nzero 0\n0 1\n1 1\n\n1 1\n1 1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(e.code(), ErrorCode::ParseError);  // parsed fine, axioms fail
  }
}

TEST(SubsemiringFormat, RoundTripAndResolve) {
  for (const auto& p : files_with(kData / "examples", ".srs")) {
    auto text = io::read_file(p);
    auto f = io::parse_subsemiring(text, io::lattice_resolver_for(p));
    EXPECT_EQ(io::serialize_subsemiring(f.lattice_ref, f.subsemiring), text) << p;
  }
  auto p = kData / "examples" / "dense_m3.srs";
  auto f = io::parse_subsemiring(io::read_file(p), io::lattice_resolver_for(p));
  EXPECT_EQ(f.subsemiring.size(), 44u);
  EXPECT_TRUE(f.subsemiring.dense());
}

TEST(SubsemiringFormat, RejectsNonEndomorphismRows) {
  auto resolve = [](const std::string&) { return fx::chain(3); };
  EXPECT_NE(parse_error([&] { io::parse_subsemiring("lattice x\n0 0 0\n0 2 1\n", resolve); })
                .find("line 3"),
            std::string::npos);
  for (const char* text : {"lattice x\n0 0 0\n0 1 1\n0 0 2\n",  // sum 0 1 2 missing
                           "lattice x\n0 1 2\n"}) {              // no zero map
    try {
      io::parse_subsemiring(text, resolve);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::BadTable);
    }
  }
}

TEST(SemimoduleFormat, RoundTripAndResolve) {
  for (const auto& p : files_with(kData / "examples", ".smod")) {
    auto text = io::read_file(p);
    auto f = io::parse_semimodule(text, io::semiring_resolver_for(p));
    EXPECT_EQ(io::serialize_semimodule(f.semiring_ref, f.module), text) << p;
  }
}

TEST(SemimoduleFormat, Errors) {
  auto resolve = [](const std::string&) { return semirings::r2b(); };
  EXPECT_NE(parse_error([&] { io::parse_semimodule("semiring r\nm 2\nzero 0\n0 1\n1 1\n0 0\n", resolve); })
                .find("line 6"),
            std::string::npos);
  try {
    io::parse_semimodule("semiring r\nm 2\nzero 0\n0 1\n1 1\n\n0 1\n0 1\n", resolve);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ActionZeroRing);
  }
}

TEST(Files, MissingFileIsParseError) {
  parse_error([] { io::read_file("/nonexistent/file.lat"); });
}
