#pragma once

// Text formats. All are line oriented, single-space separated, '\n' terminated.
//
//   .lat   n <count> / [name <string>] / n rows of the join table (zero = index 0)
//   .sr    n <count> / [name <string>] / zero <index> / n add rows / blank / n mul rows
//   .srs   lattice <file> / one row of n indices per member endomorphism
//   .smod  semiring <file> / m <count> / zero <index> / m add rows / blank / |R| action rows

#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "simsr/endo.hpp"
#include "simsr/error.hpp"
#include "simsr/lattice.hpp"
#include "simsr/semimodule.hpp"
#include "simsr/semiring.hpp"

namespace simsr::io {

namespace detail {

struct Line {
  std::size_t number = 0;  // 1-based
  std::string text;
};

[[noreturn]] inline void fail(std::size_t line, std::size_t col, const std::string& msg) {
  throw Error(ErrorCode::ParseError,
              "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
}

class Reader {
 public:
  explicit Reader(std::string_view text) {
    std::size_t no = 1, start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i == text.size() || text[i] == '\n') {
        if (i == text.size() && start == i) break;
        std::string l(text.substr(start, i - start));
        if (!l.empty() && l.back() == '\r') l.pop_back();
        lines_.push_back({no++, std::move(l)});
        start = i + 1;
      }
    }
  }

  bool done() const { return pos_ >= lines_.size(); }
  std::size_t line_no() const { return done() ? lines_.size() + 1 : lines_[pos_].number; }
  const Line& peek() const {
    if (done()) fail(line_no(), 1, "unexpected end of file");
    return lines_[pos_];
  }
  const Line& next() {
    const Line& l = peek();
    ++pos_;
    return l;
  }

  /// `key value` line; returns value.
  std::string keyed(std::string_view key) {
    const Line& l = next();
    auto sp = l.text.find(' ');
    if (l.text.substr(0, sp) != key) fail(l.number, 1, "expected '" + std::string(key) + "'");
    if (sp == std::string::npos || sp + 1 >= l.text.size())
      fail(l.number, l.text.size() + 1, "missing value after '" + std::string(key) + "'");
    return l.text.substr(sp + 1);
  }

  bool peek_key(std::string_view key) const {
    if (done()) return false;
    const auto& t = lines_[pos_].text;
    return t.rfind(std::string(key) + " ", 0) == 0;
  }

  std::size_t keyed_count(std::string_view key) {
    std::size_t no = line_no();
    std::string v = keyed(key);
    return parse_number(v, no, key.size() + 2);
  }

  /// A row of exactly `width` indices, each < bound.
  std::vector<Elem> row(std::size_t width, std::size_t bound) {
    const Line& l = next();
    std::vector<Elem> out;
    std::size_t i = 0;
    const auto& t = l.text;
    while (i < t.size()) {
      if (t[i] == ' ') {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < t.size() && t[j] != ' ') ++j;
      std::size_t v = parse_number(t.substr(i, j - i), l.number, i + 1);
      if (v >= bound)
        fail(l.number, i + 1, "index " + std::to_string(v) + " out of range (< " +
                                  std::to_string(bound) + ")");
      out.push_back(static_cast<Elem>(v));
      i = j;
    }
    if (out.size() != width)
      fail(l.number, 1, "expected " + std::to_string(width) + " entries, found " +
                            std::to_string(out.size()));
    return out;
  }

  void blank() {
    const Line& l = next();
    if (!l.text.empty()) fail(l.number, 1, "expected a blank line");
  }

  void expect_end() {
    if (!done()) fail(line_no(), 1, "trailing content");
  }

  static std::size_t parse_number(std::string_view s, std::size_t line, std::size_t col) {
    if (s.empty()) fail(line, col, "expected a number");
    std::size_t v = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s[k] < '0' || s[k] > '9') fail(line, col + k, "expected a digit");
      v = v * 10 + static_cast<std::size_t>(s[k] - '0');
      if (v > 100'000'000) fail(line, col, "number too large");
    }
    return v;
  }

 private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

inline void write_rows(std::ostringstream& os, const std::vector<Elem>& t, std::size_t rows,
                       std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) os << (j ? " " : "") << t[i * cols + j];
    os << '\n';
  }
}

}  // namespace detail

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + p.string());
  out << text;
}

// --- .lat -------------------------------------------------------------------

inline FiniteLattice parse_lattice(std::string_view text) {
  detail::Reader r(text);
  std::size_t n = r.keyed_count("n");
  if (n == 0) detail::fail(1, 3, "n must be positive");
  std::string name;
  if (r.peek_key("name")) name = r.keyed("name");
  std::vector<Elem> join;
  std::size_t first_row = r.line_no();
  for (std::size_t i = 0; i < n; ++i) {
    auto row = r.row(n, n);
    join.insert(join.end(), row.begin(), row.end());
  }
  r.expect_end();
  try {
    return FiniteLattice::validate(n, std::move(join), 0, std::move(name));
  } catch (const Error& e) {
    throw Error(e.code(), "lattice table starting at line " + std::to_string(first_row) + ": " +
                              e.what());
  }
}

/// Zero must be written as index 0; a lattice with another zero (a dual, say)
/// is written with indices 0 and zero exchanged.
inline std::string serialize_lattice(const FiniteLattice& L) {
  const std::size_t n = L.size();
  std::vector<Elem> perm(n);
  for (Elem i = 0; i < n; ++i) perm[i] = i;
  std::swap(perm[0], perm[L.zero()]);
  std::vector<Elem> t(n * n);
  for (Elem i = 0; i < n; ++i)
    for (Elem j = 0; j < n; ++j) t[perm[i] * n + perm[j]] = perm[L.join(i, j)];
  std::ostringstream os;
  os << "n " << n << '\n';
  if (!L.name().empty()) os << "name " << L.name() << '\n';
  detail::write_rows(os, t, n, n);
  return os.str();
}

// --- .sr --------------------------------------------------------------------

inline FiniteSemiring parse_semiring(std::string_view text) {
  detail::Reader r(text);
  std::size_t n = r.keyed_count("n");
  if (n == 0) detail::fail(1, 3, "n must be positive");
  std::string name;
  if (r.peek_key("name")) name = r.keyed("name");
  std::size_t zline = r.line_no();
  std::size_t zero = r.keyed_count("zero");
  if (zero >= n) detail::fail(zline, 6, "zero index out of range");
  std::vector<Elem> add, mul;
  for (std::size_t i = 0; i < n; ++i) {
    auto row = r.row(n, n);
    add.insert(add.end(), row.begin(), row.end());
  }
  r.blank();
  for (std::size_t i = 0; i < n; ++i) {
    auto row = r.row(n, n);
    mul.insert(mul.end(), row.begin(), row.end());
  }
  r.expect_end();
  return FiniteSemiring::validate(n, std::move(add), std::move(mul), static_cast<Elem>(zero),
                                  std::move(name));
}

inline std::string serialize_semiring(const FiniteSemiring& R) {
  std::ostringstream os;
  os << "n " << R.size() << '\n';
  if (!R.name().empty()) os << "name " << R.name() << '\n';
  os << "zero " << R.zero() << '\n';
  detail::write_rows(os, R.add_table(), R.size(), R.size());
  os << '\n';
  detail::write_rows(os, R.mul_table(), R.size(), R.size());
  return os.str();
}

// --- .srs -------------------------------------------------------------------

struct SubsemiringFile {
  std::string lattice_ref;
  EndoSubsemiring subsemiring;
};

using LatticeResolver = std::function<FiniteLattice(const std::string&)>;

inline SubsemiringFile parse_subsemiring(std::string_view text, const LatticeResolver& resolve) {
  detail::Reader r(text);
  SubsemiringFile f;
  f.lattice_ref = r.keyed("lattice");
  FiniteLattice L = resolve(f.lattice_ref);
  std::vector<Endomorphism> members;
  while (!r.done()) {
    std::size_t no = r.line_no();
    Endomorphism e{r.row(L.size(), L.size())};
    if (!is_endomorphism(L, e.image)) detail::fail(no, 1, "row is not an endomorphism");
    members.push_back(std::move(e));
  }
  f.subsemiring = EndoSubsemiring(std::move(L), std::move(members));
  return f;
}

inline std::string serialize_subsemiring(const std::string& lattice_ref,
                                         const EndoSubsemiring& S) {
  std::ostringstream os;
  os << "lattice " << lattice_ref << '\n';
  for (const auto& f : S.members()) {
    for (std::size_t i = 0; i < f.size(); ++i) os << (i ? " " : "") << f.image[i];
    os << '\n';
  }
  return os.str();
}

// --- .smod ------------------------------------------------------------------

struct SemimoduleFile {
  std::string semiring_ref;
  Semimodule module;
};

using SemiringResolver = std::function<FiniteSemiring(const std::string&)>;

inline SemimoduleFile parse_semimodule(std::string_view text, const SemiringResolver& resolve) {
  detail::Reader r(text);
  SemimoduleFile f;
  f.semiring_ref = r.keyed("semiring");
  auto R = std::make_shared<const FiniteSemiring>(resolve(f.semiring_ref));
  std::size_t m = r.keyed_count("m");
  if (m == 0) detail::fail(r.line_no() - 1, 3, "m must be positive");
  std::size_t zline = r.line_no();
  std::size_t zero = r.keyed_count("zero");
  if (zero >= m) detail::fail(zline, 6, "zero index out of range");
  std::vector<Elem> madd, act;
  for (std::size_t i = 0; i < m; ++i) {
    auto row = r.row(m, m);
    madd.insert(madd.end(), row.begin(), row.end());
  }
  r.blank();
  for (std::size_t i = 0; i < R->size(); ++i) {
    auto row = r.row(m, m);
    act.insert(act.end(), row.begin(), row.end());
  }
  r.expect_end();
  f.module = Semimodule::validate(std::move(R), m, std::move(madd), std::move(act),
                                  static_cast<Elem>(zero));
  return f;
}

inline std::string serialize_semimodule(const std::string& semiring_ref, const Semimodule& M) {
  std::ostringstream os;
  os << "semiring " << semiring_ref << '\n';
  os << "m " << M.size() << '\n';
  os << "zero " << M.zero() << '\n';
  detail::write_rows(os, M.add_table(), M.size(), M.size());
  os << '\n';
  detail::write_rows(os, M.act_table(), M.ring().size(), M.size());
  return os.str();
}

/// Resolves references relative to the directory of the referring file.
inline LatticeResolver lattice_resolver_for(const std::filesystem::path& referrer) {
  auto dir = referrer.parent_path();
  return [dir](const std::string& ref) { return parse_lattice(read_file(dir / ref)); };
}

inline SemiringResolver semiring_resolver_for(const std::filesystem::path& referrer) {
  auto dir = referrer.parent_path();
  return [dir](const std::string& ref) { return parse_semiring(read_file(dir / ref)); };
}

}  // namespace simsr::io
