#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "simsr/endo.hpp"
#include "simsr/error.hpp"
#include "simsr/io.hpp"
#include "simsr/lattice.hpp"
#include "simsr/lattice_enum.hpp"
#include "simsr/semiring.hpp"
#include "simsr/semiring_iso.hpp"

namespace simsr::catalog {

inline constexpr const char* kToolVersion = "simsr-1.0.0";

/// Runs body(i) for i in [0, count) on up to `jobs` threads. Results must be
/// written to per-index slots so output order does not depend on scheduling.
inline void parallel_for(std::size_t count, std::size_t jobs,
                         const std::function<void(std::size_t)>& body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < jobs; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < count; i = next++) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct MemberInfo {
  std::size_t order = 0;
  bool has_one = false;
  bool simple = false;
  bool self_anti_iso = false;
  std::size_t iso_class = 0;
};

struct AnalyzeOptions {
  SROptions sr;
  bool check_simplicity = true;
  bool check_isomorphy = true;
};

struct LatticeReport {
  std::string name;
  FiniteLattice lattice;
  std::size_t end_order = 0;
  bool distributive = false;
  bool condition_d = false;
  std::size_t min_order = 0;  // order of the dense closure
  bool sr_complete = false;   // false when the SR family exceeded the budget
  std::vector<MemberInfo> members;

  std::vector<std::size_t> sr_orders() const {
    std::vector<std::size_t> o;
    for (const auto& m : members) o.push_back(m.order);
    return o;
  }
};

/// End(M), SR(M) and per-member flags for one lattice.
inline LatticeReport analyze_lattice(const FiniteLattice& L, const AnalyzeOptions& opt = {},
                                     std::vector<FiniteSemiring>* semirings = nullptr) {
  LatticeReport r;
  r.name = L.name();
  r.lattice = L;
  r.distributive = is_distributive(L);
  r.condition_d = condition_D(L);
  r.end_order = enumerate_endomorphisms(L, opt.sr.max_end_size).size();
  r.min_order = dense_closure(L, opt.sr.max_end_size).size();
  std::vector<EndoSubsemiring> sr;
  try {
    sr = enumerate_SR(L, opt.sr);
    r.sr_complete = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SizeLimit) throw;
    return r;
  }
  std::vector<FiniteSemiring> rings;
  for (const auto& s : sr) rings.push_back(s.to_semiring());
  std::vector<std::size_t> cls(rings.size());
  for (std::size_t i = 0; i < rings.size(); ++i) {
    MemberInfo m;
    m.order = rings[i].size();
    m.has_one = structure_flags(rings[i]).has_one;
    m.simple = opt.check_simplicity ? is_congruence_simple(rings[i]) : true;
    m.iso_class = i;
    if (opt.check_isomorphy) {
      m.self_anti_iso = semiring_anti_iso(rings[i], rings[i]).has_value();
      for (std::size_t j = 0; j < i; ++j)
        if (cls[j] == j && rings[j].size() == rings[i].size() &&
            semiring_iso(rings[j], rings[i])) {
          m.iso_class = j;
          break;
        }
    }
    cls[i] = m.iso_class;
    r.members.push_back(m);
  }
  // renumber iso classes 0,1,2,... by first appearance
  std::map<std::size_t, std::size_t> renum;
  for (auto& m : r.members) {
    auto it = renum.try_emplace(m.iso_class, renum.size()).first;
    m.iso_class = it->second;
  }
  if (semirings) *semirings = std::move(rings);
  return r;
}

// ---------------------------------------------------------------------------
// Fixture table

struct Table1Row {
  std::string file;
  std::vector<std::size_t> sr_orders;
  std::vector<std::size_t> orders_without_one;
  std::vector<std::vector<std::size_t>> iso_groups;  // orders of members that are isomorphic
};

struct Table1Expectation {
  std::vector<Table1Row> rows;
  std::vector<std::pair<std::string, std::string>> anti_iso_pairs;  // End(a) ~anti End(b)
  std::vector<std::string> self_anti_iso_end;
  std::vector<std::size_t> orders_without_one;  // over all rows
};

inline Table1Expectation parse_table1_expectation(const std::string& text) {
  Table1Expectation e;
  auto j = nlohmann::json::parse(text);
  for (const auto& row : j.at("rows")) {
    Table1Row r;
    r.file = row.at("lattice").get<std::string>();
    r.sr_orders = row.at("sr_orders").get<std::vector<std::size_t>>();
    r.orders_without_one = row.value("orders_without_one", std::vector<std::size_t>{});
    r.iso_groups = row.value("iso_groups", std::vector<std::vector<std::size_t>>{});
    e.rows.push_back(std::move(r));
  }
  for (const auto& p : j.at("anti_iso_pairs"))
    e.anti_iso_pairs.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
  e.self_anti_iso_end = j.at("self_anti_iso_end").get<std::vector<std::string>>();
  e.orders_without_one = j.at("orders_without_one").get<std::vector<std::size_t>>();
  return e;
}

struct Table1Result {
  std::vector<LatticeReport> rows;
  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty(); }
};

namespace detail {

inline std::string join_numbers(const std::vector<std::size_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

}  // namespace detail

/// Recomputes every fixture row from the fixture lattices in `lattice_dir`
/// and compares against the expectation.
inline Table1Result run_table1(const std::filesystem::path& lattice_dir,
                               const Table1Expectation& exp, std::size_t jobs = 1) {
  Table1Result res;
  std::vector<FiniteLattice> lattices;
  for (const auto& row : exp.rows)
    lattices.push_back(io::parse_lattice(io::read_file(lattice_dir / row.file)));
  res.rows.resize(lattices.size());
  parallel_for(lattices.size(), jobs,
               [&](std::size_t i) { res.rows[i] = analyze_lattice(lattices[i]); });

  std::vector<std::size_t> without_one_all;
  for (std::size_t i = 0; i < exp.rows.size(); ++i) {
    const auto& e = exp.rows[i];
    const auto& r = res.rows[i];
    auto orders = r.sr_orders();
    if (orders != e.sr_orders)
      res.mismatches.push_back(e.file + ": SR orders " + detail::join_numbers(orders) +
                               ", expected " + detail::join_numbers(e.sr_orders));
    std::vector<std::size_t> no_one;
    for (const auto& m : r.members) {
      if (!m.has_one) no_one.push_back(m.order);
      if (!m.simple)
        res.mismatches.push_back(e.file + ": member of order " + std::to_string(m.order) +
                                 " is not congruence-simple");
    }
    without_one_all.insert(without_one_all.end(), no_one.begin(), no_one.end());
    if (no_one != e.orders_without_one)
      res.mismatches.push_back(e.file + ": members without one " + detail::join_numbers(no_one) +
                               ", expected " + detail::join_numbers(e.orders_without_one));
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (const auto& m : r.members) groups[m.iso_class].push_back(m.order);
    std::vector<std::vector<std::size_t>> found;
    for (auto& [k, g] : groups)
      if (g.size() > 1) found.push_back(g);
    if (found != e.iso_groups) {
      std::string f;
      for (const auto& g : found) f += detail::join_numbers(g);
      res.mismatches.push_back(e.file + ": isomorphic member groups {" + f + "} differ");
    }
  }
  std::sort(without_one_all.begin(), without_one_all.end());
  if (without_one_all != exp.orders_without_one)
    res.mismatches.push_back("orders without one over all rows " +
                             detail::join_numbers(without_one_all) + ", expected " +
                             detail::join_numbers(exp.orders_without_one));

  auto index_of = [&](const std::string& file) -> std::size_t {
    for (std::size_t i = 0; i < exp.rows.size(); ++i)
      if (exp.rows[i].file == file) return i;
    throw Error(ErrorCode::Mismatch, "unknown lattice " + file + " in expectation");
  };
  for (const auto& [a, b] : exp.anti_iso_pairs) {
    auto ea = end_semiring(lattices[index_of(a)]).semiring;
    auto eb = end_semiring(lattices[index_of(b)]).semiring;
    if (!semiring_anti_iso(ea, eb))
      res.mismatches.push_back("End(" + a + ") and End(" + b + ") are not anti-isomorphic");
  }
  for (const auto& f : exp.self_anti_iso_end) {
    auto e = end_semiring(lattices[index_of(f)]).semiring;
    if (!semiring_anti_iso(e, e))
      res.mismatches.push_back("End(" + f + ") is not self-anti-isomorphic");
  }
  return res;
}

inline std::string render_table1(const Table1Expectation& exp, const Table1Result& res) {
  std::ostringstream os;
  os << "lattice      |End|  SR orders                      no one     iso groups\n";
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto& r = res.rows[i];
    std::vector<std::size_t> no_one;
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (const auto& m : r.members) {
      if (!m.has_one) no_one.push_back(m.order);
      groups[m.iso_class].push_back(m.order);
    }
    std::string iso;
    for (auto& [k, g] : groups)
      if (g.size() > 1) iso += detail::join_numbers(g);
    char line[256];
    std::snprintf(line, sizeof line, "%-12s %5zu  %-30s %-10s %s\n", exp.rows[i].file.c_str(),
                  r.end_order, detail::join_numbers(r.sr_orders()).c_str(),
                  detail::join_numbers(no_one).c_str(), iso.empty() ? "-" : iso.c_str());
    os << line;
  }
  os << (res.ok() ? "table1: all values match\n" : "table1: MISMATCH\n");
  for (const auto& m : res.mismatches) os << "  " << m << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Minimum order sweep

struct MinOrderResult {
  std::optional<std::size_t> minimum;  // over lattices of size >= 6
  std::string argmin;
  std::vector<std::pair<std::string, std::size_t>> per_lattice;  // size >= 6 only
  std::size_t lattices_covered = 0;
  std::size_t lattices_total = 0;
  bool complete = true;
};

/// Smallest dense-subsemiring order over lattices of size 6..max_size; every
/// SR(M) family has the dense closure as its least member. Lattices of size
/// <= 5 are the fixture rows and are skipped. `progress` is called after each
/// lattice; a time budget of 0 means unlimited.
inline MinOrderResult min_order_sweep(
    std::size_t max_size, std::size_t max_end_size = 20000, double time_budget_s = 0,
    const std::function<void(const std::string&, std::size_t, std::size_t)>& progress = {}) {
  MinOrderResult res;
  if (max_size < 6) return res;
  EnumerateOptions eo;
  eo.limit = std::max<std::size_t>(eo.limit, max_size);
  auto all = enumerate_lattices(max_size, eo);
  std::vector<FiniteLattice> big;
  for (auto& L : all)
    if (L.size() >= 6) big.push_back(std::move(L));
  res.lattices_total = big.size();
  const auto start = std::chrono::steady_clock::now();
  for (const auto& L : big) {
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (time_budget_s > 0 && elapsed > time_budget_s) {
      res.complete = false;
      break;
    }
    std::size_t k = dense_closure(L, max_end_size).size();
    res.per_lattice.emplace_back(L.name(), k);
    ++res.lattices_covered;
    if (!res.minimum || k < *res.minimum) {
      res.minimum = k;
      res.argmin = L.name();
    }
    if (progress) progress(L.name(), res.lattices_covered, res.lattices_total);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Persistent catalog

inline std::string content_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct CatalogEntry {
  std::string lattice;     // name
  std::string canonical;   // canonical join table, flattened
  std::size_t size = 0;
  std::size_t end_order = 0;
  bool distributive = false;
  std::size_t min_order = 0;
  bool sr_complete = false;
  std::vector<MemberInfo> members;
  std::string version = kToolVersion;
};

inline CatalogEntry make_entry(const LatticeReport& r) {
  CatalogEntry e;
  e.lattice = r.name;
  auto t = simsr::detail::canonical_join_table(r.lattice);
  for (std::size_t i = 0; i < t.size(); ++i) e.canonical += (i ? " " : "") + std::to_string(t[i]);
  e.size = r.lattice.size();
  e.end_order = r.end_order;
  e.distributive = r.distributive;
  e.min_order = r.min_order;
  e.sr_complete = r.sr_complete;
  e.members = r.members;
  return e;
}

/// `key value` lines with keys in sorted order.
inline std::string serialize_entry(const CatalogEntry& e) {
  std::map<std::string, std::string> kv;
  kv["canonical"] = e.canonical;
  kv["distributive"] = e.distributive ? "1" : "0";
  kv["end_order"] = std::to_string(e.end_order);
  kv["lattice"] = e.lattice;
  kv["min_order"] = std::to_string(e.min_order);
  kv["size"] = std::to_string(e.size);
  kv["sr_status"] = e.sr_complete ? "complete" : "over_budget";
  kv["version"] = e.version;
  std::string orders;
  for (std::size_t i = 0; i < e.members.size(); ++i) {
    const auto& m = e.members[i];
    char key[32];
    std::snprintf(key, sizeof key, "member.%03zu", i);
    kv[key] = "order " + std::to_string(m.order) + " has_one " + (m.has_one ? "1" : "0") +
              " simple " + (m.simple ? "1" : "0") + " self_anti_iso " +
              (m.self_anti_iso ? "1" : "0") + " iso_class " + std::to_string(m.iso_class);
    orders += (i ? " " : "") + std::to_string(m.order);
  }
  kv["sr_orders"] = orders;
  std::string out;
  for (const auto& [k, v] : kv) out += k + (v.empty() ? "" : " " + v) + "\n";
  return out;
}

inline CatalogEntry parse_entry(const std::string& text) {
  CatalogEntry e;
  std::istringstream in(text);
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto sp = line.find(' ');
    std::string key = line.substr(0, sp);
    std::string val = sp == std::string::npos ? "" : line.substr(sp + 1);
    auto num = [&] { return io::detail::Reader::parse_number(val, no, key.size() + 2); };
    if (key == "canonical") e.canonical = val;
    else if (key == "distributive") e.distributive = val == "1";
    else if (key == "end_order") e.end_order = num();
    else if (key == "lattice") e.lattice = val;
    else if (key == "min_order") e.min_order = num();
    else if (key == "size") e.size = num();
    else if (key == "sr_status") e.sr_complete = val == "complete";
    else if (key == "version") e.version = val;
    else if (key == "sr_orders") continue;
    else if (key.rfind("member.", 0) == 0) {
      std::istringstream ms(val);
      std::string k;
      MemberInfo m;
      while (ms >> k) {
        std::size_t v;
        ms >> v;
        if (k == "order") m.order = v;
        else if (k == "has_one") m.has_one = v;
        else if (k == "simple") m.simple = v;
        else if (k == "self_anti_iso") m.self_anti_iso = v;
        else if (k == "iso_class") m.iso_class = v;
      }
      e.members.push_back(m);
    } else {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(no) + ": unknown key " + key);
    }
  }
  return e;
}

struct BuildOptions {
  std::size_t max_size = 5;
  std::size_t jobs = 1;
  AnalyzeOptions analyze;
  std::function<void(const std::string&, std::size_t, std::size_t)> progress;
};

/// Writes one record per lattice class (sizes 2..max_size) to
/// `dir/records/<hash>.rec`, where the hash is taken over the canonical join
/// table, plus an index. Identical inputs give identical bytes.
inline std::vector<CatalogEntry> build_catalog(const std::filesystem::path& dir,
                                               const BuildOptions& opt) {
  EnumerateOptions eo;
  eo.limit = std::max<std::size_t>(eo.limit, opt.max_size);
  std::vector<FiniteLattice> lattices;
  for (auto& L : enumerate_lattices(opt.max_size, eo))
    if (L.size() >= 2) lattices.push_back(std::move(L));
  std::vector<CatalogEntry> entries(lattices.size());
  std::atomic<std::size_t> done{0};
  parallel_for(lattices.size(), opt.jobs, [&](std::size_t i) {
    entries[i] = make_entry(analyze_lattice(lattices[i], opt.analyze));
    std::size_t d = ++done;
    if (opt.progress && opt.jobs == 1) opt.progress(lattices[i].name(), d, lattices.size());
  });
  std::filesystem::create_directories(dir / "records");
  std::string index = "version " + std::string(kToolVersion) + "\n";
  for (const auto& e : entries) {
    auto h = content_hash(e.canonical);
    io::write_file(dir / "records" / (h + ".rec"), serialize_entry(e));
    index += h + " " + std::to_string(e.size) + " " + e.lattice + "\n";
  }
  io::write_file(dir / "index.txt", index);
  return entries;
}

struct QueryFilter {
  std::optional<std::size_t> min_order, max_order, lattice_size;
  std::optional<bool> has_one, distributive;
};

struct QueryRow {
  std::string lattice;
  std::size_t lattice_size = 0;
  std::size_t member = 0;
  MemberInfo info;
};

inline std::vector<CatalogEntry> load_catalog(const std::filesystem::path& dir) {
  auto index_path = dir / "index.txt";
  if (!std::filesystem::exists(index_path))
    throw Error(ErrorCode::CatalogMissing, "no catalog index at " + index_path.string());
  std::istringstream in(io::read_file(index_path));
  std::string line;
  std::getline(in, line);
  if (line != "version " + std::string(kToolVersion))
    throw Error(ErrorCode::StaleVersion, "catalog built by '" + line + "', this is " +
                                             kToolVersion);
  std::vector<CatalogEntry> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto h = line.substr(0, line.find(' '));
    auto e = parse_entry(io::read_file(dir / "records" / (h + ".rec")));
    if (e.version != kToolVersion)
      throw Error(ErrorCode::StaleVersion, "record " + h + " has version " + e.version);
    if (content_hash(e.canonical) != h)
      throw Error(ErrorCode::ParseError, "record " + h + " does not match its content hash");
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<QueryRow> query_catalog(const std::vector<CatalogEntry>& entries,
                                           const QueryFilter& f) {
  std::vector<QueryRow> rows;
  for (const auto& e : entries) {
    if (f.lattice_size && e.size != *f.lattice_size) continue;
    if (f.distributive && e.distributive != *f.distributive) continue;
    for (std::size_t i = 0; i < e.members.size(); ++i) {
      const auto& m = e.members[i];
      if (f.min_order && m.order < *f.min_order) continue;
      if (f.max_order && m.order > *f.max_order) continue;
      if (f.has_one && m.has_one != *f.has_one) continue;
      rows.push_back({e.lattice, e.size, i, m});
    }
  }
  return rows;
}

}  // namespace simsr::catalog
