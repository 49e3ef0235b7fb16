// simsr: command-line front end for the finite semiring toolkit.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "simsr/simsr.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace simsr;

namespace {

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kUsage = 2;

struct Globals {
  std::size_t max_end_size = 20000;
  std::size_t max_sr_base = 512;
  std::size_t max_sr_members = 20000;
  std::size_t jobs = 1;
  std::string format = "text";
  std::string data_dir = SIMSR_DATA_DIR;

  bool json() const { return format == "json"; }
  SROptions sr() const {
    SROptions o;
    o.max_end_size = max_end_size;
    o.max_sr_base = max_sr_base;
    o.max_members = max_sr_members;
    return o;
  }
};

json member_json(const catalog::MemberInfo& m) {
  return {{"order", m.order},
          {"has_one", m.has_one},
          {"simple", m.simple},
          {"self_anti_iso", m.self_anti_iso},
          {"iso_class", m.iso_class}};
}

json report_json(const catalog::LatticeReport& r) {
  json members = json::array();
  for (const auto& m : r.members) members.push_back(member_json(m));
  return {{"lattice", r.name},
          {"size", r.lattice.size()},
          {"end_order", r.end_order},
          {"distributive", r.distributive},
          {"condition_d", r.condition_d},
          {"min_order", r.min_order},
          {"sr_status", r.sr_complete ? "complete" : "over_budget"},
          {"sr_orders", r.sr_orders()},
          {"members", members}};
}

int cmd_table1(const Globals& g) {
  fs::path dir(g.data_dir);
  auto exp = catalog::parse_table1_expectation(io::read_file(dir / "table1_expected.json"));
  auto res = catalog::run_table1(dir / "lattices", exp, g.jobs);
  if (g.json()) {
    json rows = json::array();
    for (const auto& r : res.rows) rows.push_back(report_json(r));
    std::cout << json{{"command", "table1"},
                      {"match", res.ok()},
                      {"rows", rows},
                      {"mismatches", res.mismatches}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << catalog::render_table1(exp, res);
  }
  return res.ok() ? kOk : kMismatch;
}

int cmd_min_order(const Globals& g, std::size_t max_size, double budget) {
  auto progress = [&](const std::string& name, std::size_t done, std::size_t total) {
    std::cerr << "[" << done << "/" << total << "] " << name << '\n';
  };
  auto res = catalog::min_order_sweep(max_size, g.max_end_size, budget, progress);
  if (g.json()) {
    json per = json::array();
    for (const auto& [name, k] : res.per_lattice) per.push_back({{"lattice", name}, {"min_order", k}});
    json out = {{"command", "min-order"},
                {"max_size", max_size},
                {"complete", res.complete},
                {"lattices_covered", res.lattices_covered},
                {"lattices_total", res.lattices_total},
                {"per_lattice", per}};
    out["minimum"] = res.minimum ? json(*res.minimum) : json(nullptr);
    out["argmin"] = res.minimum ? json(res.argmin) : json(nullptr);
    std::cout << out.dump(2) << '\n';
  } else {
    for (const auto& [name, k] : res.per_lattice) std::cout << name << " " << k << '\n';
    if (res.minimum)
      std::cout << "minimum " << *res.minimum << " (" << res.argmin << ")\n";
    else
      std::cout << "minimum none (no lattices of size >= 6 covered)\n";
    if (!res.complete)
      std::cout << "partial: covered " << res.lattices_covered << " of " << res.lattices_total
                << " lattices before the time budget ran out\n";
  }
  return kOk;
}

/// Looks for a fixture lattice isomorphic to L and returns its name.
std::optional<std::string> fixture_name(const Globals& g, const FiniteLattice& L) {
  fs::path dir = fs::path(g.data_dir) / "lattices";
  if (!fs::is_directory(dir)) return std::nullopt;
  auto want = canonical_form(L).join_table();
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".lat") continue;
    auto F = io::parse_lattice(io::read_file(entry.path()));
    if (F.size() == L.size() && canonical_form(F).join_table() == want) return F.name();
  }
  return std::nullopt;
}

json check_lattice(const Globals& g, const FiniteLattice& L, std::ostream& os) {
  auto E = enumerate_endomorphisms(L, g.max_end_size);
  auto D = dense_closure(L, g.max_end_size);
  json j = {{"kind", "lattice"},
            {"name", L.name()},
            {"size", L.size()},
            {"top", L.top()},
            {"distributive", is_distributive(L)},
            {"condition_d", condition_D(L)},
            {"end_order", E.size()},
            {"min_order", D.size()},
            {"sr_singleton", D.size() == E.size()}};
  os << "lattice " << (L.name().empty() ? "(unnamed)" : L.name()) << ": " << L.size()
     << " elements, top " << L.top() << '\n'
     << (j["distributive"].get<bool>() ? "distributive" : "not distributive") << ", condition (D) "
     << (j["condition_d"].get<bool>() ? "holds" : "fails") << '\n'
     << "|End| = " << E.size() << ", dense closure order " << D.size() << '\n';
  return j;
}

json check_semiring(const Globals& g, std::shared_ptr<const FiniteSemiring> R, std::ostream& os) {
  auto flags = structure_flags(*R);
  bool simple = is_congruence_simple(*R);
  json j = {{"kind", "semiring"},
            {"name", R->name()},
            {"order", R->size()},
            {"is_ring", flags.is_ring},
            {"add_idempotent", flags.add_idempotent},
            {"has_one", flags.has_one},
            {"trivial_mul", flags.trivial_mul},
            {"simple", simple}};
  os << "semiring " << (R->name().empty() ? "(unnamed)" : R->name()) << '\n';
  os << "flags: " << (flags.add_idempotent ? "additively idempotent" : "not additively idempotent")
     << ", " << (flags.has_one ? "has one" : "no one")
     << (flags.trivial_mul ? ", trivial multiplication" : "") << '\n';
  os << (simple ? "congruence-simple" : "not congruence-simple") << ", "
     << (flags.is_ring ? "a ring" : "not a ring") << ", |R| = " << R->size() << '\n';
  if (!simple) {
    auto w = proper_congruence_witness(*R);
    j["proper_congruence"] = {w->first, w->second};
    os << "proper congruence generated by (" << w->first << ", " << w->second << ")\n";
    return j;
  }
  if (flags.is_ring || R->size() <= 2 || flags.trivial_mul) return j;

  json wit = {{"realizable", false}};
  auto lat = recover_monoid(*R);
  if (lat) {
    auto M = find_irreducible(R);
    auto rep = representation(M);
    bool same = lattice_iso(*lat, rep.lattice).has_value();
    auto fx = fixture_name(g, *lat);
    wit = {{"realizable", rep.faithful && rep.dense},
           {"lattice_size", lat->size()},
           {"lattice_fixture", fx ? json(*fx) : json(nullptr)},
           {"module_size", M.size()},
           {"faithful", rep.faithful},
           {"dense", rep.dense},
           {"module_lattice_matches", same}};
    os << "witness: lattice Rz with " << lat->size() << " elements"
       << (fx ? " (isomorphic to " + *fx + ")" : std::string()) << '\n'
       << "irreducible module of size " << M.size() << ": "
       << (rep.faithful ? "faithful" : "not faithful") << ", "
       << (rep.dense ? "dense" : "not dense") << '\n';
  } else {
    os << "witness: no additively absorbing element, no lattice to recover\n";
  }
  j["witness"] = wit;
  return j;
}

int cmd_check(const Globals& g, const fs::path& path) {
  std::ostringstream os;
  json j;
  auto ext = path.extension().string();
  if (ext == ".lat") {
    j = check_lattice(g, io::parse_lattice(io::read_file(path)), os);
  } else if (ext == ".sr") {
    j = check_semiring(g, std::make_shared<const FiniteSemiring>(io::parse_semiring(io::read_file(path))), os);
  } else if (ext == ".srs") {
    auto f = io::parse_subsemiring(io::read_file(path), io::lattice_resolver_for(path));
    const auto& S = f.subsemiring;
    os << "subsemiring of End(" << f.lattice_ref << ") with " << S.size() << " members, "
       << (S.dense() ? "dense" : "not dense") << '\n';
    j = check_semiring(g, std::make_shared<const FiniteSemiring>(S.to_semiring()), os);
    j["kind"] = "subsemiring";
    j["lattice"] = f.lattice_ref;
    j["dense"] = S.dense();
  } else if (ext == ".smod") {
    auto f = io::parse_semimodule(io::read_file(path), io::semiring_resolver_for(path));
    auto irr = irreducibility(f.module);
    j = {{"kind", "semimodule"},
         {"semiring", f.semiring_ref},
         {"size", f.module.size()},
         {"acts_nonzero", irr.acts_nonzero},
         {"sub_irreducible", irr.sub_irreducible},
         {"quotient_irreducible", irr.quotient_irreducible},
         {"irreducible", irr.irreducible}};
    os << "semimodule over " << f.semiring_ref << " with " << f.module.size() << " elements\n"
       << (irr.irreducible ? "irreducible" : "not irreducible")
       << " (sub-irreducible " << (irr.sub_irreducible ? "yes" : "no") << ", quotient-irreducible "
       << (irr.quotient_irreducible ? "yes" : "no") << ")\n";
  } else {
    throw CLI::ValidationError("check", "unknown file type '" + ext + "' (want .lat, .sr, .srs, .smod)");
  }
  if (g.json()) {
    j["command"] = "check";
    j["file"] = path.string();
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << os.str();
  }
  return kOk;
}

int cmd_catalog_build(const Globals& g, std::size_t max_size, const fs::path& out) {
  catalog::BuildOptions opt;
  opt.max_size = max_size;
  opt.jobs = g.jobs;
  opt.analyze.sr = g.sr();
  opt.progress = [](const std::string& name, std::size_t done, std::size_t total) {
    std::cerr << "[" << done << "/" << total << "] " << name << '\n';
  };
  auto entries = catalog::build_catalog(out, opt);
  std::size_t over = 0;
  for (const auto& e : entries) over += !e.sr_complete;
  if (g.json()) {
    std::cout << json{{"command", "catalog build"},
                      {"out", out.string()},
                      {"entries", entries.size()},
                      {"over_budget", over}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << "wrote " << entries.size() << " records to " << out.string();
    if (over) std::cout << " (" << over << " over the SR member budget)";
    std::cout << '\n';
  }
  return kOk;
}

int cmd_catalog_query(const Globals& g, const fs::path& out, const catalog::QueryFilter& f) {
  auto rows = catalog::query_catalog(catalog::load_catalog(out), f);
  if (g.json()) {
    json arr = json::array();
    for (const auto& r : rows) {
      auto m = member_json(r.info);
      m["lattice"] = r.lattice;
      m["lattice_size"] = r.lattice_size;
      m["member"] = r.member;
      arr.push_back(m);
    }
    std::cout << json{{"command", "catalog query"}, {"rows", arr}}.dump(2) << '\n';
  } else {
    for (const auto& r : rows)
      std::cout << r.lattice << " " << r.member << " order " << r.info.order << " has_one "
                << r.info.has_one << " iso_class " << r.info.iso_class << '\n';
    std::cout << rows.size() << " rows\n";
  }
  return kOk;
}

std::optional<bool> parse_bool(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw CLI::ValidationError("expected true or false, got '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Congruence-simple semirings from finite lattices"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--max-end-size", g.max_end_size, "Limit on |End(M)|")->capture_default_str();
  app.add_option("--max-sr-base", g.max_sr_base, "Limit on |End(M)| minus the dense closure order")
      ->capture_default_str();
  app.add_option("--max-sr-members", g.max_sr_members, "Limit on members of one SR(M) family")
      ->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads for sweeps")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Output format")->capture_default_str()
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--data", g.data_dir, "Directory holding lattices/ and table1_expected.json")
      ->capture_default_str();

  auto* table1 = app.add_subcommand("table1", "Recompute the fixture table and compare with the expected values");

  auto* min_order = app.add_subcommand("min-order", "Smallest dense subsemiring order over lattices of size >= 6");
  std::size_t max_size = 6;
  double budget = 0;
  min_order->add_option("--max-size", max_size, "Largest lattice size to sweep")->required();
  min_order->add_option("--time-budget", budget, "Stop after this many seconds (0 = none)");

  auto* check = app.add_subcommand("check", "Validate and describe a .lat, .sr, .srs or .smod file");
  std::string file;
  check->add_option("FILE", file)->required();

  auto* cat = app.add_subcommand("catalog", "Persistent catalog of SR families");
  cat->require_subcommand(1);
  auto* build = cat->add_subcommand("build", "Enumerate lattices and write the catalog");
  std::size_t build_size = 5;
  std::string out_dir;
  build->add_option("--max-size", build_size, "Largest lattice size")->required();
  build->add_option("--out", out_dir, "Catalog directory")->required();
  auto* query = cat->add_subcommand("query", "Filter catalog members");
  query->add_option("--out", out_dir, "Catalog directory")->required();
  catalog::QueryFilter filter;
  std::string has_one, distributive;
  query->add_option("--min-order", filter.min_order, "Smallest member order");
  query->add_option("--max-order", filter.max_order, "Largest member order");
  query->add_option("--lattice-size", filter.lattice_size, "Exact lattice size");
  query->add_option("--has-one", has_one, "true or false");
  query->add_option("--distributive", distributive, "true or false");

  try {
    app.parse(argc, argv);
    filter.has_one = parse_bool(has_one);
    filter.distributive = parse_bool(distributive);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*table1) return cmd_table1(g);
    if (*min_order) return cmd_min_order(g, max_size, budget);
    if (*check) return cmd_check(g, file);
    if (*build) return cmd_catalog_build(g, build_size, out_dir);
    if (*query) return cmd_catalog_query(g, out_dir, filter);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::Mismatch ? kMismatch : kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
