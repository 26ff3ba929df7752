// Command line surface over the discriminant-6 Shimura curve toolkit:
// class data, Heegner polynomials, structural checks, the superspecial
// certificate search, certificate verification, and the equidistribution
// diagnostic.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "e6/arith.hpp"
#include "e6/checks.hpp"
#include "e6/quadorder.hpp"
#include "e6/quaternion.hpp"
#include "e6/search.hpp"
#include "e6/uniformizer.hpp"

using namespace e6;
using nlohmann::json;

namespace {

struct Config {
  int precision = 50;
  long l_max = 5000;
  long height_cap = 1024;
  std::string table_path;
  bool emit_json = false;
};

const MaximalOrder& the_order() {
  static MaximalOrder ord = MaximalOrder::build();
  return ord;
}

const TriangleUniformizer& uni(const Config& cfg) {
  static std::map<int, std::unique_ptr<TriangleUniformizer>> cache;
  auto& slot = cache[cfg.precision];
  if (!slot) slot = std::make_unique<TriangleUniformizer>(the_order(), cfg.precision);
  return *slot;
}

std::string table_path_or_env(const Config& cfg) {
  if (!cfg.table_path.empty()) return cfg.table_path;
  const char* env = std::getenv("E6_TABLE_PATH");
  return env ? std::string(env) : std::string();
}

HeegnerTable open_table(const Config& cfg) {
  HeegnerTable t(table_path_or_env(cfg));
  t.load();
  return t;
}

const char* shape_name(ModShape s) {
  switch (s) {
    case ModShape::XPowH: return "x^h'";
    case ModShape::MinusXPowH: return "-x^h'";
    case ModShape::One: return "1";
    case ModShape::MinusOne: return "-1";
    case ModShape::Other: return "other";
  }
  return "?";
}

int cmd_classdata(const Config& cfg, long D) {
  QuadOrderData qd = quad_order_data(D);
  json j;
  j["D"] = D;
  j["h"] = qd.h;
  j["conductor"] = qd.conductor.get_str();
  j["eichler_2"] = qd.eichler_2;
  j["eichler_3"] = qd.eichler_3;
  j["s"] = qd.s;
  j["w2_size"] = qd.w2_size;
  j["h_prime"] = qd.h_prime.get_str();
  j["h_prime_integral"] = qd.h_prime_integral;
  Family fam;
  long l;
  bool in_family = family_of(D, &fam, &l);
  if (D == -3 || D == -4 || D == -24) {
    j["note"] = "elliptic anchor point; excluded from the Heegner polynomial families";
  } else if (qd.s == 0) {
    j["note"] = "no CM points on the curve: s vanishes";
  }
  if (in_family) {
    ParityCheck pc = parity_check(fam, l);
    j["parity_consistent"] = pc.consistent;
    j["parity_detail"] = pc.detail;
  }
  if (cfg.emit_json) {
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "D = " << D << "\n"
              << "  h            = " << qd.h << "\n"
              << "  conductor    = " << qd.conductor.get_str() << "\n"
              << "  eichler(2)   = " << qd.eichler_2 << "\n"
              << "  eichler(3)   = " << qd.eichler_3 << "\n"
              << "  s            = " << qd.s << "\n"
              << "  #W''         = " << qd.w2_size << "\n"
              << "  h'           = " << qd.h_prime.get_str()
              << (qd.h_prime_integral ? "" : "  (non-integral)") << "\n";
    if (j.contains("note")) std::cout << "  note: " << j["note"].get<std::string>() << "\n";
    if (j.contains("parity_detail"))
      std::cout << "  parity: " << j["parity_detail"].get<std::string>() << " ["
                << (j["parity_consistent"].get<bool>() ? "consistent" : "violation") << "]\n";
  }
  if (in_family && !j["parity_consistent"].get<bool>()) return 1;
  return 0;
}

int cmd_cmpoly(const Config& cfg, long D) {
  HeegnerTable table = open_table(cfg);
  const TriangleUniformizer& u = uni(cfg);
  HeegnerPolynomial p;
  if (!(table.lookup(D, &p) && p.fingerprint == u.fingerprint() && p.digits >= cfg.precision)) {
    p = heegner_poly(u, D);
    table.put(p, !table.path().empty());
  }
  if (cfg.emit_json) {
    json j = json::parse(heegner_to_json(p));
    j["iota_fingerprint"] = u.fingerprint();
    j["iota"] = "i -> [[0,-1],[1,0]], j -> [[sqrt3,0],[0,-sqrt3]]";
    std::cout << j.dump() << "\n";
  } else {
    QPoly q = qpoly_of(p);
    std::cout << "P_" << D << "(x) = " << poly_to_string(q) << "\n"
              << "  degree  = " << p.h_prime << "\n"
              << "  scaling = " << p.b.get_str() << "\n"
              << "  digits  = " << p.digits << "\n";
  }
  return 0;
}

int cmd_checks(const Config& cfg, long D) {
  HeegnerTable table = open_table(cfg);
  const TriangleUniformizer& u = uni(cfg);
  HeegnerPolynomial p;
  if (!(table.lookup(D, &p) && p.fingerprint == u.fingerprint())) {
    p = heegner_poly(u, D);
    table.put(p, !table.path().empty());
  }
  ChecksReport r = run_checks(p);
  if (!r.family_known) {
    std::cerr << "D is not of the form -4l, -l, -3l with l prime in the right class mod 24\n";
    return 2;
  }
  json j;
  j["D"] = D;
  j["l"] = r.l;
  j["mod2"] = {{"got", shape_name(r.mod2.shape)}, {"residue", r.mod2.residue}, {"ok", r.mod2_ok}};
  j["mod3"] = {{"got", shape_name(r.mod3.shape)}, {"residue", r.mod3.residue}, {"ok", r.mod3_ok}};
  std::vector<uint64_t> rs = r.unpaired.residues;
  j["unpaired"] = {{"residues", rs}, {"at_infinity", r.unpaired.at_infinity}, {"ok", r.unpaired_ok}};
  j["intervals"] = {{"I1", r.profile.n1}, {"I2", r.profile.n2}, {"I3", r.profile.n3},
                    {"ok", r.profile_ok}};
  j["all_ok"] = r.all_ok();
  if (cfg.emit_json) {
    std::cout << j.dump() << "\n";
  } else {
    FamilyExpectation e = family_expectation(r.fam);
    const char* famname = r.fam == Family::MinusFourL ? "-4l, l = 13 mod 24"
                          : r.fam == Family::MinusL   ? "-l, l = 19 mod 24"
                                                      : "-3l, l = 1 mod 24";
    std::cout << "D = " << D << "  (family " << famname << ", l = " << r.l << ")\n";
    std::cout << "  mod 2 shape    : " << shape_name(r.mod2.shape) << "  expected "
              << shape_name(e.mod2) << (e.mod2 == ModShape::MinusXPowH || e.mod2 == ModShape::MinusOne ? " up to sign" : "")
              << "  [" << (r.mod2_ok ? "ok" : "VIOLATION") << "]\n";
    std::cout << "  mod 3 shape    : " << shape_name(r.mod3.shape) << "  ["
              << (r.mod3_ok ? "ok" : "VIOLATION") << "]\n";
    std::cout << "  unpaired mod l : ";
    if (r.unpaired.residues.empty()) std::cout << "empty";
    for (auto x : r.unpaired.residues) std::cout << x << " ";
    std::cout << " [" << (r.unpaired_ok ? "ok" : "VIOLATION") << "]\n";
    std::cout << "  real roots     : I1=" << r.profile.n1 << " I2=" << r.profile.n2
              << " I3=" << r.profile.n3 << "  [" << (r.profile_ok ? "ok" : "VIOLATION") << "]\n";
  }
  return r.all_ok() ? 0 : 1;
}

int cmd_find(const Config& cfg, const std::string& minpoly, long degree_mult, int forced_case,
             const std::string& out_path, const std::vector<std::string>& exclude) {
  ModuliInput in = parse_moduli(parse_poly_string(minpoly), degree_mult);
  HeegnerTable table = open_table(cfg);
  SearchConfig scfg;
  scfg.l_max = cfg.l_max;
  scfg.forced_case = forced_case;
  scfg.table = &table;
  scfg.persist_table = !table.path().empty();
  for (const auto& s : exclude) scfg.excluded_p.emplace_back(s);
  SearchStats st;
  Certificate cert = find_superspecial(uni(cfg), in, scfg, &st);
  std::string text = certificate_to_json(cert);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    out << text << "\n";
    if (!cfg.emit_json)
      std::cout << "certificate written to " << out_path << " (case " << cert.case_no
                << ", D = " << cert.D.get_str() << ", l = " << cert.l
                << ", p = " << cert.p.get_str() << ")\n";
  }
  if (cfg.emit_json || out_path.empty()) std::cout << text << "\n";
  return 0;
}

int cmd_verify(const Config& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << "\n";
    return 2;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  Certificate cert = certificate_from_json(ss.str());
  HeegnerTable table = open_table(cfg);
  VerifyResult v = verify_certificate(cert, uni(cfg), &table);
  if (cfg.emit_json) {
    json j;
    j["pass"] = v.pass;
    j["reasons"] = v.reasons;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << (v.pass ? "PASS" : "FAIL") << "\n";
    for (const auto& r : v.reasons) std::cout << "  " << r << "\n";
  }
  return v.pass ? 0 : 1;
}

int cmd_equidist(const Config& cfg, long bound) {
  EquidistResult r = equidist_diagnostic((uint32_t)bound);
  if (cfg.emit_json) {
    for (const auto& p : r.pairs) {
      json j;
      j["l"] = p.l;
      j["u1"] = p.u1;
      j["u3"] = p.u3;
      std::cout << j.dump() << "\n";
    }
    json s;
    s["count"] = r.pairs.size();
    s["discrepancy"] = r.discrepancy;
    std::cout << s.dump() << "\n";
  } else {
    std::cout << "split primes below " << bound << ": " << r.pairs.size() << "\n";
    for (const auto& p : r.pairs)
      if (r.pairs.size() <= 40)
        std::cout << "  l = " << p.l << "  (" << p.u1 << ", " << p.u3 << ")\n";
    std::cout << "star discrepancy estimate: " << r.discrepancy << "\n";
  }
  return 0;
}

int cmd_regen(const Config& cfg, const std::vector<long>& Ds) {
  std::string path = table_path_or_env(cfg);
  if (path.empty()) {
    std::cerr << "regen-table needs --table or E6_TABLE_PATH\n";
    return 2;
  }
  HeegnerTable table(path);
  table.load();
  const TriangleUniformizer& u = uni(cfg);
  std::vector<mpz_class> list(Ds.begin(), Ds.end());
  auto entries = regenerate_table(u, list, &table);
  bool all_ok = true;
  json meta;
  meta["precision"] = cfg.precision;
  meta["height_cap"] = cfg.height_cap;
  meta["iota_fingerprint"] = u.fingerprint();
  meta["iota"] = "i -> [[0,-1],[1,0]], j -> [[sqrt3,0],[0,-sqrt3]]";
  if (cfg.emit_json) {
    for (const auto& e : entries) {
      json j;
      j["D"] = e.D.get_str();
      j["status"] = e.status;
      std::cout << j.dump() << "\n";
      if (e.status != "ok") all_ok = false;
    }
    std::cout << meta.dump() << "\n";
  } else {
    for (const auto& e : entries) {
      std::cout << "D = " << e.D.get_str() << ": " << e.status << "\n";
      if (e.status != "ok") all_ok = false;
    }
    std::cout << "table: " << path << "  fingerprint " << u.fingerprint() << "\n";
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arithmetic of the discriminant-6 quaternionic moduli curve"};
  app.require_subcommand(1);
  Config cfg;
  app.add_option("--prec", cfg.precision, "working precision in decimal digits")
      ->check(CLI::Range(30, 100000));
  app.add_option("--l-max", cfg.l_max, "largest prime l tried by the search")
      ->check(CLI::Range(24l, 100000000l));
  app.add_option("--height-cap", cfg.height_cap, "embedding enumeration height cap");
  app.add_option("--table", cfg.table_path, "Heegner polynomial cache file (JSONL)");
  app.add_flag("--json", cfg.emit_json, "machine-readable output (one JSON object per line)");

  long D = 0;
  auto* classdata = app.add_subcommand("classdata", "class number, Eichler symbols, s, #W'', h'");
  classdata->add_option("D", D, "negative discriminant, 0 or 1 mod 4")->required();

  auto* cmpoly = app.add_subcommand("cmpoly", "Heegner polynomial P_D");
  cmpoly->add_option("D", D, "family discriminant (-4l, -l, -3l)")->required();

  auto* checks = app.add_subcommand("checks", "structural checks of P_D (mod 2/3, mod l, intervals)");
  checks->add_option("D", D, "family discriminant")->required();

  std::string minpoly, out_path = "certificate.json", cert_path;
  long degree_mult = 1;
  int forced_case = 0;
  std::vector<std::string> exclude;
  auto* find = app.add_subcommand("find", "search for a certified superspecial prime");
  find->add_option("--minpoly", minpoly, "monic minimal polynomial of j0, e.g. \"x + 1/2\"")
      ->required();
  find->add_option("--degree-mult", degree_mult, "[L : Q(j0)]");
  find->add_option("--case", forced_case, "force a proof case (must be applicable)")
      ->check(CLI::Range(1, 3));
  find->add_option("--exclude", exclude, "primes from earlier runs to skip");
  find->add_option("-o,--out", out_path, "certificate output path");

  auto* verify = app.add_subcommand("verify", "verify a certificate file");
  verify->add_option("path", cert_path, "certificate JSON path")->required();

  long bound = 1000;
  auto* equidist = app.add_subcommand("equidist", "unit-log equidistribution diagnostic");
  equidist->add_option("bound", bound, "upper bound on the split primes")->required();

  std::vector<long> Ds;
  auto* regen = app.add_subcommand("regen-table", "recompute and persist Heegner polynomials");
  regen->add_option("D", Ds, "discriminants")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(classdata)) return cmd_classdata(cfg, D);
    if (app.got_subcommand(cmpoly)) return cmd_cmpoly(cfg, D);
    if (app.got_subcommand(checks)) return cmd_checks(cfg, D);
    if (app.got_subcommand(find))
      return cmd_find(cfg, minpoly, degree_mult, forced_case, out_path, exclude);
    if (app.got_subcommand(verify)) return cmd_verify(cfg, cert_path);
    if (app.got_subcommand(equidist)) return cmd_equidist(cfg, bound);
    if (app.got_subcommand(regen)) return cmd_regen(cfg, Ds);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
