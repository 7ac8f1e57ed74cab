// h10: command-line front end to the sieve, p-adic and certificate pipeline.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "h10/certify.hpp"

#ifndef H10_DATA_DIR
#define H10_DATA_DIR "data"
#endif

namespace {

using namespace h10;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInput = 2;

struct Globals {
  std::string db = std::string(H10_DATA_DIR) + "/curves.json";
  long prec = kDefaultPadicPrecision;
};

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

int run_count(const Globals& g, const std::string& label, long p) {
  CurveDB db = load_curvedb(g.db);
  const CurveRecord& E = db.at(label);
  print({{"curve", label}, {"p", p}, {"count", count_points(E, p)}, {"trace", trace_frobenius(E, p)}});
  return kExitOk;
}

int run_density(long ell) {
  json j = to_json(density_P_report(ell));
  if (ell <= kMaxEnumeratedEll) j["enumerated"] = to_json(density_P_enumerated(ell));
  print(j);
  return kExitOk;
}

int run_sieve(const Globals& g, const std::string& label, const std::string& kind, long ell, long kdisc, long bound,
              bool as_json) {
  CurveDB db = load_curvedb(g.db);
  SieveKind k = parse_sieve_kind(kind);
  SieveSpec spec = k == SieveKind::P_set ? SieveSpec::P(db.at(label), ell) : SieveSpec::Q(k, db.at(label), kdisc);
  SieveReport rep = enumerate_sieve(spec, bound);
  if (as_json) {
    print(to_json(rep));
    return kExitOk;
  }
  std::cout << to_string(k) << "(" << label << ") up to " << bound << ": " << rep.members.size() << " primes\n";
  std::cout << "empirical " << format_rational(rep.empirical_density) << "  theoretical " << format_rational(rep.theoretical_density)
            << "\n";
  for (std::size_t i = 0; i < rep.members.size(); ++i) std::cout << (i ? " " : "") << rep.members[i];
  std::cout << "\n";
  return kExitOk;
}

int run_formal_log(const Globals& g, const std::string& label, const std::string& fixture_path) {
  CurveDB db = load_curvedb(g.db);
  const CurveRecord& E = db.at(label);
  HeegnerFixture fx = load_heegner_fixture(fixture_path);
  if (fx.curve_label != label) throw Error(Errc::FieldMismatch, "fixture is for " + fx.curve_label);
  EmbeddingChoice emb = EmbeddingChoice::make(fx.K_disc, 2, g.prec);
  FormalLog lg = formal_log(E, fx.point, emb, kDefaultKLCeiling);

  json sums = json::array();
  for (std::size_t i = 0; i < lg.partial_sums.size(); ++i) {
    const PadicNum& s = lg.partial_sums[i];
    sums.push_back({{"n", i + 1}, {"valuation", s.is_certified_nonzero() ? json(s.valuation()) : json()}});
  }
  json out = {{"curve", label}, {"K_disc", fx.K_disc}, {"p", 2}, {"m", lg.m}, {"torsion", lg.torsion},
              {"partial_sums", sums}, {"truncation_bound", lg.truncation_bound}};
  if (!lg.torsion) {
    out["v_t"] = lg.t.valuation();
    json cert;
    for (long n = 1; n <= kDefaultKLCeiling; ++n) {
      if (auto m = certified_valuation(formal_differential(E, n), lg.t, n)) {
        cert = {{"n", n}, {"valuation", *m}};
        break;
      }
    }
    out["certified"] = cert;
  }
  print(out);
  return kExitOk;
}

int run_check_kl(const Globals& g, const std::string& label, long kdisc, const std::string& fixture_path) {
  CurveDB db = load_curvedb(g.db);
  HeegnerFixture fx = load_heegner_fixture(fixture_path);
  KLReport rep = check_kl(db.at(label), kdisc, fx, EmbeddingChoice::make(kdisc, 2, g.prec));
  print(to_json(rep));
  return rep.unit ? kExitOk : kExitFailed;
}

int run_certify(const Globals& g, long p, long q, const std::string& fixtures, const std::string& out_path) {
  CurveDB db = load_curvedb(g.db);
  EmitOptions opts;
  opts.precision = g.prec;
  Certificate c = emit_certificate(p, q, db, FixtureSet::load_dir(fixtures), opts);
  std::string text = serialize(c);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!(f << text)) throw Error(Errc::InvalidArgument, "cannot write " + out_path);
    std::cerr << "wrote " << out_path << "\n";
  }
  return kExitOk;
}

int run_verify(const Globals& g, const std::string& cert_path, const std::string& fixtures, bool as_json) {
  CurveDB db = load_curvedb(g.db);
  Certificate c = parse_certificate(read_text_file(cert_path));
  VerifyReport rep = verify_certificate(c, db, FixtureSet::load_dir(fixtures), g.prec);
  if (as_json) {
    print(to_json(rep));
  } else {
    for (const VerifyEntry& e : rep.entries) {
      std::cout << (e.pass ? "ok   " : "FAIL ") << "step " << e.step << "  " << e.check;
      if (!e.detail.empty()) std::cout << "  " << e.detail;
      std::cout << "\n";
    }
    std::cout << (rep.ok ? "certificate verified" : "certificate REJECTED") << "\n";
  }
  return rep.ok ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sieves, 2-adic Kriz-Li checks and Diophantine certificates for Q(p^(1/3), sqrt(-q))"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--db", g.db, "curve database (JSON)");
  app.add_option("--prec", g.prec, "p-adic precision in digits")->check(CLI::PositiveNumber);

  std::string label = "557b1", kind = "P", fixture, fixtures = std::string(H10_DATA_DIR) + "/fixtures", out, cert;
  long p = 0, q = 0, ell = 3, kdisc = -7, bound = 10000;
  bool as_json = false;

  auto* count = app.add_subcommand("count", "point count and trace of Frobenius at a good prime");
  count->add_option("--curve", label)->required();
  count->add_option("--p", p)->required();

  auto* density = app.add_subcommand("density", "density of the P sieve, closed form and by enumeration");
  density->add_option("--ell", ell)->required();

  auto* sieve = app.add_subcommand("sieve", "enumerate a prime sieve");
  sieve->add_option("--curve", label)->required();
  sieve->add_option("--kind", kind, "P, Q, Q+ or Q-")->required();
  sieve->add_option("--ell", ell);
  sieve->add_option("--kdisc", kdisc);
  sieve->add_option("--bound", bound);
  sieve->add_flag("--json", as_json);

  auto* flog = app.add_subcommand("formal-log", "2-adic formal logarithm of a fixture point");
  flog->add_option("--curve", label)->required();
  flog->add_option("--fixture", fixture)->required()->check(CLI::ExistingFile);
  flog->add_option("--prec", g.prec)->check(CLI::PositiveNumber);

  auto* kl = app.add_subcommand("check-kl", "Kriz-Li 2-adic unit condition");
  kl->add_option("--curve", label)->required();
  kl->add_option("--kdisc", kdisc);
  kl->add_option("--fixture", fixture)->required()->check(CLI::ExistingFile);

  auto* certify = app.add_subcommand("certify", "emit a certificate for Q(p^(1/3), sqrt(-q))");
  certify->add_option("--p", p)->required();
  certify->add_option("--q", q)->required();
  certify->add_option("--db", g.db);
  certify->add_option("--fixtures", fixtures);
  certify->add_option("--out", out);

  auto* verify = app.add_subcommand("verify", "re-verify a certificate");
  verify->add_option("--cert", cert)->required()->check(CLI::ExistingFile);
  verify->add_option("--db", g.db);
  verify->add_option("--fixtures", fixtures);
  verify->add_flag("--json", as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*count) return run_count(g, label, p);
    if (*density) return run_density(ell);
    if (*sieve) return run_sieve(g, label, kind, ell, kdisc, bound, as_json);
    if (*flog) return run_formal_log(g, label, fixture);
    if (*kl) return run_check_kl(g, label, kdisc, fixture);
    if (*certify) return run_certify(g, p, q, fixtures, out);
    if (*verify) return run_verify(g, cert, fixtures, as_json);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == Errc::Inconclusive ? kExitFailed : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
