#include "h10/curvedb.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace h10 {

namespace {

[[noreturn]] void violation(const std::string& label, const std::string& field, const std::string& what) {
  throw Error(Errc::InvariantViolation, label + "." + field + ": " + what);
}

Int json_int(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Int(j.get<long>());
  if (j.is_string()) {
    Rational r = parse_rational(j.get<std::string>());
    if (r.get_den() != 1) throw Error(Errc::ParseError, where + ": expected an integer");
    return r.get_num();
  }
  throw Error(Errc::ParseError, where + ": expected an integer");
}

long json_long(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw Error(Errc::ParseError, where + ": expected a JSON integer");
  return j.get<long>();
}

Rational json_rational(const json& j, const std::string& where) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw Error(Errc::ParseError, where + ": expected a rational string \"num/den\"");
}

long key_long(const std::string& k, const std::string& where) {
  Rational r = parse_rational(k);
  if (r.get_den() != 1 || !r.get_num().fits_slong_p()) throw Error(Errc::ParseError, where + ": bad key '" + k + "'");
  return r.get_num().get_si();
}

template <class V, class F>
std::map<long, V> json_map(const json& j, const std::string& where, F&& conv) {
  std::map<long, V> m;
  if (j.is_null()) return m;
  if (!j.is_object()) throw Error(Errc::ParseError, where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) m.emplace(key_long(it.key(), where), conv(it.value(), where + "." + it.key()));
  return m;
}

}  // namespace

CurveRecord curve_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::ParseError, "curve record must be a JSON object");
  if (!j.contains("label") || !j["label"].is_string()) throw Error(Errc::ParseError, "curve record without a string label");
  CurveRecord c;
  c.label = j["label"].get<std::string>();
  const std::string& L = c.label;
  auto field = [&](const char* name) -> const json& {
    if (!j.contains(name)) throw Error(Errc::ParseError, L + ": missing field " + name);
    return j[name];
  };
  c.a1 = json_int(field("a1"), L + ".a1");
  c.a2 = json_int(field("a2"), L + ".a2");
  c.a3 = json_int(field("a3"), L + ".a3");
  c.a4 = json_int(field("a4"), L + ".a4");
  c.a6 = json_int(field("a6"), L + ".a6");
  c.conductor = json_int(field("conductor"), L + ".conductor");
  c.manin_constant = json_long(field("manin_constant"), L + ".manin_constant");
  c.torsion_order = json_long(field("torsion_order"), L + ".torsion_order");
  c.rank_Q = json_long(field("rank_Q"), L + ".rank_Q");
  auto as_bool = [](const json& v, const std::string& w) {
    if (!v.is_boolean()) throw Error(Errc::ParseError, w + ": expected a boolean");
    return v.get<bool>();
  };
  c.mod_ell_surjective = json_map<bool>(j.value("mod_ell_surjective", json()), L + ".mod_ell_surjective", as_bool);
  c.sha_ell_trivial = json_map<bool>(j.value("sha_ell_trivial", json()), L + ".sha_ell_trivial", as_bool);
  c.tamagawa = json_map<long>(j.value("tamagawa", json()), L + ".tamagawa", json_long);
  if (j.contains("L_ratio") && !j["L_ratio"].is_null()) c.L_ratio = json_rational(j["L_ratio"], L + ".L_ratio");
  c.twist_L_ratios = json_map<Rational>(j.value("twist_L_ratios", json()), L + ".twist_L_ratios", json_rational);
  c.cyclotomic_tamagawa = json_map<long>(j.value("cyclotomic_tamagawa", json()), L + ".cyclotomic_tamagawa", json_long);
  c.cached_ap = json_map<long>(j.value("cached_ap", json()), L + ".cached_ap", json_long);
  return c;
}

json to_json(const CurveRecord& c) {
  auto small = [](const Int& v) -> json {
    if (v.fits_slong_p()) return v.get_si();
    return v.get_str();
  };
  json j;
  j["label"] = c.label;
  j["a1"] = small(c.a1);
  j["a2"] = small(c.a2);
  j["a3"] = small(c.a3);
  j["a4"] = small(c.a4);
  j["a6"] = small(c.a6);
  j["conductor"] = c.conductor ? small(*c.conductor) : json();
  j["manin_constant"] = c.manin_constant;
  j["torsion_order"] = c.torsion_order;
  j["rank_Q"] = c.rank_Q;
  auto obj = [](const auto& m, auto conv) {
    json o = json::object();
    for (const auto& [k, v] : m) o[std::to_string(k)] = conv(v);
    return o;
  };
  auto id = [](auto v) { return v; };
  j["mod_ell_surjective"] = obj(c.mod_ell_surjective, id);
  j["sha_ell_trivial"] = obj(c.sha_ell_trivial, id);
  j["tamagawa"] = obj(c.tamagawa, id);
  j["L_ratio"] = c.L_ratio ? json(format_rational(*c.L_ratio)) : json();
  j["twist_L_ratios"] = obj(c.twist_L_ratios, [](const Rational& r) { return format_rational(r); });
  j["cyclotomic_tamagawa"] = obj(c.cyclotomic_tamagawa, id);
  j["cached_ap"] = obj(c.cached_ap, id);
  j["discriminant"] = to_string(c.raw_discriminant());
  return j;
}

void validate_record(const CurveRecord& c) {
  const std::string& L = c.label;
  if (L.empty()) violation("<unnamed>", "label", "empty label");
  Int delta = c.raw_discriminant();
  if (delta == 0) violation(L, "a-invariants", "discriminant is zero");
  if (c.conductor) {
    if (*c.conductor < 1) violation(L, "conductor", "must be positive");
    for (const auto& [p, e] : factorize(*c.conductor)) {
      if (delta % p != 0) violation(L, "conductor", "prime " + to_string(p) + " divides N but not the discriminant");
    }
  }
  if (c.manin_constant < 1) violation(L, "manin_constant", "must be positive");
  if (c.torsion_order < 1) violation(L, "torsion_order", "must be positive");
  if (c.rank_Q < 0) violation(L, "rank_Q", "must be non-negative");
  for (const auto& [p, cp] : c.tamagawa) {
    if (p < 2 || !is_prime(static_cast<long long>(p))) violation(L, "tamagawa", std::to_string(p) + " is not prime");
    if (cp < 1) violation(L, "tamagawa", "c_" + std::to_string(p) + " must be positive");
    if (cp != 1 && c.conductor && *c.conductor % p != 0) {
      violation(L, "tamagawa", "c_" + std::to_string(p) + " != 1 at a good prime");
    }
  }
  for (const auto& [ell, t] : c.cyclotomic_tamagawa) {
    if (t < 1) violation(L, "cyclotomic_tamagawa", "must be positive");
  }
  for (const auto& [ell, f] : c.mod_ell_surjective) {
    if (ell < 2 || !is_prime(static_cast<long long>(ell))) violation(L, "mod_ell_surjective", std::to_string(ell) + " is not prime");
  }
  for (const auto& [p, ap] : c.cached_ap) {
    if (p < 2 || !is_prime(static_cast<long long>(p))) violation(L, "cached_ap", std::to_string(p) + " is not prime");
    if (static_cast<double>(ap) * ap > 4.0 * static_cast<double>(p)) {
      violation(L, "cached_ap", "a_" + std::to_string(p) + " = " + std::to_string(ap) + " violates the Hasse bound");
    }
    if (delta % p == 0) violation(L, "cached_ap", "a_" + std::to_string(p) + " cached at a bad prime");
    long fresh = trace_frobenius(c, p);
    if (fresh != ap) {
      violation(L, "cached_ap", "a_" + std::to_string(p) + " = " + std::to_string(ap) + " but point count gives " + std::to_string(fresh));
    }
  }
  // Torsion injects into E~(F_p) at good p >= 3.
  for (long p : primes_up_to(60)) {
    if (p < 3 || delta % p == 0) continue;
    if (count_points(c, p) % c.torsion_order != 0) {
      violation(L, "torsion_order", std::to_string(c.torsion_order) + " does not divide #E~(F_" + std::to_string(p) + ")");
    }
  }
  if (c.L_ratio && (*c.L_ratio == 0) != (c.rank_Q > 0)) violation(L, "L_ratio", "vanishing of L(E,1) inconsistent with rank_Q");
}

CurveDB::CurveDB(std::vector<CurveRecord> records) : records_(std::move(records)) {
  std::set<std::string> seen;
  for (const CurveRecord& r : records_) {
    validate_record(r);
    if (!seen.insert(r.label).second) violation(r.label, "label", "duplicate label");
  }
}

const CurveRecord* CurveDB::find(const std::string& label) const {
  for (const CurveRecord& r : records_) {
    if (r.label == label) return &r;
  }
  return nullptr;
}

const CurveRecord& CurveDB::at(const std::string& label) const {
  if (const CurveRecord* r = find(label)) return *r;
  throw Error(Errc::InvalidArgument, "no curve labelled '" + label + "' in the database");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CurveDB parse_curvedb(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, std::string("curve database: ") + e.what());
  }
  if (!j.is_array()) throw Error(Errc::ParseError, "curve database must be a JSON array");
  std::vector<CurveRecord> recs;
  for (const json& r : j) recs.push_back(curve_from_json(r));
  return CurveDB(std::move(recs));
}

CurveDB load_curvedb(const std::filesystem::path& path) { return parse_curvedb(read_text_file(path)); }

HeegnerFixture fixture_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::ParseError, "fixture must be a JSON object");
  for (const char* k : {"curve_label", "K_disc", "x", "y"}) {
    if (!j.contains(k)) throw Error(Errc::ParseError, std::string("fixture missing field ") + k);
  }
  HeegnerFixture f;
  f.curve_label = j["curve_label"].get<std::string>();
  f.K_disc = json_long(j["K_disc"], "fixture.K_disc");
  auto coord = [&](const char* name) {
    const json& c = j[name];
    if (!c.is_object() || !c.contains("u") || !c.contains("v")) {
      throw Error(Errc::ParseError, std::string("fixture.") + name + " needs u and v");
    }
    return QuadElem(f.K_disc, json_rational(c["u"], name), json_rational(c["v"], name));
  };
  f.point = {coord("x"), coord("y"), false};
  f.provenance = j.value("provenance", std::string());
  return f;
}

HeegnerFixture load_heegner_fixture(const std::filesystem::path& path) {
  try {
    return fixture_from_json(json::parse(read_text_file(path)));
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, path.string() + ": " + e.what());
  }
}

std::optional<HeegnerFixture> find_heegner_fixture(const std::filesystem::path& dir, const std::string& label, long K_disc) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) return std::nullopt;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    HeegnerFixture f = load_heegner_fixture(path);
    if (f.curve_label == label && f.K_disc == K_disc) return f;
  }
  return std::nullopt;
}

json to_json(const DensityReport& r) {
  return {{"ell", r.ell},
          {"set_size", to_string(r.set_size)},
          {"group_size", to_string(r.group_size)},
          {"density", format_rational(r.density)}};
}

json to_json(const SieveReport& r) {
  json spec = {{"kind", to_string(r.spec.kind)}, {"curve", r.spec.curve.label}};
  if (r.spec.kind == SieveKind::P_set) {
    spec["ell"] = r.spec.ell;
  } else {
    spec["K_disc"] = r.spec.K_disc;
  }
  return {{"spec", spec},
          {"bound", r.bound},
          {"members", r.members},
          {"count", r.members.size()},
          {"empirical_density", format_rational(r.empirical_density)},
          {"empirical_density_float", r.empirical_density.get_d()},
          {"theoretical_density", format_rational(r.theoretical_density)}};
}

json to_json(const PadicNum& x) {
  json j = {{"p", x.p()}, {"repr", x.str()}};
  if (x.is_exact_zero()) {
    j["valuation"] = "inf";
  } else if (x.is_certified_nonzero()) {
    j["valuation"] = x.valuation();
    j["precision"] = x.precision();
  } else {
    j["valuation"] = nullptr;
    j["precision"] = x.precision();
  }
  return j;
}

json to_json(const KLReport& r) {
  return {{"ns_count", r.ns_count},         {"manin_constant", r.manin_constant},
          {"m", r.m},                       {"v_t", r.v_t},
          {"n_used", r.n_used},             {"v_log", r.v_log},
          {"quantity_valuation", r.quantity_valuation}, {"integral", r.integral},
          {"unit", r.unit}};
}

}  // namespace h10
