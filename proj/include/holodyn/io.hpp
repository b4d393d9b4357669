#pragma once

/**
 * @file io.hpp
 * @brief JSON map specifications, report serialization and CSV output.
 *
 * Complex numbers are written as [re, im]. Doubles use the shortest
 * representation that round-trips, in both JSON and CSV.
 *
 * Map specs:
 *   {"type":"mobius","coeffs":[a,b,c,d],"domain":"disc"}
 *   {"type":"formula","expr":"z/(2-z)","domain":"disc"}
 *   {"type":"conjugate","outer":[a,b,c,d],"inner":<map>,"domain":"disc"}
 *   {"type":"compose","maps":[<map>, ...]}            maps[0] o maps[1] o ...
 *   {"type":"iterate","map":<map>,"n":3}
 *   {"type":"semigroup_element","semigroup":<semigroup>,"t":0.5}
 *   {"type":"catalog","name":"koebe-zero-step"}
 *   {"type":"identity"}
 * Semigroups: a catalog name, {"generator":"..."} or
 *   {"koenigs":"...","inverse":"...","omega":"plane","kind":"translation","rate":1}
 */

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "catalog.hpp"
#include "core.hpp"
#include "criteria.hpp"
#include "koenigs.hpp"
#include "map.hpp"
#include "metric.hpp"
#include "petals.hpp"

namespace holodyn::io {

using json = nlohmann::json;

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

inline json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

inline json to_json(cplx z) { return json::array({num(z.real()), num(z.imag())}); }

inline cplx parse_complex(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_string()) return formula::eval(formula::parse(j.get<std::string>()), 0.0);
  throw Error(Errc::invalid_argument, "expected a number, [re, im] or a constant expression");
}

/// Real numbers stay scalars so that canonical specs stay short.
inline json coeff_json(cplx z) { return z.imag() == 0.0 ? json(z.real()) : to_json(z); }

inline Domain parse_domain(const std::string& s) {
  for (Domain d : {Domain::disc, Domain::upper_half_plane, Domain::right_half_plane, Domain::plane})
    if (s == domain_name(d)) return d;
  throw Error(Errc::invalid_argument, "unknown domain '" + s + "'");
}

inline OmegaPredicate omega_by_name(const std::string& name) {
  auto exact = [&](std::function<bool(cplx)> contains) {
    OmegaPredicate p;
    p.name = name;
    p.exact = true;
    p.contains = std::move(contains);
    return p;
  };
  if (name == "plane") return exact([](cplx w) { return std::isfinite(std::abs(w)); });
  if (name == "upper-half-plane") return exact([](cplx w) { return w.imag() > 0.0; });
  if (name == "lower-half-plane") return exact([](cplx w) { return w.imag() < 0.0; });
  if (name == "right-half-plane") return exact([](cplx w) { return w.real() > 0.0; });
  if (name == "sampled") return OmegaPredicate{};
  throw Error(Errc::invalid_argument, "unknown omega predicate '" + name + "'");
}

inline SemigroupSpec parse_semigroup(const json& j) {
  if (j.is_string()) return catalog::semigroup(j.get<std::string>());
  if (!j.is_object()) throw Error(Errc::invalid_argument, "semigroup must be a name or an object");
  if (j.contains("generator")) return SemigroupSpec::from_generator(j.at("generator").get<std::string>());
  FormulaKoenigsConfig cfg;
  cfg.forward_text = j.at("koenigs").get<std::string>();
  if (j.contains("inverse")) cfg.inverse_text = j.at("inverse").get<std::string>();
  cfg.omega = omega_by_name(j.value("omega", std::string("sampled")));
  std::string kind = j.value("kind", std::string("translation"));
  ModelKind mk = kind == "dilation" ? ModelKind::dilation : ModelKind::translation;
  if (kind != "dilation" && kind != "translation") throw Error(Errc::invalid_argument, "unknown model kind");
  cplx rate = j.contains("rate") ? parse_complex(j.at("rate")) : cplx(1.0);
  return SemigroupSpec::from_koenigs(std::make_shared<FormulaKoenigs>(cfg), j.value("name", std::string()), mk,
                                     rate);
}

inline MapDescriptor parse_map(const json& j) {
  if (j.is_string()) return MapDescriptor::formula(j.get<std::string>());
  const std::string type = j.at("type").get<std::string>();
  Domain dom = j.contains("domain") ? parse_domain(j.at("domain").get<std::string>()) : Domain::disc;
  auto coeffs = [](const json& c) {
    if (!c.is_array() || c.size() != 4) throw Error(Errc::invalid_argument, "Mobius coefficients need 4 entries");
    return std::array<cplx, 4>{parse_complex(c[0]), parse_complex(c[1]), parse_complex(c[2]), parse_complex(c[3])};
  };
  if (type == "identity") return MapDescriptor::identity();
  if (type == "mobius") {
    auto c = coeffs(j.at("coeffs"));
    return MapDescriptor::mobius(c[0], c[1], c[2], c[3], dom);
  }
  if (type == "formula") return MapDescriptor::formula(j.at("expr").get<std::string>(), dom);
  if (type == "conjugate") {
    auto c = coeffs(j.at("outer"));
    return MapDescriptor::conjugate(c, parse_map(j.at("inner")), dom);
  }
  if (type == "compose") {
    std::vector<MapDescriptor> maps;
    for (const auto& m : j.at("maps")) maps.push_back(parse_map(m));
    return MapDescriptor::compose(std::move(maps));
  }
  if (type == "iterate") return MapDescriptor::iterate(parse_map(j.at("map")), j.at("n").get<unsigned>());
  if (type == "semigroup_element")
    return MapDescriptor::semigroup_element(parse_semigroup(j.at("semigroup")), j.at("t").get<double>());
  if (type == "catalog") {
    const catalog::CatalogEntry& e = catalog::catalog_build(j.at("name").get<std::string>());
    if (!e.map) throw Error(Errc::unknown_entry, "'" + e.name + "' is model level and has no disc map");
    return *e.map;
  }
  throw Error(Errc::invalid_argument, "unknown map type '" + type + "'");
}

inline json semigroup_json(const SemigroupSpec& s) {
  if (s.has_generator_form()) return json{{"generator", s.generator_text()}};
  for (const auto& n : catalog::names())
    if (n == s.name()) return n;
  throw Error(Errc::invalid_argument, "semigroup '" + s.name() + "' has no serializable form");
}

/// Canonical spec of a descriptor; parse_map(map_json(m)) serializes back identically.
inline json map_json(const MapDescriptor& m) {
  using namespace node;
  return std::visit(
      [&](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Identity>) {
          return json{{"type", "identity"}};
        } else if constexpr (std::is_same_v<T, node::Mobius>) {
          json c = json::array();
          for (cplx x : n.given) c.push_back(coeff_json(x));
          return json{{"type", "mobius"}, {"coeffs", c}, {"domain", domain_name(n.domain)}};
        } else if constexpr (std::is_same_v<T, node::Formula>) {
          return json{{"type", "formula"}, {"expr", n.text}, {"domain", domain_name(n.domain)}};
        } else if constexpr (std::is_same_v<T, Conjugate>) {
          json c = json::array();
          for (cplx x : n.given) c.push_back(coeff_json(x));
          return json{{"type", "conjugate"}, {"outer", c}, {"inner", map_json(*n.inner)},
                      {"domain", domain_name(n.domain)}};
        } else if constexpr (std::is_same_v<T, node::Compose>) {
          json maps = json::array();
          for (const auto& x : n.maps) maps.push_back(map_json(x));
          return json{{"type", "compose"}, {"maps", maps}};
        } else if constexpr (std::is_same_v<T, node::Iterate>) {
          return json{{"type", "iterate"}, {"map", map_json(*n.base)}, {"n", n.n}};
        } else if constexpr (std::is_same_v<T, node::SemigroupElement>) {
          return json{{"type", "semigroup_element"}, {"semigroup", semigroup_json(n.spec)}, {"t", n.t}};
        } else {
          throw Error(Errc::invalid_argument, "Koenigs-based descriptors have no spec form");
        }
      },
      m.node());
}

/// Inline JSON, a path to a JSON file, or a bare formula on the disc.
inline json load_spec(const std::string& arg) {
  auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[' || arg[first] == '"'))
    return json::parse(arg);
  std::ifstream in(arg);
  if (in) return json::parse(in);
  return arg;
}

// ---------------------------------------------------------------------------
// Reports

inline json to_json(const BoundaryMultiplier& m) {
  return json{{"value", m.infinite ? json(nullptr) : num(m.value)}, {"infinite", m.infinite}, {"error", num(m.error)}};
}

inline json to_json(const BRFPRecord& r) {
  return json{{"sigma", to_json(r.sigma)},
              {"angular_derivative", num(r.angular_derivative)},
              {"regular", r.regular},
              {"is_dw", r.is_dw}};
}

inline json to_json(const ClassificationReport& r) {
  json q = json::array();
  for (double x : r.step.q) q.push_back(num(x));
  return json{{"kind", map_kind_name(r.kind)},
              {"dw", to_json(r.dw_point)},
              {"multiplier", to_json(r.multiplier)},
              {"multiplier_error", num(r.multiplier_error)},
              {"dw_iterations", r.dw_iterations},
              {"dw_seed_spread", num(r.dw_seed_spread)},
              {"step", {{"q_tail", r.step.q.empty() ? json(nullptr) : num(r.step.q.back())},
                        {"decay_slope", num(r.step.decay_slope)},
                        {"underflow", r.step.underflow}}}};
}

inline json to_json(const AffinityReport& r) {
  json samples = json::array();
  for (const auto& [z, f] : r.f_samples) samples.push_back(json{{"z", to_json(z)}, {"f", to_json(f)}});
  json hist = json::array();
  for (double x : r.residual_history) hist.push_back(num(x));
  return json{{"n_used", r.n_used},       {"is_constant", r.is_constant}, {"spread", num(r.spread)},
              {"c_estimate", to_json(r.c_estimate)}, {"residual_history", hist}, {"commutator", num(r.commutator)},
              {"converged", r.converged}, {"chart_exact", r.chart_exact}, {"f_samples", samples}};
}

inline json to_json(const Condition& c) {
  return json{{"holds", c.holds}, {"evaluated", c.evaluated}, {"evidence", num(c.evidence)}, {"note", c.note}};
}

inline json to_json(const CriteriaReport& r) {
  json concl = json::array();
  for (auto [t, res] : r.conclusion) concl.push_back(json{{"t", t}, {"residual", num(res)}});
  json iso = json::array(), common = json::array();
  for (cplx z : r.isogonal_points) iso.push_back(to_json(z));
  for (cplx z : r.common_points) common.push_back(to_json(z));
  return json{{"precondition_commutator", num(r.precondition_commutator)},
              {"precondition_ok", r.precondition_ok},
              {"a_affine", to_json(r.a)},
              {"b_hyperbolic_or_zero_step", to_json(r.b)},
              {"c_irrational_commutation", to_json(r.c)},
              {"d_unrestricted_limit", to_json(r.d)},
              {"e_isogonal_repelling_point", to_json(r.e)},
              {"f_common_boundary_fixed_point", to_json(r.f)},
              {"affinity_c", to_json(r.affinity_c)},
              {"psi1_kind", map_kind_name(r.psi1_kind)},
              {"tau", to_json(r.tau)},
              {"isogonal_points", iso},
              {"common_points", common},
              {"conclusion", concl},
              {"conclusion_holds", r.conclusion_holds}};
}

inline json to_json(const PetalReport& p) {
  json w = json::array();
  for (cplx z : p.witnesses) w.push_back(to_json(z));
  return json{{"petal_id", p.petal_id ? json(*p.petal_id) : json(nullptr)},
              {"kind", petal_kind_name(p.kind)},
              {"alpha", to_json(p.alpha)},
              {"spectral_value", p.spectral ? num(*p.spectral) : json(nullptr)},
              {"strip", p.strip ? json::array({num(p.strip->first), num(p.strip->second)}) : json(nullptr)},
              {"exact_membership", p.exact_membership},
              {"witnesses", w}};
}

inline json to_json(const PetalSurvey& s) {
  json petals = json::array(), rej = json::array();
  for (const auto& p : s.petals) petals.push_back(to_json(p));
  for (cplx z : s.rejected) rej.push_back(to_json(z));
  return json{{"petals", petals}, {"rejected", rej}};
}

inline json to_json(const CascadeReport& c) {
  json petals = json::array();
  for (const auto& p : c.petals) petals.push_back(to_json(p));
  return json{{"case", cascade_case_name(c.kind)},
              {"petals", petals},
              {"min_separation", num(c.min_separation)},
              {"tau_distance", num(c.tau_distance_trend)}};
}

inline json to_json(const catalog::CombDemoReport& r) {
  json cascade = json::array();
  for (const auto& row : r.cascade)
    cascade.push_back(json{{"petal", row.petal}, {"witness", to_json(row.witness)}, {"image_petal", row.image_petal},
                           {"alpha_im", row.alpha_im}});
  json shifts = json::array();
  for (auto [t, p] : r.vertical_shift_preserves) shifts.push_back(json{{"t", t}, {"preserves_omega", p}});
  return json{{"samples", r.samples},
              {"forward_violations", r.forward_violations},
              {"ray_logic_forward", r.ray_logic_forward},
              {"shift_mismatches", r.shift_mismatches},
              {"shift_automorphism", r.shift_automorphism},
              {"witness", to_json(r.witness)},
              {"witness_in_omega", r.witness_in_omega},
              {"witness_shifted_in_omega", r.witness_image_in_omega},
              {"cascade", cascade},
              {"cascade_ok", r.cascade_ok},
              {"vertical_shifts", shifts}};
}

inline json to_json(const catalog::CatalogEntry& e) {
  json petals = json::array();
  for (const auto& p : e.meta.petals)
    petals.push_back(json{{"label", p.label},
                          {"kind", p.hyperbolic ? "hyperbolic" : "parabolic"},
                          {"alpha", to_json(p.alpha)},
                          {"strip", p.strip ? json::array({p.strip->first, p.strip->second}) : json(nullptr)}});
  return json{{"name", e.name},
              {"model_level", e.model_level},
              {"dw", to_json(e.meta.dw_point)},
              {"kind", map_kind_name(e.meta.kind)},
              {"multiplier", to_json(e.meta.multiplier)},
              {"koenigs", e.meta.koenigs_formula},
              {"omega", e.meta.omega},
              {"base_space", e.meta.base_space},
              {"petals", petals},
              {"provenance", e.meta.provenance}};
}

// ---------------------------------------------------------------------------
// Text output

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// One "path,value" line per scalar leaf.
inline void flatten(const json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k) flatten(j[k], path + "[" + std::to_string(k) + "]", out);
  } else if (j.is_number_float()) {
    out.emplace_back(path, format_double(j.get<double>()));
  } else if (j.is_string()) {
    out.emplace_back(path, j.get<std::string>());
  } else {
    out.emplace_back(path, j.dump());
  }
}

inline std::string to_csv(const json& j) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  std::ostringstream os;
  os << "key,value\n";
  for (const auto& [k, v] : rows) {
    bool quote = v.find_first_of(",\"\n") != std::string::npos;
    os << k << ',';
    if (quote) {
      os << '"';
      for (char c : v) os << (c == '"' ? "\"\"" : std::string(1, c));
      os << '"';
    } else {
      os << v;
    }
    os << '\n';
  }
  return os.str();
}

/// Heat-map rows (Re z, Im z, Re f, Im f) of an f_{phi,psi} sample set.
inline std::string f_samples_csv(const AffinityReport& r) {
  std::ostringstream os;
  os << "re_z,im_z,re_f,im_f\n";
  for (const auto& [z, f] : r.f_samples)
    os << format_double(z.real()) << ',' << format_double(z.imag()) << ',' << format_double(f.real()) << ','
       << format_double(f.imag()) << '\n';
  return os.str();
}

}  // namespace holodyn::io
