#include "renorm2/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "json_detail.hpp"
#include "renorm2/errors.hpp"

namespace renorm2 {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw ConfigError("config: field `" + field + "` " + what);
}

const json* find(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double as_double(const json& j, const std::string& field) {
  if (!j.is_number()) bad(field, "must be a number");
  double v = j.get<double>();
  if (!is_finite(v)) bad(field, "must be finite");
  return v;
}

long as_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) bad(field, "must be an integer");
  return j.get<long>();
}

Complex as_complex(const json& j, const std::string& field) {
  if (j.is_number()) return Complex{as_double(j, field)};
  if (j.is_array() && j.size() == 2) {
    return {as_double(j[0], field + "[0]"), as_double(j[1], field + "[1]")};
  }
  bad(field, "must be a number or a [re, im] pair");
}

bool as_bool(const json& j, const std::string& field) {
  if (!j.is_boolean()) bad(field, "must be true or false");
  return j.get<bool>();
}

std::vector<int> as_int_list(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) bad(field, "must be a non-empty array");
  std::vector<int> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    long v = as_int(j[i], field + "[" + std::to_string(i) + "]");
    if (v < 0) bad(field, "entries must be >= 0");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

double factorial(std::size_t l) {
  double f = 1.0;
  for (std::size_t i = 2; i <= l; ++i) f *= double(i);
  return f;
}

CoefficientRule named_rule(const std::string& name, const std::string& field) {
  double inf = std::numeric_limits<double>::infinity();
  if (name == "exp") {
    // e^u - 1
    return CoefficientRule(
        [](std::size_t l) {
          return l == 0 ? Complex{0.0} : Complex{1.0 / factorial(l)};
        },
        inf);
  }
  if (name == "sin") {
    return CoefficientRule(
        [](std::size_t l) {
          if (l % 2 == 0) return Complex{0.0};
          double sign = (l / 2) % 2 == 0 ? 1.0 : -1.0;
          return Complex{sign / factorial(l)};
        },
        inf);
  }
  if (name == "geometric") {
    // u^2 / (1 - u)
    return CoefficientRule(
        [](std::size_t l) { return l >= 2 ? Complex{1.0} : Complex{0.0}; },
        1.0);
  }
  bad(field, "names an unknown rule `" + name +
                 "` (available: exp, sin, geometric)");
}

/// Coefficient array or rule name.
CoefficientRule as_series(const json& j, const std::string& field,
                          std::string& text_out) {
  text_out = j.dump();
  if (j.is_string()) return named_rule(j.get<std::string>(), field);
  if (j.is_array()) {
    std::vector<Complex> coeffs;
    coeffs.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
      coeffs.push_back(as_complex(j[i], field + "[" + std::to_string(i) + "]"));
    }
    return CoefficientRule::polynomial(std::move(coeffs));
  }
  bad(field, "must be a coefficient array or a rule name");
}

Rational as_rational(const json& j, const std::string& field) {
  try {
    if (j.is_number_integer()) return Rational::make(j.get<long long>(), 1);
    if (j.is_string()) return Rational::parse(j.get<std::string>());
  } catch (const ConfigError& e) {
    bad(field, e.what());
  }
  bad(field, "must be an integer or a \"p/q\" string");
}

void parse_map(const json& j, const std::string& field, MapSpec& out) {
  if (!j.is_object()) bad(field, "must be an object");
  if (const json* a = find(j, "alpha")) out.alpha = as_complex(*a, field + ".alpha");
  if (const json* b = find(j, "beta")) out.beta = as_complex(*b, field + ".beta");
  if (const json* h = find(j, "h")) out.h = as_series(*h, field + ".h", out.h_text);
}

void parse_scan(const json& j, const std::string& field, ScanParams& out) {
  if (!j.is_object()) bad(field, "must be an object");
  if (const json* r = find(j, "radius")) {
    out.radius = as_double(*r, field + ".radius");
    if (!(out.radius > 0.0)) bad(field + ".radius", "must be positive");
  }
  if (const json* g = find(j, "grid")) {
    out.grid = static_cast<int>(as_int(*g, field + ".grid"));
    if (out.grid < 2) bad(field + ".grid", "must be >= 2");
  }
  if (const json* n = find(j, "n_list")) {
    out.n_list = as_int_list(*n, field + ".n_list");
  }
}

int resolve_truncation(const ExperimentConfig& cfg, const Complex& a,
                       const Complex& b) {
  if (cfg.truncation_auto) return min_truncation_degree(a, b);
  if (cfg.truncation < 1) bad("truncation", "must be >= 1");
  return cfg.truncation;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  ExperimentConfig cfg;
  const json* mode = find(j, "mode");
  if (!mode || !mode->is_string()) bad("mode", "is required and must be a string");
  cfg.mode = mode->get<std::string>();
  static const char* kModes[] = {"iterate", "renorm", "limit",
                                 "scan",    "zalcman", "counterexample",
                                 "correspondence", "basin"};
  bool known = false;
  for (const char* m : kModes) known = known || cfg.mode == m;
  if (!known) bad("mode", "names an unknown mode `" + cfg.mode + "`");

  if (const json* m = find(j, "map")) parse_map(*m, "map", cfg.map);

  if (const json* t = find(j, "truncation")) {
    if (t->is_string()) {
      if (t->get<std::string>() != "auto") {
        bad("truncation", "must be an integer or \"auto\"");
      }
      cfg.truncation_auto = true;
    } else {
      cfg.truncation = static_cast<int>(as_int(*t, "truncation"));
      cfg.truncation_auto = false;
    }
  }

  if (const json* o = find(j, "order")) {
    long v = as_int(*o, "order");
    if (v < 1 || v > 4096) bad("order", "must be between 1 and 4096");
    cfg.order = static_cast<std::size_t>(v);
  }

  if (const json* n = find(j, "n")) {
    cfg.iterate_n = static_cast<int>(as_int(*n, "n"));
  }

  if (const json* s = find(j, "scan")) parse_scan(*s, "scan", cfg.scan);

  if (const json* k = find(j, "k_max")) {
    cfg.k_max = static_cast<int>(as_int(*k, "k_max"));
    if (cfg.k_max < 1) bad("k_max", "must be >= 1");
  }

  if (const json* z = find(j, "zalcman")) {
    if (!z->is_object()) bad("zalcman", "must be an object");
    ZalcmanParams& p = cfg.zalcman;
    if (const json* f = find(*z, "family")) {
      if (!f->is_string()) bad("zalcman.family", "must be a string");
      p.family = f->get<std::string>();
      if (p.family != "scaled_identity" && p.family != "power" &&
          p.family != "elementary_iterates") {
        bad("zalcman.family", "names an unknown family `" + p.family + "`");
      }
    }
    if (const json* c = find(*z, "count")) {
      p.count = static_cast<int>(as_int(*c, "zalcman.count"));
      if (p.count < 1) bad("zalcman.count", "must be >= 1");
    }
    if (const json* r = find(*z, "radius")) {
      p.radius = as_double(*r, "zalcman.radius");
      if (!(p.radius > 0.0)) bad("zalcman.radius", "must be positive");
    }
    if (const json* g = find(*z, "grid")) {
      p.grid = static_cast<int>(as_int(*g, "zalcman.grid"));
      if (p.grid < 2) bad("zalcman.grid", "must be >= 2");
    }
    if (const json* d = find(*z, "min_certified_depth")) {
      p.min_certified_depth =
          static_cast<int>(as_int(*d, "zalcman.min_certified_depth"));
      if (p.min_certified_depth < 0) {
        bad("zalcman.min_certified_depth", "must be >= 0");
      }
    }
  }

  if (const json* c = find(j, "correspondence")) {
    if (!c->is_object()) bad("correspondence", "must be an object");
    CorrParams& p = cfg.corr;
    if (const json* v = find(*c, "c1")) p.c1 = as_complex(*v, "correspondence.c1");
    if (const json* v = find(*c, "c2")) p.c2 = as_complex(*v, "correspondence.c2");
    if (const json* e = find(*c, "entire")) {
      p.entire = as_series(*e, "correspondence.entire", p.entire_text);
    }
    if (const json* a = find(*c, "algebraic")) {
      if (!a->is_array()) bad("correspondence.algebraic", "must be an array");
      for (std::size_t i = 0; i < a->size(); ++i) {
        std::string f = "correspondence.algebraic[" + std::to_string(i) + "]";
        const json& term = (*a)[i];
        if (!term.is_object()) bad(f, "must be an object");
        AlgebraicTerm t;
        const json* av = find(term, "a");
        const json* zv = find(term, "zeta");
        const json* lv = find(term, "lambda");
        if (!av || !zv || !lv) bad(f, "needs a, zeta and lambda");
        t.a = as_complex(*av, f + ".a");
        t.zeta = as_complex(*zv, f + ".zeta");
        t.lambda = as_rational(*lv, f + ".lambda");
        p.algebraic.terms.push_back(t);
      }
    }
    if (const json* nz = find(*c, "normalize")) {
      p.normalize = as_bool(*nz, "correspondence.normalize");
    }
    if (const json* s = find(*c, "scan")) {
      parse_scan(*s, "correspondence.scan", p.scan);
    }
  }

  if (const json* b = find(j, "basin")) {
    if (!b->is_object()) bad("basin", "must be an object");
    BasinParams& p = cfg.basin;
    if (const json* m = find(*b, "model")) {
      if (!m->is_string()) bad("basin.model", "must be a string");
      p.model = m->get<std::string>();
      if (p.model != "elementary" && p.model != "shear_conjugate") {
        bad("basin.model", "names an unknown model `" + p.model + "`");
      }
    }
    if (const json* s = find(*b, "shear")) {
      p.shear = as_complex(*s, "basin.shear");
    }
    if (const json* g = find(*b, "guess")) {
      if (!g->is_array() || g->size() != 2) {
        bad("basin.guess", "must be a [x, y] pair");
      }
      p.guess = {as_complex((*g)[0], "basin.guess[0]"),
                 as_complex((*g)[1], "basin.guess[1]")};
    }
    if (const json* d = find(*b, "depths")) {
      p.depths = as_int_list(*d, "basin.depths");
    }
    if (const json* r = find(*b, "probe_radius")) {
      p.probe_radius = as_double(*r, "basin.probe_radius");
      if (!(p.probe_radius > 0.0)) bad("basin.probe_radius", "must be positive");
    }
    if (const json* g = find(*b, "probe_grid")) {
      p.probe_grid = static_cast<int>(as_int(*g, "basin.probe_grid"));
      if (p.probe_grid < 2) bad("basin.probe_grid", "must be >= 2");
    }
  }

  if (const json* o = find(j, "out_dir")) {
    if (!o->is_string()) bad("out_dir", "must be a string");
    cfg.out_dir = o->get<std::string>();
  }

  if (const json* t = find(j, "tolerance")) {
    cfg.tolerance = as_double(*t, "tolerance");
    if (!(cfg.tolerance > 0.0)) bad("tolerance", "must be positive");
  }

  if (const json* s = find(j, "seed")) {
    long v = as_int(*s, "seed");
    if (v < 0) bad("seed", "must be >= 0");
    cfg.seed = static_cast<unsigned long long>(v);
  }

  if (!is_finite(cfg.map.alpha) || !is_finite(cfg.map.beta)) {
    bad("map", "alpha and beta must be finite");
  }

  // Expansion inequalities the requested mode relies on, checked before any
  // run starts.
  if (cfg.mode == "renorm" || cfg.mode == "limit" || cfg.mode == "scan") {
    cfg.truncation = resolve_truncation(cfg, cfg.map.alpha, cfg.map.beta);
    RenormPlan::analyze(cfg.map.alpha, cfg.map.beta, cfg.truncation).require();
  } else if (cfg.mode == "correspondence") {
    for (const AlgebraicTerm& t : cfg.corr.algebraic.terms) {
      if (t.zeta == Complex{0.0}) {
        throw HypothesisError(
            "correspondence: branch point zeta = 0 sits at the expansion "
            "point; every zeta must be nonzero");
      }
    }
    cfg.truncation = resolve_truncation(cfg, cfg.corr.c1, cfg.corr.c2);
    RenormPlan::analyze(cfg.corr.c1, cfg.corr.c2, cfg.truncation).require();
  } else if (cfg.mode == "basin") {
    if (cfg.basin.model == "elementary" && cfg.map.h_text.front() != '[') {
      bad("map.h", "must be a coefficient array in basin mode (the inverse "
                   "map is built from the coefficients)");
    }
    // The multipliers of both supported models equal (alpha, beta); the
    // scan itself re-validates against the measured multipliers.
    cfg.truncation = resolve_truncation(cfg, cfg.map.alpha, cfg.map.beta);
  }
  // Remaining modes never consume the truncation degree, so an absent field
  // stays at its placeholder instead of forcing the expansion inequalities.

  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open `" + path + "`");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

namespace detail {

nlohmann::json complex_json(const Complex& z) {
  if (z.imag() == 0.0) return z.real();
  return nlohmann::json::array({z.real(), z.imag()});
}

nlohmann::json echo_config(const ExperimentConfig& cfg) {
  json out;
  out["mode"] = cfg.mode;
  out["map"] = {{"alpha", complex_json(cfg.map.alpha)},
                {"beta", complex_json(cfg.map.beta)},
                {"h", json::parse(cfg.map.h_text)}};
  out["truncation"] = cfg.truncation;
  out["truncation_auto"] = cfg.truncation_auto;
  out["order"] = cfg.order;
  out["out_dir"] = cfg.out_dir;
  out["seed"] = cfg.seed;
  if (cfg.tolerance_set()) out["tolerance"] = cfg.tolerance;
  if (cfg.mode == "iterate" || cfg.mode == "renorm") out["n"] = cfg.iterate_n;
  if (cfg.mode == "scan") {
    out["scan"] = {{"radius", cfg.scan.radius},
                   {"grid", cfg.scan.grid},
                   {"n_list", cfg.scan.n_list}};
  }
  if (cfg.mode == "counterexample") out["k_max"] = cfg.k_max;
  if (cfg.mode == "zalcman") {
    out["zalcman"] = {{"family", cfg.zalcman.family},
                      {"count", cfg.zalcman.count},
                      {"radius", cfg.zalcman.radius},
                      {"grid", cfg.zalcman.grid},
                      {"min_certified_depth", cfg.zalcman.min_certified_depth}};
  }
  if (cfg.mode == "correspondence") {
    json terms = json::array();
    for (const AlgebraicTerm& t : cfg.corr.algebraic.terms) {
      terms.push_back({{"a", complex_json(t.a)},
                       {"zeta", complex_json(t.zeta)},
                       {"lambda", std::to_string(t.lambda.num) + "/" +
                                      std::to_string(t.lambda.den)}});
    }
    out["correspondence"] = {
        {"c1", complex_json(cfg.corr.c1)},
        {"c2", complex_json(cfg.corr.c2)},
        {"entire", json::parse(cfg.corr.entire_text)},
        {"algebraic", terms},
        {"normalize", cfg.corr.normalize},
        {"scan",
         {{"radius", cfg.corr.scan.radius},
          {"grid", cfg.corr.scan.grid},
          {"n_list", cfg.corr.scan.n_list}}}};
  }
  if (cfg.mode == "basin") {
    out["basin"] = {{"model", cfg.basin.model},
                    {"shear", complex_json(cfg.basin.shear)},
                    {"guess", json::array({complex_json(cfg.basin.guess.x),
                                           complex_json(cfg.basin.guess.y)})},
                    {"depths", cfg.basin.depths},
                    {"probe_radius", cfg.basin.probe_radius},
                    {"probe_grid", cfg.basin.probe_grid}};
  }
  return out;
}

}  // namespace detail

}
