#include "renorm2/runner.hpp"

#include <charconv>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <utility>

#include "json_detail.hpp"
#include "renorm2/basin.hpp"
#include "renorm2/correspondence.hpp"
#include "renorm2/elementary.hpp"
#include "renorm2/errors.hpp"
#include "renorm2/version.hpp"
#include "renorm2/zalcman.hpp"

namespace renorm2 {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// One CSV table accumulated in memory.
class Table {
public:
  explicit Table(std::string header) : data_(std::move(header)) { data_ += '\n'; }

  void field(const std::string& s) {
    if (!first_) data_ += ',';
    data_ += s;
    first_ = false;
  }
  void field(long v) { field(std::to_string(v)); }
  void field(double v) { field(format_double(v)); }
  void end_row() {
    data_ += '\n';
    first_ = true;
    ++rows_;
  }

  const std::string& data() const { return data_; }
  std::size_t rows() const { return rows_; }

private:
  std::string data_;
  std::size_t rows_ = 0;
  bool first_ = true;
};

json record_json(const HypothesisRecord& r) {
  return {{"name", r.name},
          {"value", r.value},
          {"margin", r.margin},
          {"ok", r.ok}};
}

struct RunState {
  std::vector<std::pair<std::string, std::string>> files;  // name -> bytes
  json hypotheses = json::array();
  json result = json::object();

  void add_plan(const RenormPlan& plan) {
    hypotheses.push_back(record_json(plan.alpha_expanding));
    hypotheses.push_back(record_json(plan.beta_expanding));
    hypotheses.push_back(record_json(plan.gap));
  }
  void add_table(const std::string& name, const Table& t) {
    files.emplace_back(name, t.data());
  }
};

void jet_table(RunState& st, const std::string& name, const Jet& q) {
  Table t("degree,coef_re,coef_im");
  for (std::size_t l = 0; l <= q.order(); ++l) {
    t.field(static_cast<long>(l));
    t.field(q.coeff(l).real());
    t.field(q.coeff(l).imag());
    t.end_row();
  }
  st.add_table(name, t);
}

void scan_table(RunState& st, const std::string& name,
                const std::vector<ScanRow>& rows) {
  Table t("n,sup_error");
  for (const ScanRow& r : rows) {
    t.field(long{r.n});
    t.field(r.sup_error);
    t.end_row();
  }
  st.add_table(name, t);
}

void run_iterate(const ExperimentConfig& cfg, RunState& st) {
  ElementaryMap f = cfg.map.map();
  PolyMap2 m = cfg.iterate_n >= 0
                   ? iterate(f, cfg.iterate_n, cfg.order)
                   : inverse_iterate(f, -cfg.iterate_n, cfg.order);
  st.result["u_mult"] = detail::complex_json(m.u_mult);
  st.result["v_mult"] = detail::complex_json(m.v_mult);
  jet_table(st, "iterate.csv", m.q);
}

void run_renorm(const ExperimentConfig& cfg, RunState& st) {
  ElementaryMap f = cfg.map.map();
  RenormPlan plan = RenormPlan::analyze(f.alpha, f.beta, cfg.truncation);
  plan.require();
  st.add_plan(plan);
  PolyMap2 m = renorm_compose(f, cfg.truncation, cfg.iterate_n, cfg.order);
  st.result["u_mult"] = detail::complex_json(m.u_mult);
  st.result["v_mult"] = detail::complex_json(m.v_mult);
  jet_table(st, "renorm.csv", m.q);
}

void run_limit(const ExperimentConfig& cfg, RunState& st) {
  ElementaryMap f = cfg.map.map();
  RenormPlan plan = RenormPlan::analyze(f.alpha, f.beta, cfg.truncation);
  plan.require();
  st.add_plan(plan);
  st.result["rate"] = plan.rate;
  jet_table(st, "limit.csv", renorm_limit(f, cfg.truncation, cfg.order));
}

void run_scan(const ExperimentConfig& cfg, RunState& st) {
  ElementaryMap f = cfg.map.map();
  RenormPlan plan = RenormPlan::analyze(f.alpha, f.beta, cfg.truncation);
  plan.require();
  st.add_plan(plan);
  st.result["rate"] = plan.rate;
  scan_table(st, "scan.csv",
             convergence_scan(f, cfg.truncation, cfg.scan.radius,
                              cfg.scan.grid, cfg.scan.n_list, cfg.order));
}

void run_counterexample(const ExperimentConfig& cfg, RunState& st) {
  Table t("k,coef_re,coef_im,abs,ratio");
  double prev = 0.0;
  for (int k = 1; k <= cfg.k_max; ++k) {
    Complex c = linear_renorm_coefficient(cfg.map.alpha, cfg.map.beta, k);
    t.field(long{k});
    t.field(c.real());
    t.field(c.imag());
    double a = std::abs(c);
    t.field(a);
    if (k == 1) {
      t.field(std::string());
    } else {
      t.field(a / prev);
    }
    prev = a;
    t.end_row();
  }
  st.add_table("counterexample.csv", t);
}

void run_zalcman(const ExperimentConfig& cfg, RunState& st) {
  const ZalcmanParams& p = cfg.zalcman;
  SampledFamily fam;
  if (p.family == "scaled_identity") {
    fam = scaled_identity_family();
  } else if (p.family == "power") {
    fam = power_family();
  } else {
    fam = elementary_iterate_family(
        cfg.map.map(), cfg.order,
        PolydiskDomain{{}, p.radius, p.radius});
  }
  ExtractOptions opts;
  opts.count = p.count;
  opts.grid_per_axis = p.grid;
  opts.min_certified_depth = p.min_certified_depth;
  Extraction ex = extract_rescalings(fam, CPoint{}, p.count, opts);
  st.hypotheses.push_back(
      {{"name", "certified growth depth >= minimum"},
       {"value", ex.certified_depth},
       {"margin", ex.certified_depth - p.min_certified_depth},
       {"ok", true}});
  Table t("n,v_re,v_im,r,deriv0");
  for (const RescalingEntry& e : ex.seq.entries) {
    RescaledBound bound = verify_rescaled_bound(fam, ex, e.n);
    t.field(long{e.n});
    t.field(e.center.x.real());
    t.field(e.center.x.imag());
    t.field(e.scale);
    t.field(bound.deriv0);
    t.end_row();
  }
  st.add_table("zalcman.csv", t);
}

void run_correspondence(const ExperimentConfig& cfg, RunState& st) {
  const CorrParams& p = cfg.corr;
  double tol = cfg.tolerance_set() ? cfg.tolerance : 1e-12;
  ElementaryCorrespondence corr = ElementaryCorrespondence::create(
      p.c1, p.c2, p.entire, p.algebraic, p.normalize, tol);
  RenormPlan plan = RenormPlan::analyze(p.c1, p.c2, cfg.truncation);
  plan.require();
  st.add_plan(plan);
  st.result["branch_radius"] = corr.rho;
  st.result["offset"] = detail::complex_json(corr.offset);
  jet_table(st, "corr_limit.csv",
            renorm_limit(corr, cfg.truncation, cfg.order));
  scan_table(st, "corr_scan.csv",
             convergence_scan(corr, cfg.truncation, p.scan.radius,
                              p.scan.grid, p.scan.n_list, cfg.order));
}

void run_basin(const ExperimentConfig& cfg, RunState& st) {
  const BasinParams& p = cfg.basin;
  Map2 fwd, inv;
  if (p.model == "elementary") {
    ElementaryMap f = cfg.map.map();
    if (!f.invertible()) {
      throw HypothesisError("basin: the elementary map must be invertible");
    }
    fwd = from_elementary(f, cfg.order);
    Complex ia = 1.0 / f.alpha;
    Complex ib = 1.0 / f.beta;
    BiPoly hz;
    for (std::size_t l = 0; l <= cfg.order; ++l) {
      Complex c = f.h.coeff(l);
      if (c != Complex{0.0}) {
        hz = add(hz, BiPoly::monomial(l, 0, c * std::pow(ia, double(l))));
      }
    }
    inv = {BiPoly::monomial(1, 0, ia),
           add(BiPoly::monomial(0, 1, ib), scale(hz, -ib))};
  } else {
    Map2 S = quadratic_shear(p.shear);
    Map2 Sinv = quadratic_shear(-p.shear);
    Map2 T = diagonal_map(cfg.map.alpha, cfg.map.beta);
    Map2 Tinv = diagonal_map(1.0 / cfg.map.alpha, 1.0 / cfg.map.beta);
    fwd = compose(Sinv, compose(T, S));
    inv = compose(Sinv, compose(Tinv, S));
  }
  FixedPointOptions fopts;
  if (cfg.tolerance_set()) fopts.tolerance = cfg.tolerance;
  Automorphism2D H = make_automorphism(std::move(fwd), std::move(inv),
                                       p.guess, fopts);

  ConjugationOptions copts;
  RenormPlan plan = RenormPlan::analyze(H.lambda1, H.lambda2, cfg.truncation);
  ResonanceCheck rc = check_resonance(H.lambda1, H.lambda2,
                                      copts.resonance_max_power,
                                      copts.resonance_rel_tol);
  st.add_plan(plan);
  st.hypotheses.push_back({{"name", "non-resonant multipliers"},
                           {"value", rc.min_gap},
                           {"margin", rc.min_gap - copts.resonance_rel_tol},
                           {"ok", !rc.resonant}});
  st.result["fixed_point"] =
      json::array({detail::complex_json(H.fixed_point.x),
                   detail::complex_json(H.fixed_point.y)});
  st.result["lambda1"] = detail::complex_json(H.lambda1);
  st.result["lambda2"] = detail::complex_json(H.lambda2);

  ProbeGrid probe{p.probe_radius, p.probe_grid};
  std::vector<PushedRow> rows =
      pushed_family_scan(H, cfg.truncation, p.depths, probe, cfg.order, copts);

  // Residual decay across the scan at depth gaps of five or more; growth
  // there means the probe polydisk is not inside the repelling basin.
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (rows[j].n - rows[i].n < 5) continue;
      if (rows[j].residual > rows[i].residual && rows[j].residual > 1e-13) {
        throw DiagnosticError(
            "basin residual grows across the scan: depth " +
            std::to_string(rows[j].n) + " gives " +
            format_double(rows[j].residual) + " against " +
            format_double(rows[i].residual) + " at depth " +
            std::to_string(rows[i].n));
      }
    }
  }

  Table t("n,residual,pushed_error");
  for (const PushedRow& r : rows) {
    t.field(long{r.n});
    t.field(r.residual);
    t.field(r.pushed_error);
    t.end_row();
  }
  st.add_table("basin.csv", t);
}

json base_manifest(const ExperimentConfig& cfg) {
  json m;
  m["artifact"] = "renorm2";
  m["version"] = kVersion;
  m["created_utc"] = utc_now();
  m["mode"] = cfg.mode;
  m["seed"] = cfg.seed;
  m["config"] = detail::echo_config(cfg);
  return m;
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot open `" + path.string() + "` for writing");
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw Error("short write on `" + path.string() + "`");
}

/// tmp file plus rename, so a manifest is either absent or complete.
void write_manifest(const fs::path& dir, const json& m) {
  fs::path tmp = dir / "manifest.json.tmp";
  write_file(tmp, m.dump(2) + "\n");
  fs::rename(tmp, dir / "manifest.json");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[19] = "0x";
  static const char* hex = "0123456789abcdef";
  for (int i = 0; i < 16; ++i) {
    buf[2 + i] = hex[(h >> (60 - 4 * i)) & 0xF];
  }
  return std::string(buf, 18);
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  RunState st;
  fs::path dir(cfg.out_dir);

  auto fail = [&](const char* type, const std::string& message) {
    fs::create_directories(dir);
    json m = base_manifest(cfg);
    m["status"] = "error";
    m["error"] = {{"type", type}, {"message", message}};
    m["hypotheses"] = st.hypotheses;
    m["tables"] = json::array();
    write_manifest(dir, m);
  };

  try {
    if (cfg.mode == "iterate") {
      run_iterate(cfg, st);
    } else if (cfg.mode == "renorm") {
      run_renorm(cfg, st);
    } else if (cfg.mode == "limit") {
      run_limit(cfg, st);
    } else if (cfg.mode == "scan") {
      run_scan(cfg, st);
    } else if (cfg.mode == "counterexample") {
      run_counterexample(cfg, st);
    } else if (cfg.mode == "zalcman") {
      run_zalcman(cfg, st);
    } else if (cfg.mode == "correspondence") {
      run_correspondence(cfg, st);
    } else if (cfg.mode == "basin") {
      run_basin(cfg, st);
    } else {
      throw ConfigError("config: unknown mode `" + cfg.mode + "`");
    }
  } catch (const ConfigError& e) {
    fail("config", e.what());
    throw;
  } catch (const HypothesisError& e) {
    fail("hypothesis", e.what());
    throw;
  } catch (const EvaluationError& e) {
    fail("evaluation", e.what());
    throw;
  } catch (const DiagnosticError& e) {
    fail("diagnostic", e.what());
    throw;
  } catch (const Error& e) {
    fail("error", e.what());
    throw;
  }

  fs::create_directories(dir);
  RunResult out;
  json tables = json::array();
  for (const auto& [name, bytes] : st.files) {
    write_file(dir / name, bytes);
    TableRecord rec{name, 0, fnv1a64(bytes)};
    // rows = lines minus the header
    for (char c : bytes) rec.rows += c == '\n';
    if (rec.rows > 0) --rec.rows;
    tables.push_back(
        {{"file", rec.file}, {"rows", rec.rows}, {"fnv1a64", rec.checksum}});
    out.tables.push_back(std::move(rec));
  }
  json m = base_manifest(cfg);
  m["status"] = "ok";
  m["hypotheses"] = st.hypotheses;
  m["result"] = st.result;
  m["tables"] = tables;
  write_manifest(dir, m);
  out.manifest_path = (dir / "manifest.json").string();
  return out;
}

}
