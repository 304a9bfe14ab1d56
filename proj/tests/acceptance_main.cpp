// Acceptance gate: eight criteria, one PASS/FAIL line each, nonzero exit
// when any criterion fails.  Oracles are recomputed here from scratch.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "renorm2/basin.hpp"
#include "renorm2/correspondence.hpp"
#include "renorm2/elementary.hpp"
#include "renorm2/zalcman.hpp"

using namespace renorm2;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    pass = false;
    if (!detail.str().empty()) detail << "; ";
    detail << why;
  }
  void limit_runtime(double elapsed, double budget) {
    std::ostringstream note;
    note.precision(2);
    note << elapsed << " s";
    if (!(elapsed < budget)) fail("runtime " + note.str() + " over budget");
  }
};

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

CoefficientRule u_squared() {
  return CoefficientRule::polynomial({Complex{0.0}, Complex{0.0}, Complex{1.0}});
}

// --- AC-1: closed-form iterate vs a fold of single applications ----------

struct TriJet {
  Complex A{1.0};
  std::vector<Complex> q;
  Complex B{1.0};
};

TriJet fold_once(const ElementaryMap& f, const TriJet& g, std::size_t order) {
  TriJet out;
  out.A = f.alpha * g.A;
  out.B = f.beta * g.B;
  out.q.assign(order + 1, Complex{0.0});
  Complex a_pow{1.0};
  for (std::size_t l = 0; l <= order; ++l) {
    out.q[l] = f.h.coeff(l) * a_pow + f.beta * g.q[l];
    a_pow *= g.A;
  }
  return out;
}

Criterion ac1() {
  Criterion c;
  auto t0 = Clock::now();
  std::mt19937_64 rng(20240229u);
  std::uniform_real_distribution<double> mod(1.0 + 1e-3, 3.0);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Complex> coeffs(9);
    for (auto& z : coeffs) z = Complex{box(rng), box(rng)};
    ElementaryMap f{std::polar(mod(rng), angle(rng)),
                    std::polar(mod(rng), angle(rng)),
                    CoefficientRule::polynomial(coeffs)};
    TriJet acc;
    acc.q.assign(9, Complex{0.0});
    for (int n = 1; n <= 8; ++n) {
      acc = fold_once(f, acc, 8);
      PolyMap2 closed = iterate(f, n, 8);
      worst = std::max(worst, std::abs(closed.u_mult - acc.A) /
                                  std::max(1.0, std::abs(acc.A)));
      worst = std::max(worst, std::abs(closed.v_mult - acc.B) /
                                  std::max(1.0, std::abs(acc.B)));
      for (std::size_t l = 0; l <= 8; ++l)
        worst = std::max(worst, std::abs(closed.q.coeff(l) - acc.q[l]) /
                                    std::max(1.0, std::abs(acc.q[l])));
    }
  }
  c.detail << "worst relative error " << fmt(worst) << " over 20 maps, n <= 8";
  if (!(worst <= 1e-10)) c.fail("exceeds 1e-10");
  c.limit_runtime(seconds_since(t0), 5.0);
  return c;
}

// --- AC-2: geometric convergence of the renormalized composites ----------

Criterion ac2() {
  Criterion c;
  auto t0 = Clock::now();
  ElementaryMap f{Complex{2.0}, Complex{3.0}, u_squared()};
  std::vector<int> ns;
  for (int n = 5; n <= 100; n += 5) ns.push_back(n);
  std::vector<ScanRow> table = convergence_scan(f, 2, 2.0, 21, ns);
  double worst_margin = 0.0;
  double at100 = 0.0;
  for (const ScanRow& row : table) {
    double bound = 5.0 * std::pow(0.75, row.n);
    worst_margin = std::max(worst_margin, row.sup_error / bound);
    if (row.n == 100) at100 = row.sup_error;
  }
  c.detail << "sup_error/bound peaks at " << fmt(worst_margin)
           << ", sup_error(100) = " << fmt(at100);
  if (!(worst_margin <= 1.0)) c.fail("bound 5*(3/4)^n violated");
  if (!(at100 <= 1e-10)) c.fail("sup_error(100) above 1e-10");

  Jet psi = renorm_limit(f, 2);
  double coeff_err = std::abs(psi.coeff(2) - Complex{1.0});
  for (std::size_t l = 0; l <= psi.order(); ++l)
    if (l != 2) coeff_err = std::max(coeff_err, std::abs(psi.coeff(l)));
  c.detail << ", limit coefficient error " << fmt(coeff_err);
  if (!(coeff_err <= 1e-12)) c.fail("limit is not u^2 to 1e-12");
  c.limit_runtime(seconds_since(t0), 10.0);
  return c;
}

// --- AC-3: the linear-renormalization counterexample ---------------------

Criterion ac3() {
  Criterion c;
  auto t0 = Clock::now();
  double worst = 0.0;
  for (int k = 40; k <= 50; ++k) {
    Complex a = linear_renorm_coefficient(Complex{2.0}, Complex{3.0}, k);
    Complex b = linear_renorm_coefficient(Complex{2.0}, Complex{3.0}, k + 1);
    worst = std::max(worst, std::abs(std::abs(b / a) - 4.0 / 3.0) / (4.0 / 3.0));
  }
  Complex control = linear_renorm_coefficient(Complex{1.0}, Complex{2.0}, 50);
  double control_err = std::abs(control - Complex{1.0});
  c.detail << "ratio off 4/3 by at most " << fmt(worst * 100.0)
           << "%, control off 1 by " << fmt(control_err);
  if (!(worst <= 0.01)) c.fail("divergence ratio outside 1% of 4/3");
  if (!(control_err <= 0.01)) c.fail("control coefficient outside 1% of 1");
  c.limit_runtime(seconds_since(t0), 1.0);
  return c;
}

// --- AC-4: rescaling extraction for f_n(z) = n z -------------------------

Criterion ac4() {
  Criterion c;
  auto t0 = Clock::now();
  SampledFamily fam = scaled_identity_family();
  ExtractOptions opts;
  opts.count = 50;
  Extraction ex = extract_rescalings(fam, {{}, {}}, 50, opts);
  double worst_rn = 0.0, worst_d0 = 0.0, worst_bound = 0.0;
  bool peaks_ok = true;
  for (std::size_t i = 0; i < ex.seq.entries.size(); ++i) {
    const RescalingEntry& e = ex.seq.entries[i];
    double rn = e.scale * e.n;
    if (rn < 0.9 || rn > 1.1) c.fail("r_n*n = " + fmt(rn) + " at n = " +
                                     std::to_string(e.n));
    worst_rn = std::max(worst_rn, std::abs(rn - 1.0));
    RescaledBound bound = verify_rescaled_bound(fam, ex, e.n);
    worst_d0 = std::max(worst_d0, std::abs(bound.deriv0 - 1.0));
    worst_bound = std::max(worst_bound, bound.max_fs - (2.0 + bound.slack));
    MetricField field{ex.sample, ex.field_values[i], {}};
    PeakCheck check = check_peak_postconditions(
        field, ex.detail[i].argmax_index, ex.detail[i].peak_index,
        ex.detail[i].sigma);
    peaks_ok = peaks_ok && check.ok;
  }
  c.detail << "|r_n*n - 1| <= " << fmt(worst_rn) << ", |deriv0 - 1| <= "
           << fmt(worst_d0) << ", derivative bound margin " << fmt(worst_bound);
  if (!(worst_d0 <= 1e-6)) c.fail("rescaled derivative at 0 off by > 1e-6");
  if (!(worst_bound <= 0.0)) c.fail("derivative bound 2 + slack violated");
  if (!peaks_ok) c.fail("peak postconditions (i)-(iii) failed");
  c.limit_runtime(seconds_since(t0), 10.0);
  return c;
}

// --- AC-5: derivative blow-up of the elementary iterates -----------------

Criterion ac5() {
  Criterion c;
  auto t0 = Clock::now();
  ElementaryMap f{Complex{2.0}, Complex{3.0}, u_squared()};
  SampledFamily fam = elementary_iterate_family(f, 32, {{}, 0.5, 0.5});
  int crossing = -1;
  for (int n = 1; n < 30; ++n) {
    if (fs_derivative(fam, n, {{}, {}}) > 1e6) {
      crossing = n;
      break;
    }
  }
  if (crossing < 0) {
    c.fail("derivative at 0 never exceeded 1e6 before n = 30");
  } else {
    c.detail << "derivative at 0 exceeds 1e6 from n = " << crossing;
  }
  c.limit_runtime(seconds_since(t0), 1.0);
  return c;
}

// --- AC-6: correspondence reduction and entire limit ---------------------

Criterion ac6() {
  Criterion c;
  auto t0 = Clock::now();

  ElementaryCorrespondence plain = ElementaryCorrespondence::create(
      Complex{2.0}, Complex{3.0}, u_squared(), {});
  ElementaryMap f{Complex{2.0}, Complex{3.0}, u_squared()};
  std::vector<int> ns;
  for (int n = 5; n <= 100; n += 5) ns.push_back(n);
  std::vector<ScanRow> via_corr = convergence_scan(plain, 2, 2.0, 21, ns);
  std::vector<ScanRow> via_elem = convergence_scan(f, 2, 2.0, 21, ns);
  double reduction_gap = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i)
    reduction_gap = std::max(reduction_gap,
                             std::abs(via_corr[i].sup_error -
                                      via_elem[i].sup_error));
  c.detail << "reduction gap " << fmt(reduction_gap);
  if (!(reduction_gap <= 1e-12)) c.fail("empty algebraic part deviates");

  AlgebraicPart root;
  root.terms.push_back({Complex{1.0}, Complex{1.0}, Rational::make(1, 2)});
  ElementaryCorrespondence corr = ElementaryCorrespondence::create(
      Complex{2.0}, Complex{3.0},
      CoefficientRule::polynomial(
          {Complex{0.0}, Complex{0.0}, Complex{0.0}, Complex{1.0}}),
      root, true);
  Jet lim = renorm_limit(corr, 2);
  double lim_err = std::abs(lim.coeff(3) - Complex{0.2});
  for (std::size_t l = 0; l <= lim.order(); ++l)
    if (l != 3) lim_err = std::max(lim_err, std::abs(lim.coeff(l)));
  c.detail << ", limit error " << fmt(lim_err);
  if (!(lim_err <= 1e-10)) c.fail("corr_limit is not u^3/5 to 1e-10");

  std::vector<ScanRow> decay =
      convergence_scan(corr, 2, 1.0, 21, {5, 10, 15, 20, 25, 30});
  double span = decay.back().n - decay.front().n;
  double fitted = std::pow(decay.back().sup_error / decay.front().sup_error,
                           1.0 / span);
  c.detail << ", fitted decay ratio " << fmt(fitted);
  if (!(fitted >= 0.70 && fitted <= 0.80))
    c.fail("fitted ratio outside [0.70, 0.80]");
  c.limit_runtime(seconds_since(t0), 10.0);
  return c;
}

// --- AC-7: basin conjugation for the sheared diagonal case ---------------

Criterion ac7() {
  Criterion c;
  auto t0 = Clock::now();

  ResonanceCheck rc = check_resonance(Complex{2.0}, Complex{3.0});
  if (rc.resonant) c.fail("multiplier pair (2, 3) flagged resonant");

  Map2 fwd = compose(compose(quadratic_shear(Complex{-1.0}),
                             diagonal_map(Complex{2.0}, Complex{3.0})),
                     quadratic_shear(Complex{1.0}));
  Map2 inv = compose(compose(quadratic_shear(Complex{-1.0}),
                             diagonal_map(Complex{0.5}, Complex{1.0 / 3.0})),
                     quadratic_shear(Complex{1.0}));
  Automorphism2D H = make_automorphism(fwd, inv, {Complex{0.1}, Complex{0.1}});

  std::vector<PushedRow> rows = pushed_family_scan(H, 2, {5, 10, 15, 20});
  double residual20 = 0.0;
  double worst_pushed_factor = 0.0;
  for (const PushedRow& row : rows) {
    if (row.n == 20) residual20 = row.residual;
    if (row.residual > 0.0)
      worst_pushed_factor =
          std::max(worst_pushed_factor, row.pushed_error / row.residual);
  }
  c.detail << "residual(20) = " << fmt(residual20)
           << ", pushed/residual peaks at " << fmt(worst_pushed_factor);
  if (!(residual20 <= 1e-8)) c.fail("residual at n = 20 above 1e-8");
  if (!(worst_pushed_factor <= 10.0)) c.fail("pushed error above 10x residual");
  c.limit_runtime(seconds_since(t0), 30.0);
  return c;
}

// --- AC-8: guard matrix through the installed command line ---------------

struct GuardCase {
  const char* name;
  const char* mode;
  std::string config;
};

Criterion ac8() {
  Criterion c;
  auto t0 = Clock::now();
  fs::path base = fs::temp_directory_path() / "renorm2_acceptance_guards";
  fs::remove_all(base);
  fs::create_directories(base);

  auto out = [&](int i) { return (base / ("out" + std::to_string(i))).string(); };
  std::vector<GuardCase> cases = {
      {"abs(alpha) <= 1", "renorm",
       R"({"mode":"renorm","map":{"alpha":1,"beta":2,"h":[0,0,1]},"truncation":2,"n":3})"},
      {"abs(beta) <= 1", "renorm",
       R"({"mode":"renorm","map":{"alpha":2,"beta":1,"h":[0,0,1]},"truncation":2,"n":3})"},
      {"abs(beta) >= abs(alpha)^N", "renorm",
       R"({"mode":"renorm","map":{"alpha":2,"beta":5,"h":[0,0,1]},"truncation":2,"n":3})"},
      {"beta = 0", "renorm",
       R"({"mode":"renorm","map":{"alpha":2,"beta":0,"h":[0,0,1]},"truncation":2,"n":3})"},
      {"zeta = 0", "correspondence",
       R"({"mode":"correspondence","correspondence":{"c1":2,"c2":3,"entire":[0,0,0,1],"algebraic":[{"a":1,"zeta":0,"lambda":"1/2"}],"normalize":true}})"},
      {"resonant multipliers", "basin",
       R"({"mode":"basin","map":{"alpha":2,"beta":4,"h":[0,0,1]},"basin":{"model":"shear_conjugate","shear":1,"guess":[0.1,0.1],"depths":[3,6]}})"},
      {"h(0) != 0", "correspondence",
       R"({"mode":"correspondence","correspondence":{"c1":2,"c2":3,"entire":[0,0,0,1],"algebraic":[{"a":1,"zeta":1,"lambda":"1/2"}],"normalize":false}})"},
  };

  int exit3 = 0;
  bool no_tables = true;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    fs::path cfg_path = base / ("case" + std::to_string(i) + ".json");
    {
      std::ofstream cfg(cfg_path);
      cfg << cases[i].config;
    }
    std::string cmd = std::string(RENORM2_CLI_PATH) + " " + cases[i].mode +
                      " --config " + cfg_path.string() + " --out " + out(int(i)) +
                      " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    int code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    if (code == 3) {
      ++exit3;
    } else {
      c.fail(std::string(cases[i].name) + " exited with " +
             std::to_string(code) + " instead of 3");
    }
    fs::path out_dir(out(int(i)));
    if (fs::exists(out_dir))
      for (const auto& entry : fs::directory_iterator(out_dir))
        if (entry.path().extension() == ".csv") {
          no_tables = false;
          c.fail(std::string(cases[i].name) + " emitted " +
                 entry.path().filename().string());
        }
  }
  c.detail << exit3 << "/7 guards exited 3, "
           << (no_tables ? "no tables emitted" : "tables were emitted");
  c.limit_runtime(seconds_since(t0), 1.0);
  fs::remove_all(base);
  return c;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    Criterion (*run)();
  };
  const Entry entries[] = {
      {"AC-1", ac1}, {"AC-2", ac2}, {"AC-3", ac3}, {"AC-4", ac4},
      {"AC-5", ac5}, {"AC-6", ac6}, {"AC-7", ac7}, {"AC-8", ac8},
  };
  int passed = 0;
  for (const Entry& e : entries) {
    Criterion c;
    try {
      c = e.run();
    } catch (const std::exception& ex) {
      c.fail(std::string("unexpected exception: ") + ex.what());
    }
    std::printf("%s %s: %s\n", e.name, c.pass ? "PASS" : "FAIL",
                c.detail.str().c_str());
    std::fflush(stdout);
    if (c.pass) ++passed;
  }
  std::printf("%d/8 criteria passed\n", passed);
  return passed == 8 ? 0 : 1;
}
