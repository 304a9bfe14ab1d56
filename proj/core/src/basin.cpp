#include "renorm2/basin.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "renorm2/errors.hpp"

namespace renorm2 {

namespace {

Complex int_power(Complex base, long e) {
  Complex acc{1.0};
  for (; e > 0; e >>= 1) {
    if (e & 1) acc *= base;
    base *= base;
  }
  return acc;
}

void check_point(const CPoint& p, const char* where) {
  if (!is_finite(p)) {
    throw EvaluationError(std::string(where) + ": value is not finite");
  }
}

}  // namespace

BiPoly BiPoly::constant(const Complex& v) {
  BiPoly p;
  p.c_[0][0] = v;
  return p;
}

BiPoly BiPoly::var_z() { return monomial(1, 0, Complex{1.0}); }

BiPoly BiPoly::var_w() { return monomial(0, 1, Complex{1.0}); }

BiPoly BiPoly::monomial(std::size_t i, std::size_t j, const Complex& v) {
  BiPoly p;
  p.c_.assign(i + 1, std::vector<Complex>(j + 1, Complex{0.0}));
  p.c_[i][j] = v;
  return p;
}

BiPoly BiPoly::from_jet(const Jet& j) {
  BiPoly p;
  p.c_.assign(j.order() + 1, std::vector<Complex>(1, Complex{0.0}));
  for (std::size_t i = 0; i <= j.order(); ++i) p.c_[i][0] = j.coeff(i);
  return p;
}

Complex BiPoly::coeff(std::size_t i, std::size_t j) const {
  if (i >= c_.size() || j >= c_[0].size()) return Complex{0.0};
  return c_[i][j];
}

void BiPoly::set_coeff(std::size_t i, std::size_t j, const Complex& v) {
  if (j >= c_[0].size()) {
    for (auto& row : c_) row.resize(j + 1, Complex{0.0});
  }
  if (i >= c_.size()) {
    c_.resize(i + 1, std::vector<Complex>(c_[0].size(), Complex{0.0}));
  }
  c_[i][j] = v;
}

Complex BiPoly::eval(const Complex& z, const Complex& w) const {
  Complex acc{0.0};
  for (std::size_t i = c_.size(); i-- > 0;) {
    Complex row{0.0};
    for (std::size_t j = c_[i].size(); j-- > 0;) row = row * w + c_[i][j];
    acc = acc * z + row;
  }
  return acc;
}

BiPoly BiPoly::dz() const {
  BiPoly r;
  if (c_.size() == 1) {
    r.c_.assign(1, std::vector<Complex>(c_[0].size(), Complex{0.0}));
    return r;
  }
  r.c_.assign(c_.size() - 1, std::vector<Complex>(c_[0].size(), Complex{0.0}));
  for (std::size_t i = 1; i < c_.size(); ++i)
    for (std::size_t j = 0; j < c_[i].size(); ++j)
      r.c_[i - 1][j] = double(i) * c_[i][j];
  return r;
}

BiPoly BiPoly::dw() const {
  BiPoly r;
  std::size_t cols = c_[0].size();
  r.c_.assign(c_.size(), std::vector<Complex>(cols == 1 ? 1 : cols - 1,
                                              Complex{0.0}));
  if (cols == 1) return r;
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 1; j < cols; ++j)
      r.c_[i][j - 1] = double(j) * c_[i][j];
  return r;
}

BiPoly add(const BiPoly& a, const BiPoly& b) {
  BiPoly r;
  std::size_t rows = std::max(a.c_.size(), b.c_.size());
  std::size_t cols = std::max(a.c_[0].size(), b.c_[0].size());
  r.c_.assign(rows, std::vector<Complex>(cols, Complex{0.0}));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      r.c_[i][j] = a.coeff(i, j) + b.coeff(i, j);
  return r;
}

BiPoly mul(const BiPoly& a, const BiPoly& b) {
  BiPoly r;
  std::size_t rows = a.c_.size() + b.c_.size() - 1;
  std::size_t cols = a.c_[0].size() + b.c_[0].size() - 1;
  r.c_.assign(rows, std::vector<Complex>(cols, Complex{0.0}));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < a.c_[i].size(); ++j) {
      if (a.c_[i][j] == Complex{0.0}) continue;
      for (std::size_t k = 0; k < b.c_.size(); ++k)
        for (std::size_t l = 0; l < b.c_[k].size(); ++l)
          r.c_[i + k][j + l] += a.c_[i][j] * b.c_[k][l];
    }
  return r;
}

BiPoly scale(const BiPoly& a, const Complex& s) {
  return mul(a, BiPoly::constant(s));
}

BiPoly substitute(const BiPoly& p, const BiPoly& qz, const BiPoly& qw) {
  BiPoly acc;
  for (std::size_t i = p.deg_z() + 1; i-- > 0;) {
    BiPoly row;
    for (std::size_t j = p.deg_w() + 1; j-- > 0;) {
      row = add(mul(row, qw), BiPoly::constant(p.coeff(i, j)));
    }
    acc = add(mul(acc, qz), row);
  }
  return acc;
}

Mat2 Map2::jacobian(const CPoint& p) const {
  return {f.dz().eval(p.x, p.y), f.dw().eval(p.x, p.y),
          g.dz().eval(p.x, p.y), g.dw().eval(p.x, p.y)};
}

Map2 compose(const Map2& outer, const Map2& inner) {
  return {substitute(outer.f, inner.f, inner.g),
          substitute(outer.g, inner.f, inner.g)};
}

Map2 identity_map() { return {BiPoly::var_z(), BiPoly::var_w()}; }

Map2 diagonal_map(const Complex& l1, const Complex& l2) {
  return {BiPoly::monomial(1, 0, l1), BiPoly::monomial(0, 1, l2)};
}

Map2 quadratic_shear(const Complex& c) {
  return {BiPoly::var_z(), add(BiPoly::var_w(), BiPoly::monomial(2, 0, c))};
}

Map2 translation(const CPoint& t) {
  return {add(BiPoly::var_z(), BiPoly::constant(t.x)),
          add(BiPoly::var_w(), BiPoly::constant(t.y))};
}

Map2 linear_map(const Mat2& m) {
  return {add(BiPoly::monomial(1, 0, m.a00), BiPoly::monomial(0, 1, m.a01)),
          add(BiPoly::monomial(1, 0, m.a10), BiPoly::monomial(0, 1, m.a11))};
}

Map2 from_elementary(const ElementaryMap& f, std::size_t max_degree) {
  BiPoly g = BiPoly::monomial(0, 1, f.beta);
  for (std::size_t l = 0; l <= max_degree; ++l) {
    Complex c = f.h.coeff(l);
    if (c != Complex{0.0}) g = add(g, BiPoly::monomial(l, 0, c));
  }
  return {BiPoly::monomial(1, 0, f.alpha), g};
}

CPoint find_fixed_point(const Map2& H, const CPoint& guess,
                        const FixedPointOptions& opts) {
  CPoint p = guess;
  std::ostringstream trace;
  for (int it = 0; it < opts.max_iterations; ++it) {
    CPoint r = H(p) - p;
    check_point(r, "find_fixed_point");
    trace << "  step " << it << ": p = (" << p.x << ", " << p.y
          << "), |H(p) - p| = " << sup_norm(r) << "\n";
    if (sup_norm(r) <= opts.tolerance) return p;
    Mat2 j = H.jacobian(p);
    j.a00 -= 1.0;
    j.a11 -= 1.0;
    Complex d = det(j);
    if (std::abs(d) < 1e-14) {
      throw DiagnosticError(
          "find_fixed_point: differential of H - id is singular at the "
          "current point (|det| = " +
          std::to_string(std::abs(d)) + ")\n" + trace.str());
    }
    CPoint delta{(r.x * j.a11 - r.y * j.a01) / d,
                 (j.a00 * r.y - j.a10 * r.x) / d};
    p = p - delta;
  }
  throw DiagnosticError(
      "find_fixed_point: no convergence within " +
      std::to_string(opts.max_iterations) + " steps\n" + trace.str());
}

namespace {

struct EigenFrame {
  Complex l1;
  Complex l2;
  Mat2 basis;      // columns are the chart directions
  Mat2 basis_inv;
};

EigenFrame eigen_frame(const Mat2& j) {
  double scale = std::max({std::abs(j.a00), std::abs(j.a01), std::abs(j.a10),
                           std::abs(j.a11)});
  if (std::abs(j.a01) <= 1e-10 * scale && std::abs(j.a10) <= 1e-10 * scale) {
    // Already diagonal; keep the coordinate roles so elementary inputs come
    // back out unchanged.
    return {j.a00, j.a11, Mat2{1.0, 0.0, 0.0, 1.0}, Mat2{1.0, 0.0, 0.0, 1.0}};
  }
  Complex tr = j.a00 + j.a11;
  Complex disc = std::sqrt(tr * tr - 4.0 * det(j));
  Complex l1 = (tr + disc) / 2.0;
  Complex l2 = (tr - disc) / 2.0;
  if (std::abs(l2) > std::abs(l1)) std::swap(l1, l2);
  auto eigenvector = [&](const Complex& l) -> CPoint {
    CPoint v = std::abs(j.a01) >= std::abs(j.a10)
                   ? CPoint{j.a01, l - j.a00}
                   : CPoint{l - j.a11, j.a10};
    double m = sup_norm(v);
    if (m == 0.0) return {Complex{1.0}, Complex{0.0}};
    return {v.x / m, v.y / m};
  };
  CPoint v1 = eigenvector(l1);
  CPoint v2 = eigenvector(l2);
  Mat2 e{v1.x, v2.x, v1.y, v2.y};
  Complex d = det(e);
  if (std::abs(d) <= 1e-10) {
    throw HypothesisError(
        "differential at the fixed point is not diagonalizable "
        "(eigenvectors are parallel)");
  }
  Mat2 einv{e.a11 / d, -e.a01 / d, -e.a10 / d, e.a00 / d};
  return {l1, l2, e, einv};
}

}  // namespace

Automorphism2D make_automorphism(Map2 forward, Map2 inverse,
                                 const CPoint& guess,
                                 const FixedPointOptions& opts) {
  std::mt19937_64 rng(20240229u);
  std::uniform_real_distribution<double> pick(-0.5, 0.5);
  double worst = 0.0;
  for (int s = 0; s < 16; ++s) {
    CPoint x{guess.x + Complex{pick(rng), pick(rng)},
             guess.y + Complex{pick(rng), pick(rng)}};
    worst = std::max(worst, sup_norm(forward(inverse(x)) - x));
    worst = std::max(worst, sup_norm(inverse(forward(x)) - x));
  }
  if (!(worst <= 1e-10)) {
    throw HypothesisError(
        "make_automorphism: forward and inverse do not compose to the "
        "identity on sample points (worst defect " +
        std::to_string(worst) + ")");
  }
  CPoint p = find_fixed_point(forward, guess, opts);
  EigenFrame frame = eigen_frame(forward.jacobian(p));
  return {std::move(forward), std::move(inverse), p, frame.l1, frame.l2};
}

ResonanceCheck check_resonance(const Complex& l1, const Complex& l2,
                               int max_power, double rel_tol) {
  ResonanceCheck out;
  out.min_gap = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= max_power; ++k) {
    double g1 = std::abs(int_power(l1, k) - l2) / std::max(1.0, std::abs(l2));
    if (g1 < out.min_gap) {
      out.min_gap = g1;
      out.power = k;
      out.relation = "lambda1^k = lambda2";
    }
    double g2 = std::abs(int_power(l2, k) - l1) / std::max(1.0, std::abs(l1));
    if (g2 < out.min_gap) {
      out.min_gap = g2;
      out.power = k;
      out.relation = "lambda2^k = lambda1";
    }
  }
  out.resonant = out.min_gap <= rel_tol;
  return out;
}

namespace {

std::function<CPoint(const CPoint&)> make_psi(const Automorphism2D& H,
                                              const EigenFrame& frame, int n) {
  Complex l1n = int_power(frame.l1, n);
  Complex l2n = int_power(frame.l2, n);
  Map2 inv = H.inverse;
  CPoint p = H.fixed_point;
  Mat2 einv = frame.basis_inv;
  return [=](const CPoint& x) {
    CPoint y = x;
    for (int k = 0; k < n; ++k) y = inv(y);
    CPoint u = apply(einv, y - p);
    CPoint out{l1n * u.x, l2n * u.y};
    check_point(out, "conjugation approximant");
    return out;
  };
}

std::function<CPoint(const CPoint&)> make_psi_inverse(const Automorphism2D& H,
                                                      const EigenFrame& frame,
                                                      int n) {
  Complex l1n = int_power(frame.l1, n);
  Complex l2n = int_power(frame.l2, n);
  Map2 fwd = H.forward;
  CPoint p = H.fixed_point;
  Mat2 e = frame.basis;
  return [=](const CPoint& y) {
    CPoint u{y.x / l1n, y.y / l2n};
    CPoint x = p + apply(e, u);
    for (int k = 0; k < n; ++k) x = fwd(x);
    check_point(x, "conjugation approximant inverse");
    return x;
  };
}

std::vector<CPoint> product_grid(const CPoint& center, const ProbeGrid& probe) {
  std::vector<Complex> axis = disk_grid(Complex{0.0}, probe.radius,
                                        probe.per_axis);
  std::vector<CPoint> out;
  out.reserve(axis.size() * axis.size());
  for (const Complex& z : axis)
    for (const Complex& w : axis) out.push_back({center.x + z, center.y + w});
  return out;
}

double conjugation_residual(const Automorphism2D& H, const EigenFrame& frame,
                            const std::function<CPoint(const CPoint&)>& psi,
                            const std::vector<CPoint>& grid) {
  double worst = 0.0;
  for (const CPoint& x : grid) {
    CPoint lhs = psi(H.forward(x));
    CPoint rhs_in = psi(x);
    CPoint rhs{frame.l1 * rhs_in.x, frame.l2 * rhs_in.y};
    double r = sup_norm(lhs - rhs);
    if (!is_finite(r)) {
      throw EvaluationError("conjugation residual is not finite");
    }
    worst = std::max(worst, r);
  }
  return worst;
}

}  // namespace

ConjugationApprox approximate_conjugation(const Automorphism2D& H, int depth,
                                          const ProbeGrid& probe,
                                          const ConjugationOptions& opts) {
  if (depth < 0) throw HypothesisError("conjugation depth must be >= 0");
  if (!H.repulsive()) {
    throw HypothesisError(
        "fixed point is not repulsive: |lambda1| = " +
        std::to_string(std::abs(H.lambda1)) + ", |lambda2| = " +
        std::to_string(std::abs(H.lambda2)));
  }
  ResonanceCheck rc = check_resonance(H.lambda1, H.lambda2,
                                      opts.resonance_max_power,
                                      opts.resonance_rel_tol);
  if (rc.resonant) {
    throw HypothesisError(
        "resonant multipliers: " + std::string(rc.relation) + " holds for k = " +
        std::to_string(rc.power) + " (gap " + std::to_string(rc.min_gap) +
        "); the diagonal normal form does not apply");
  }
  EigenFrame frame = eigen_frame(H.forward.jacobian(H.fixed_point));

  ConjugationApprox out;
  out.depth = depth;
  out.normal_form = {frame.l1, frame.l2, CoefficientRule::zero()};
  out.psi = make_psi(H, frame, depth);
  out.psi_inverse = make_psi_inverse(H, frame, depth);

  std::vector<CPoint> grid = product_grid(H.fixed_point, probe);
  out.residual = conjugation_residual(H, frame, out.psi, grid);

  int ref = depth > 1 ? std::max(1, depth - opts.reference_gap) : depth;
  out.reference_depth = ref;
  if (ref < depth) {
    out.reference_residual =
        conjugation_residual(H, frame, make_psi(H, frame, ref), grid);
    if (out.residual > out.reference_residual &&
        out.residual > opts.residual_floor) {
      throw DiagnosticError(
          "conjugation residual is not decreasing: depth " +
          std::to_string(depth) + " gives " + std::to_string(out.residual) +
          " against " + std::to_string(out.reference_residual) +
          " at depth " + std::to_string(ref) +
          "; the probe region likely leaves the repelling basin");
    }
  } else {
    out.reference_residual = out.residual;
  }
  return out;
}

std::vector<PushedRow> pushed_family_scan(const Automorphism2D& H, int N,
                                          const std::vector<int>& depths,
                                          const ProbeGrid& probe,
                                          std::size_t order,
                                          const ConjugationOptions& opts) {
  ElementaryMap normal{H.lambda1, H.lambda2, CoefficientRule::zero()};
  RenormPlan::analyze(normal.alpha, normal.beta, N).require();
  Jet psi_lim = renorm_limit(normal, N, order);
  std::vector<CPoint> wgrid = product_grid(CPoint{}, probe);

  std::vector<PushedRow> rows;
  rows.reserve(depths.size());
  for (int n : depths) {
    ConjugationApprox conj = approximate_conjugation(H, n, probe, opts);
    PolyMap2 fn = truncated_inverse(normal, N, n, order);
    double worst = 0.0;
    for (const CPoint& w : wgrid) {
      CPoint pushed = conj.psi_inverse(fn(w));
      for (int k = 0; k < n; ++k) pushed = H.forward(pushed);
      CPoint target = conj.psi_inverse(
          CPoint{w.x, evaluate(psi_lim, w.x) + w.y});
      double err = sup_norm(pushed - target);
      if (!is_finite(err)) {
        throw EvaluationError("pushed family error is not finite");
      }
      worst = std::max(worst, err);
    }
    rows.push_back({n, conj.residual, worst});
  }
  return rows;
}

ConjugacyReport verify_polynomial_conjugacy(
    const Map2& f, const Map2& phi, const Map2& phi_inverse,
    const ElementaryMap& F, int N, const std::vector<int>& depths,
    const ProbeGrid& probe, std::size_t order) {
  RenormPlan::analyze(F.alpha, F.beta, N).require();
  PolyMap2 F_once = iterate(F, 1, order);

  std::vector<CPoint> grid = product_grid(CPoint{}, probe);
  ConjugacyReport report;
  for (const CPoint& x : grid) {
    CPoint lhs = f(x);
    CPoint rhs = phi_inverse(F_once(phi(x)));
    report.max_defect = std::max(report.max_defect, sup_norm(lhs - rhs));
  }
  if (!(report.max_defect <= 1e-10)) {
    throw DiagnosticError(
        "conjugacy verification failed: sup |f - phi^-1 o F o phi| = " +
        std::to_string(report.max_defect) + " on the sample grid");
  }

  Jet psi_lim = renorm_limit(F, N, order);
  report.table.reserve(depths.size());
  for (int n : depths) {
    PolyMap2 fn = truncated_inverse(F, N, n, order);
    double worst = 0.0;
    for (const CPoint& w : grid) {
      CPoint pushed = phi_inverse(fn(w));
      for (int k = 0; k < n; ++k) pushed = f(pushed);
      CPoint target =
          phi_inverse(CPoint{w.x, evaluate(psi_lim, w.x) + w.y});
      double err = sup_norm(pushed - target);
      if (!is_finite(err)) {
        throw EvaluationError("pushed conjugacy error is not finite");
      }
      worst = std::max(worst, err);
    }
    report.table.push_back({n, worst});
  }
  return report;
}

}
