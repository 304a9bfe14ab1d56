#pragma once

#include <functional>
#include <vector>

#include "renorm2/elementary.hpp"
#include "renorm2/jet.hpp"

namespace renorm2 {

/// Dense bivariate polynomial sum c_ij z^i w^j.
class BiPoly {
public:
  BiPoly() : c_(1, std::vector<Complex>(1, Complex{0.0})) {}

  static BiPoly constant(const Complex& v);
  static BiPoly var_z();
  static BiPoly var_w();
  static BiPoly monomial(std::size_t i, std::size_t j, const Complex& v);
  /// Univariate jet in u read as a polynomial in z.
  static BiPoly from_jet(const Jet& j);

  std::size_t deg_z() const { return c_.size() - 1; }
  std::size_t deg_w() const { return c_[0].size() - 1; }
  Complex coeff(std::size_t i, std::size_t j) const;
  void set_coeff(std::size_t i, std::size_t j, const Complex& v);

  Complex eval(const Complex& z, const Complex& w) const;
  BiPoly dz() const;
  BiPoly dw() const;

private:
  // Rectangular table, c_[i][j] is the z^i w^j coefficient.
  std::vector<std::vector<Complex>> c_;
  friend BiPoly add(const BiPoly&, const BiPoly&);
  friend BiPoly mul(const BiPoly&, const BiPoly&);
};

BiPoly add(const BiPoly& a, const BiPoly& b);
BiPoly mul(const BiPoly& a, const BiPoly& b);
BiPoly scale(const BiPoly& a, const Complex& s);
/// p with z replaced by qz and w replaced by qw.
BiPoly substitute(const BiPoly& p, const BiPoly& qz, const BiPoly& qw);

/// Polynomial self-map of C^2 with exact derivatives.
struct Map2 {
  BiPoly f;  // first component
  BiPoly g;  // second component

  CPoint operator()(const CPoint& p) const {
    return {f.eval(p.x, p.y), g.eval(p.x, p.y)};
  }
  Mat2 jacobian(const CPoint& p) const;
};

Map2 compose(const Map2& outer, const Map2& inner);
Map2 identity_map();
Map2 diagonal_map(const Complex& l1, const Complex& l2);
/// (z, w + c z^2).
Map2 quadratic_shear(const Complex& c);
Map2 translation(const CPoint& t);
Map2 linear_map(const Mat2& m);
/// (alpha z, beta w + h(z)) with the polynomial part of h up to max_degree.
Map2 from_elementary(const ElementaryMap& f, std::size_t max_degree);

/// Polynomial automorphism with a closed-form inverse and a located
/// repelling fixed point.
struct Automorphism2D {
  Map2 forward;
  Map2 inverse;
  CPoint fixed_point;
  Complex lambda1;  // multiplier along the first coordinate of the chart
  Complex lambda2;

  bool repulsive() const {
    return std::abs(lambda1) > 1.0 && std::abs(lambda2) > 1.0;
  }
};

struct FixedPointOptions {
  double tolerance = 1e-12;
  int max_iterations = 64;
};

/// Newton search for H(p) = p from the guess.  Throws DiagnosticError with
/// the iteration trace when the linearization is singular or the residual
/// stalls above tolerance.
CPoint find_fixed_point(const Map2& H, const CPoint& guess,
                        const FixedPointOptions& opts = {});

/// Checks forward/inverse on a fixed point sample, locates the fixed point
/// and reads the multipliers off the differential.
Automorphism2D make_automorphism(Map2 forward, Map2 inverse,
                                 const CPoint& guess,
                                 const FixedPointOptions& opts = {});

struct ResonanceCheck {
  bool resonant = false;
  int power = 0;
  const char* relation = "";  // which identity nearly holds
  double min_gap = 0.0;       // smallest relative distance seen
};

/// Scans lambda1^k against lambda2 and lambda2^k against lambda1 for
/// k = 1..max_power.
ResonanceCheck check_resonance(const Complex& l1, const Complex& l2,
                               int max_power = 16, double rel_tol = 1e-9);

struct ProbeGrid {
  double radius = 0.1;
  int per_axis = 9;
};

struct ConjugationOptions {
  int reference_gap = 5;       // depth offset for the decrease check
  double residual_floor = 1e-13;
  int resonance_max_power = 16;
  double resonance_rel_tol = 1e-9;
};

/// Linearizing approximant at depth n: n inverse steps pulled back through
/// the diagonal normal form, psi = T^n o H^{-n} in the chart that puts the
/// fixed point at 0 and the differential in diagonal form.
struct ConjugationApprox {
  int depth = 0;
  ElementaryMap normal_form;  // diagonal: h = 0
  std::function<CPoint(const CPoint&)> psi;
  std::function<CPoint(const CPoint&)> psi_inverse;
  double residual = 0.0;            // sup |psi o H - T o psi| on the probe
  double reference_residual = 0.0;  // same at the shallower reference depth
  int reference_depth = 0;
};

ConjugationApprox approximate_conjugation(const Automorphism2D& H, int depth,
                                          const ProbeGrid& probe = {},
                                          const ConjugationOptions& opts = {});

struct PushedRow {
  int n = 0;
  double residual = 0.0;
  double pushed_error = 0.0;
};

/// For each depth n: the conjugation residual, and the distance between the
/// renormalized composite pushed through psi_n^{-1} and the pushed limit
/// shear, both sampled on a probe polydisk at the origin of the normal-form
/// chart.
std::vector<PushedRow> pushed_family_scan(const Automorphism2D& H, int N,
                                          const std::vector<int>& depths,
                                          const ProbeGrid& probe = {},
                                          std::size_t order = kDefaultOrder,
                                          const ConjugationOptions& opts = {});

struct ConjugacyReport {
  double max_defect = 0.0;  // sup |f - phi^{-1} o F o phi| on the sample
  std::vector<ScanRow> table;
};

/// Verifies that f equals phi^{-1} o F o phi on a sample and reports the
/// renormalized convergence table pushed through phi^{-1}.
ConjugacyReport verify_polynomial_conjugacy(
    const Map2& f, const Map2& phi, const Map2& phi_inverse,
    const ElementaryMap& F, int N, const std::vector<int>& depths,
    const ProbeGrid& probe = {}, std::size_t order = kDefaultOrder);

}
