#pragma once

#include <string>
#include <vector>

#include "renorm2/elementary.hpp"
#include "renorm2/jet.hpp"

namespace renorm2 {

/// Positive rational exponent in lowest terms.
struct Rational {
  long long num = 0;
  long long den = 1;

  static Rational make(long long num, long long den);
  /// Accepts "p/q" or a plain integer string.
  static Rational parse(const std::string& text);
  double value() const;
  bool integral() const { return den == 1; }
};

/// One term a * (z - zeta)^lambda; zeta must be away from the origin.
struct AlgebraicTerm {
  Complex a;
  Complex zeta;
  Rational lambda;
};

/// Finite sum of fractional-power terms, all branch points off the origin.
struct AlgebraicPart {
  std::vector<AlgebraicTerm> terms;

  /// min |zeta_i|; infinite when there are no terms.
  double branch_radius() const;
};

/// Taylor jet at 0 of the branch fixed by the principal power at the
/// origin: each term expands as (-zeta)^lambda * (1 - z/zeta)^lambda with
/// the binomial series, valid on |z| < |zeta|.  Integer exponents reduce to
/// exact polynomials.
Jet branch_germ(const AlgebraicPart& a, std::size_t order);

/// The same branch evaluated directly (no series) at a point of the disk
/// |z| < branch_radius().
Complex branch_value(const AlgebraicPart& a, const Complex& z);

/// Correspondence data (c1*u, c2*v + h(u)) where h splits into an entire
/// series and an algebraic branch; both multipliers expand.  The stored
/// offset makes the combined germ vanish at the origin.
struct ElementaryCorrespondence {
  Complex c1;
  Complex c2;
  CoefficientRule entire;
  AlgebraicPart algebraic;
  Complex offset{0.0};
  double rho = 0.0;  // branch radius of the algebraic part

  /// Entire coefficients with the offset folded into degree 0.
  CoefficientRule entire_effective() const;
  /// Elementary map carrying only the entire data; the shared backbone for
  /// every operation that ignores the algebraic branch.
  ElementaryMap entire_reduction() const;
  /// Jet at 0 of the full germ h = entire + branch + offset.
  Jet germ_jet(std::size_t order) const;
  /// Entire series + branch + offset evaluated directly at z, summing the
  /// entire rule to the given order.
  Complex germ_value(const Complex& z, std::size_t order) const;

  /// Validates the multipliers, branch points and the fixed-point
  /// normalization h(0) = 0; `normalize` absorbs a nonzero h(0) into the
  /// offset instead of rejecting it.
  static ElementaryCorrespondence create(const Complex& c1, const Complex& c2,
                                         CoefficientRule entire,
                                         AlgebraicPart algebraic,
                                         bool normalize = false,
                                         double tol = 1e-12);
};

/// Jet of one branch of the n-th iterate, with the disk on which every
/// intermediate argument stays inside the branch domain.
struct BranchIterate {
  int n = 1;
  PolyMap2 germ;
  double validity_radius = 0.0;  // rho / |c1|^{n-1}
};

BranchIterate branch_iterate(const ElementaryCorrespondence& c, int n,
                             std::size_t order = kDefaultOrder);

/// Left inverse of the n-th branch iterate up to entire tail: scales both
/// coordinates down by c^n and subtracts the correction
///   alpha_n(u) = sum_{k=1..n} c2^{-k} [P_N(c1^{-n-1+k} u) + A(c1^{-n-1+k} u)]
/// where P_N truncates the entire part and the algebraic branch A is
/// evaluated exactly.  Composing the branch iterate with this map leaves
/// the shear (u, psi_n(u) + v) built from entire tail coefficients only.
class AlgebraicRenormalizer {
public:
  AlgebraicRenormalizer(ElementaryCorrespondence corr, int N, int n,
                        std::size_t order);

  int depth() const { return n_; }
  int truncation_degree() const { return N_; }
  /// Arguments must satisfy |u| < validity_radius().
  double validity_radius() const;
  Complex correction(const Complex& u) const;  // alpha_n(u)
  CPoint operator()(const CPoint& p) const;

private:
  ElementaryCorrespondence corr_;
  int N_;
  int n_;
  Jet head_;  // P_N of the effective entire part
};

AlgebraicRenormalizer renormalizer(const ElementaryCorrespondence& c, int N,
                                   int n, std::size_t order = kDefaultOrder);

/// Shear part of branch_iterate(n) composed with renormalizer(n); the
/// algebraic contributions cancel exactly, so this is the elementary
/// renormalized composite of the entire reduction.
PolyMap2 renorm_compose(const ElementaryCorrespondence& c, int N, int n,
                        std::size_t order = kDefaultOrder);

/// Limiting shear over the entire tail: psi_l = h_l / (c1^l - c2), l >= N.
Jet renorm_limit(const ElementaryCorrespondence& c, int N,
                 std::size_t order = kDefaultOrder);

std::vector<ScanRow> convergence_scan(const ElementaryCorrespondence& c, int N,
                                      double radius, int grid,
                                      const std::vector<int>& n_list,
                                      std::size_t order = kDefaultOrder);

}
