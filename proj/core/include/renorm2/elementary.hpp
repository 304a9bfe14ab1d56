#pragma once

#include <vector>

#include "renorm2/jet.hpp"

namespace renorm2 {

/// The map (u, v) -> (alpha*u, beta*v + h(u)) of C^2.
struct ElementaryMap {
  Complex alpha;
  Complex beta;
  CoefficientRule h;

  bool invertible() const {
    return alpha != Complex{0.0} && beta != Complex{0.0};
  }
};

/// Triangular polynomial map (u, v) -> (u_mult*u, q(u) + v_mult*v), the
/// shape of every map produced by this module.
struct PolyMap2 {
  Complex u_mult{1.0};
  Jet q;
  Complex v_mult{1.0};

  static PolyMap2 identity(std::size_t order) {
    return {Complex{1.0}, Jet(order), Complex{1.0}};
  }

  CPoint operator()(const CPoint& p) const {
    return {u_mult * p.x, evaluate(q, p.x) + v_mult * p.y};
  }
};

/// (f o g) computed exactly through the triangular structure.
PolyMap2 compose(const PolyMap2& f, const PolyMap2& g);

/// Record of the expansion inequalities for a truncation degree N:
/// |alpha| > 1, |beta| > 1 and |beta| < |alpha|^N.
struct HypothesisRecord {
  const char* name;
  double value;
  double margin;
  bool ok;
};

struct RenormPlan {
  int truncation_degree = 1;
  double rate = 0.0;  // |beta| / |alpha|^N
  HypothesisRecord alpha_expanding{"abs(alpha) > 1", 0.0, 0.0, false};
  HypothesisRecord beta_expanding{"abs(beta) > 1", 0.0, 0.0, false};
  HypothesisRecord gap{"abs(beta) < abs(alpha)^N", 0.0, 0.0, false};

  bool valid() const {
    return alpha_expanding.ok && beta_expanding.ok && gap.ok;
  }
  /// Throws HypothesisError naming the first failed inequality.
  void require() const;

  static RenormPlan analyze(const Complex& alpha, const Complex& beta, int N);
};

/// Closed form of the n-th iterate, n >= 0.
PolyMap2 iterate(const ElementaryMap& f, int n, std::size_t order = kDefaultOrder);

/// Closed form of the n-th inverse iterate, n >= 0; needs invertibility.
PolyMap2 inverse_iterate(const ElementaryMap& f, int n,
                         std::size_t order = kDefaultOrder);

/// Inverse iterate of the degree-N head map (alpha*u, beta*v + trunc_N h).
PolyMap2 truncated_inverse(const ElementaryMap& f, int N, int n,
                           std::size_t order = kDefaultOrder);

/// n-th renormalized composite: the n-th iterate applied after the n-th
/// truncated inverse collapses to the shear (u, psi_n(u) + v).  psi_n is
/// accumulated per degree from the tail coefficients; the u and v factors
/// are exactly 1 by construction.
PolyMap2 renorm_compose(const ElementaryMap& f, int N, int n,
                        std::size_t order = kDefaultOrder);

/// Coefficients of the limiting shear: psi_l = h_l / (alpha^l - beta) for
/// l >= N, zero below.
Jet renorm_limit(const ElementaryMap& f, int N, std::size_t order = kDefaultOrder);

/// Smallest N >= 1 with |beta| < |alpha|^N (strict).
int min_truncation_degree(const Complex& alpha, const Complex& beta);
int min_truncation_degree(const ElementaryMap& f);

struct ScanRow {
  int n;
  double sup_error;
};

/// Grid points of the closed disk |z - center| <= radius: a per_axis x
/// per_axis real/imaginary lattice clipped to the disk, row-major order.
std::vector<Complex> disk_grid(const Complex& center, double radius,
                               int per_axis);

/// sup |renorm_compose(n) - limit shear| over the sampled polydisk, one row
/// per requested n.  The difference of two triangular shears with unit
/// factors does not depend on v, so points are sampled as (u, v=u).
std::vector<ScanRow> convergence_scan(const ElementaryMap& f, int N,
                                      double radius, int grid,
                                      const std::vector<int>& n_list,
                                      std::size_t order = kDefaultOrder);

/// u^2-coefficient of the k-th linearly renormalized iterate of
/// (alpha*u, beta*v + u^2): beta^{-1} (1 + c + ... + c^{k-1}), c = alpha^2/beta.
Complex linear_renorm_coefficient(const Complex& alpha, const Complex& beta,
                                  int k);

}
