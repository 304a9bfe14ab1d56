#include "renorm2/elementary.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace renorm2 {

namespace {

void require_nonnegative(int n, const char* where) {
  if (n < 0) {
    throw HypothesisError(std::string(where) + ": n must be >= 0");
  }
}

void require_invertible(const ElementaryMap& f, const char* where) {
  if (!f.invertible()) {
    throw HypothesisError(std::string(where) +
                          ": map is not invertible (alpha or beta is zero)");
  }
}

/// alpha^0 .. alpha^n.
std::vector<Complex> powers(const Complex& alpha, int n) {
  std::vector<Complex> p(static_cast<std::size_t>(n) + 1);
  p[0] = Complex{1.0};
  for (int j = 1; j <= n; ++j) {
    p[static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(j - 1)] * alpha;
  }
  return p;
}

PolyMap2 iterate_with_head(const Complex& alpha, const Complex& beta,
                           const Jet& head, int n) {
  std::size_t order = head.order();
  if (n == 0) {
    return PolyMap2::identity(order);
  }
  auto apow = powers(alpha, n);
  Jet q(order);
  Complex bpow{1.0};
  for (int k = 0; k < n; ++k) {
    q = add(q, scale(arg_scale(head, apow[static_cast<std::size_t>(n - 1 - k)]),
                     bpow));
    bpow *= beta;
  }
  return {apow[static_cast<std::size_t>(n)], q, bpow};
}

PolyMap2 inverse_iterate_with_head(const Complex& alpha, const Complex& beta,
                                   const Jet& head, int n) {
  std::size_t order = head.order();
  if (n == 0) {
    return PolyMap2::identity(order);
  }
  Complex ai = Complex{1.0} / alpha;
  Complex bi = Complex{1.0} / beta;
  auto aipow = powers(ai, n);
  Jet q(order);
  Complex bipow{1.0};
  for (int k = 1; k <= n; ++k) {
    bipow *= bi;
    q = sub(q, scale(arg_scale(head, aipow[static_cast<std::size_t>(n + 1 - k)]),
                     bipow));
  }
  return {aipow[static_cast<std::size_t>(n)], q, bipow};
}

}  // namespace

PolyMap2 compose(const PolyMap2& f, const PolyMap2& g) {
  Jet q = add(arg_scale(f.q, g.u_mult), scale(g.q, f.v_mult));
  return {f.u_mult * g.u_mult, q, f.v_mult * g.v_mult};
}

void RenormPlan::require() const {
  for (const HypothesisRecord* r :
       {&alpha_expanding, &beta_expanding, &gap}) {
    if (!r->ok) {
      std::ostringstream msg;
      msg << "renormalization hypothesis violated: " << r->name
          << " fails with value " << r->value << " (margin " << r->margin
          << ", N = " << truncation_degree << ")";
      throw HypothesisError(msg.str());
    }
  }
}

RenormPlan RenormPlan::analyze(const Complex& alpha, const Complex& beta,
                               int N) {
  if (N < 1) {
    throw HypothesisError("RenormPlan: truncation degree must be >= 1");
  }
  double aa = std::abs(alpha);
  double ab = std::abs(beta);
  double gap_bound = std::pow(aa, N);
  RenormPlan p;
  p.truncation_degree = N;
  p.rate = ab / gap_bound;
  p.alpha_expanding = {"abs(alpha) > 1", aa, aa - 1.0, aa > 1.0};
  p.beta_expanding = {"abs(beta) > 1", ab, ab - 1.0, ab > 1.0};
  p.gap = {"abs(beta) < abs(alpha)^N", ab, gap_bound - ab, ab < gap_bound};
  return p;
}

PolyMap2 iterate(const ElementaryMap& f, int n, std::size_t order) {
  require_nonnegative(n, "iterate");
  return iterate_with_head(f.alpha, f.beta, f.h.jet(order), n);
}

PolyMap2 inverse_iterate(const ElementaryMap& f, int n, std::size_t order) {
  require_nonnegative(n, "inverse_iterate");
  require_invertible(f, "inverse_iterate");
  return inverse_iterate_with_head(f.alpha, f.beta, f.h.jet(order), n);
}

PolyMap2 truncated_inverse(const ElementaryMap& f, int N, int n,
                           std::size_t order) {
  require_nonnegative(n, "truncated_inverse");
  require_invertible(f, "truncated_inverse");
  if (N < 1) {
    throw HypothesisError("truncated_inverse: N must be >= 1");
  }
  Jet head = truncate(f.h, static_cast<std::size_t>(N), order);
  return inverse_iterate_with_head(f.alpha, f.beta, head, n);
}

PolyMap2 renorm_compose(const ElementaryMap& f, int N, int n,
                        std::size_t order) {
  require_nonnegative(n, "renorm_compose");
  RenormPlan::analyze(f.alpha, f.beta, N).require();
  if (order < static_cast<std::size_t>(N)) {
    throw HypothesisError("renorm_compose: order must be >= N");
  }
  // psi_n(u) = sum_{k<n} beta^k R_N(alpha^{-1-k} u), accumulated per degree
  // as a geometric sum in beta * alpha^{-l}; every term has modulus < 1 of
  // the previous one, so the sum never leaves the double range.
  Complex ai = Complex{1.0} / f.alpha;
  Jet psi(order);
  Complex ai_pow_l = Complex{1.0};
  for (std::size_t l = 1; l <= order; ++l) {
    ai_pow_l *= ai;
    if (l < static_cast<std::size_t>(N)) {
      continue;
    }
    Complex eta = f.h.coeff(l);
    if (eta == Complex{0.0}) {
      continue;
    }
    Complex ratio = f.beta * ai_pow_l;
    Complex geom{0.0};
    Complex t{1.0};
    for (int k = 0; k < n; ++k) {
      geom += t;
      t *= ratio;
    }
    psi.set_coeff(l, eta * ai_pow_l * geom);
  }
  return {Complex{1.0}, psi, Complex{1.0}};
}

Jet renorm_limit(const ElementaryMap& f, int N, std::size_t order) {
  RenormPlan::analyze(f.alpha, f.beta, N).require();
  if (order < static_cast<std::size_t>(N)) {
    throw HypothesisError("renorm_limit: order must be >= N");
  }
  Jet psi(order);
  Complex apow = Complex{1.0};
  for (std::size_t l = 1; l <= order; ++l) {
    apow *= f.alpha;
    if (l < static_cast<std::size_t>(N)) {
      continue;
    }
    Complex denom = apow - f.beta;
    if (denom == Complex{0.0}) {
      throw HypothesisError(
          "renorm_limit: resonance alpha^l == beta at degree l = " +
          std::to_string(l));
    }
    psi.set_coeff(l, f.h.coeff(l) / denom);
  }
  return psi;
}

int min_truncation_degree(const Complex& alpha, const Complex& beta) {
  double aa = std::abs(alpha);
  double ab = std::abs(beta);
  if (!(aa > 1.0)) {
    throw HypothesisError("min_truncation_degree: abs(alpha) > 1 required");
  }
  if (!(ab > 1.0)) {
    throw HypothesisError("min_truncation_degree: abs(beta) > 1 required");
  }
  int N = std::max(1, static_cast<int>(std::ceil(std::log(ab) / std::log(aa))));
  while (!(ab < std::pow(aa, N))) {
    ++N;
    if (N > 1000000) {
      throw HypothesisError(
          "min_truncation_degree: no usable degree below 1e6; alpha is too "
          "close to the unit circle");
    }
  }
  return N;
}

int min_truncation_degree(const ElementaryMap& f) {
  return min_truncation_degree(f.alpha, f.beta);
}

std::vector<Complex> disk_grid(const Complex& center, double radius,
                               int per_axis) {
  if (!(radius > 0.0)) {
    throw HypothesisError("disk_grid: radius must be positive");
  }
  if (per_axis < 2) {
    throw HypothesisError("disk_grid: need at least 2 points per axis");
  }
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(per_axis) * per_axis);
  double r2 = radius * radius * (1.0 + 1e-12);
  for (int ix = 0; ix < per_axis; ++ix) {
    double x = -radius + 2.0 * radius * ix / (per_axis - 1);
    for (int iy = 0; iy < per_axis; ++iy) {
      double y = -radius + 2.0 * radius * iy / (per_axis - 1);
      if (x * x + y * y <= r2) {
        pts.push_back(center + Complex{x, y});
      }
    }
  }
  return pts;
}

std::vector<ScanRow> convergence_scan(const ElementaryMap& f, int N,
                                      double radius, int grid,
                                      const std::vector<int>& n_list,
                                      std::size_t order) {
  RenormPlan::analyze(f.alpha, f.beta, N).require();
  auto points = disk_grid(Complex{0.0}, radius, grid);
  Jet psi = renorm_limit(f, N, order);
  PolyMap2 limit_shear{Complex{1.0}, psi, Complex{1.0}};
  std::vector<ScanRow> rows;
  rows.reserve(n_list.size());
  for (int n : n_list) {
    PolyMap2 rn = renorm_compose(f, N, n, order);
    double sup = 0.0;
    for (const Complex& u : points) {
      CPoint p{u, u};
      sup = std::max(sup, sup_norm(rn(p) - limit_shear(p)));
    }
    rows.push_back({n, sup});
  }
  return rows;
}

Complex linear_renorm_coefficient(const Complex& alpha, const Complex& beta,
                                  int k) {
  if (k < 1) {
    throw HypothesisError("linear_renorm_coefficient: k must be >= 1");
  }
  if (beta == Complex{0.0}) {
    throw HypothesisError("linear_renorm_coefficient: beta must be nonzero");
  }
  Complex c = alpha * alpha / beta;
  Complex sum{0.0};
  Complex t{1.0};
  for (int l = 0; l < k; ++l) {
    sum += t;
    t *= c;
  }
  return sum / beta;
}

}
