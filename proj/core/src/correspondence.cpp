#include "renorm2/correspondence.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

namespace renorm2 {

namespace {

/// z^k by binary exponentiation, exact for integer exponents.
Complex int_power(const Complex& z, long long k) {
  if (k < 0) {
    return Complex{1.0} / int_power(z, -k);
  }
  Complex acc{1.0};
  Complex base = z;
  while (k > 0) {
    if (k & 1) {
      acc *= base;
    }
    base *= base;
    k >>= 1;
  }
  return acc;
}

Complex principal_power(const Complex& z, const Rational& lambda) {
  if (lambda.integral()) {
    return int_power(z, lambda.num);
  }
  Complex base = z;
  if (base.imag() == 0.0) {
    // Negating a branch point can leave a -0 imaginary part, which pow
    // reads as the lower side of the cut; the principal branch takes
    // arg = +pi on the negative reals.
    base = Complex{base.real(), 0.0};
  }
  return std::pow(base, lambda.value());
}

void require_branch_points(const AlgebraicPart& a) {
  for (const AlgebraicTerm& t : a.terms) {
    if (t.zeta == Complex{0.0}) {
      throw HypothesisError(
          "AlgebraicPart: branch point at the origin is not allowed");
    }
    if (!is_finite(t.zeta) || !is_finite(t.a)) {
      throw EvaluationError("AlgebraicPart: non-finite term data");
    }
  }
}

}  // namespace

Rational Rational::make(long long num, long long den) {
  if (den == 0) {
    throw HypothesisError("Rational: zero denominator");
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num <= 0) {
    throw HypothesisError("Rational: exponent must be positive");
  }
  long long g = std::gcd(num, den);
  return Rational{num / g, den / g};
}

Rational Rational::parse(const std::string& text) {
  std::size_t slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return make(std::stoll(text), 1);
    }
    return make(std::stoll(text.substr(0, slash)),
                std::stoll(text.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw ConfigError("Rational: cannot parse '" + text + "'");
  } catch (const std::out_of_range&) {
    throw ConfigError("Rational: value out of range in '" + text + "'");
  }
}

double Rational::value() const {
  return static_cast<double>(num) / static_cast<double>(den);
}

double AlgebraicPart::branch_radius() const {
  double r = std::numeric_limits<double>::infinity();
  for (const AlgebraicTerm& t : terms) {
    r = std::min(r, std::abs(t.zeta));
  }
  return r;
}

Jet branch_germ(const AlgebraicPart& a, std::size_t order) {
  require_branch_points(a);
  Jet out(order);
  for (const AlgebraicTerm& t : a.terms) {
    Complex lead = t.a * principal_power(-t.zeta, t.lambda);
    double lam = t.lambda.value();
    Complex zi = Complex{-1.0} / t.zeta;
    // binom(lambda, m) * (-1/zeta)^m accumulated in one pass.
    Complex coeff = lead;
    out.set_coeff(0, out.coeff(0) + coeff);
    for (std::size_t m = 1; m <= order; ++m) {
      double mm = static_cast<double>(m);
      coeff *= (lam - (mm - 1.0)) / mm * zi;
      out.set_coeff(m, out.coeff(m) + coeff);
    }
  }
  return out;
}

Complex branch_value(const AlgebraicPart& a, const Complex& z) {
  require_branch_points(a);
  Complex sum{0.0};
  for (const AlgebraicTerm& t : a.terms) {
    if (!(std::abs(z) < std::abs(t.zeta))) {
      std::ostringstream msg;
      msg << "branch_value: |z| = " << std::abs(z)
          << " leaves the branch disk |z| < " << std::abs(t.zeta);
      throw HypothesisError(msg.str());
    }
    sum += t.a * principal_power(-t.zeta, t.lambda) *
           principal_power(Complex{1.0} - z / t.zeta, t.lambda);
  }
  if (!is_finite(sum)) {
    throw EvaluationError("branch_value: non-finite result");
  }
  return sum;
}

CoefficientRule ElementaryCorrespondence::entire_effective() const {
  CoefficientRule base = entire;
  Complex c0 = offset;
  return CoefficientRule(
      [base, c0](std::size_t l) {
        return l == 0 ? base.coeff(0) + c0 : base.coeff(l);
      },
      base.radius());
}

ElementaryMap ElementaryCorrespondence::entire_reduction() const {
  return ElementaryMap{c1, c2, entire_effective()};
}

Jet ElementaryCorrespondence::germ_jet(std::size_t order) const {
  return add(entire_effective().jet(order), branch_germ(algebraic, order));
}

Complex ElementaryCorrespondence::germ_value(const Complex& z,
                                             std::size_t order) const {
  Complex entire_sum = evaluate(entire.jet(order), z);
  Complex alg = algebraic.terms.empty() ? Complex{0.0}
                                        : branch_value(algebraic, z);
  return entire_sum + alg + offset;
}

ElementaryCorrespondence ElementaryCorrespondence::create(
    const Complex& c1, const Complex& c2, CoefficientRule entire,
    AlgebraicPart algebraic, bool normalize, double tol) {
  if (!(std::abs(c1) > 1.0)) {
    throw HypothesisError(
        "ElementaryCorrespondence: abs(c1) > 1 required (expanding)");
  }
  if (!(std::abs(c2) > 1.0)) {
    throw HypothesisError(
        "ElementaryCorrespondence: abs(c2) > 1 required (expanding)");
  }
  require_branch_points(algebraic);

  Complex at_zero = entire.coeff(0);
  for (const AlgebraicTerm& t : algebraic.terms) {
    at_zero += t.a * principal_power(-t.zeta, t.lambda);
  }

  ElementaryCorrespondence c;
  c.c1 = c1;
  c.c2 = c2;
  c.entire = std::move(entire);
  c.algebraic = std::move(algebraic);
  c.rho = c.algebraic.branch_radius();
  if (normalize) {
    c.offset = -at_zero;
  } else if (std::abs(at_zero) > tol) {
    std::ostringstream msg;
    msg << "ElementaryCorrespondence: the germ must vanish at the origin, "
           "got h(0) = ("
        << at_zero.real() << ", " << at_zero.imag()
        << "); pass normalize=true to absorb it";
    throw HypothesisError(msg.str());
  }
  return c;
}

BranchIterate branch_iterate(const ElementaryCorrespondence& c, int n,
                             std::size_t order) {
  if (n < 1) {
    throw HypothesisError("branch_iterate: n must be >= 1");
  }
  Jet germ = c.germ_jet(order);
  ElementaryMap carrier{c.c1, c.c2,
                        CoefficientRule::polynomial(germ.coeffs())};
  BranchIterate out;
  out.n = n;
  out.germ = iterate(carrier, n, order);
  out.validity_radius = c.rho / std::pow(std::abs(c.c1), n - 1);
  return out;
}

AlgebraicRenormalizer::AlgebraicRenormalizer(ElementaryCorrespondence corr,
                                             int N, int n, std::size_t order)
    : corr_(std::move(corr)), N_(N), n_(n) {
  if (n_ < 0) {
    throw HypothesisError("AlgebraicRenormalizer: n must be >= 0");
  }
  RenormPlan::analyze(corr_.c1, corr_.c2, N_).require();
  head_ = truncate(corr_.entire_effective(), static_cast<std::size_t>(N_),
                   order);
}

double AlgebraicRenormalizer::validity_radius() const {
  return corr_.rho * std::abs(corr_.c1);
}

Complex AlgebraicRenormalizer::correction(const Complex& u) const {
  if (!(std::abs(u) < validity_radius())) {
    std::ostringstream msg;
    msg << "AlgebraicRenormalizer: |u| = " << std::abs(u)
        << " leaves the validity disk of radius " << validity_radius();
    throw HypothesisError(msg.str());
  }
  Complex ci = Complex{1.0} / corr_.c1;
  Complex c2i = Complex{1.0} / corr_.c2;
  // Arguments c1^{-n-1+k} u for k = 1..n, ascending powers of 1/c1.
  Complex acc{0.0};
  Complex c2pow{1.0};
  Complex apow = ci;  // c1^{-n-1+k} at k = n
  std::vector<Complex> args(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) {
    args[static_cast<std::size_t>(j)] = apow * u;
    apow *= ci;
  }
  for (int k = 1; k <= n_; ++k) {
    c2pow *= c2i;
    const Complex& arg = args[static_cast<std::size_t>(n_ - k)];
    // head_ already carries the normalization offset at degree 0.
    Complex head_part = evaluate(head_, arg);
    Complex alg_part = corr_.algebraic.terms.empty()
                           ? Complex{0.0}
                           : branch_value(corr_.algebraic, arg);
    acc += c2pow * (head_part + alg_part);
  }
  return acc;
}

CPoint AlgebraicRenormalizer::operator()(const CPoint& p) const {
  Complex c1n = int_power(corr_.c1, n_);
  Complex c2n = int_power(corr_.c2, n_);
  return {p.x / c1n, p.y / c2n - correction(p.x)};
}

AlgebraicRenormalizer renormalizer(const ElementaryCorrespondence& c, int N,
                                   int n, std::size_t order) {
  return AlgebraicRenormalizer(c, N, n, order);
}

PolyMap2 renorm_compose(const ElementaryCorrespondence& c, int N, int n,
                        std::size_t order) {
  return renorm_compose(c.entire_reduction(), N, n, order);
}

Jet renorm_limit(const ElementaryCorrespondence& c, int N, std::size_t order) {
  return renorm_limit(c.entire_reduction(), N, order);
}

std::vector<ScanRow> convergence_scan(const ElementaryCorrespondence& c, int N,
                                      double radius, int grid,
                                      const std::vector<int>& n_list,
                                      std::size_t order) {
  return convergence_scan(c.entire_reduction(), N, radius, grid, n_list,
                          order);
}

}
