#include "renorm2/jet.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <utility>

namespace renorm2 {

namespace {

void require_finite(const Complex& c, const char* where) {
  if (!is_finite(c)) {
    throw EvaluationError(std::string(where) + ": non-finite coefficient");
  }
}

}  // namespace

Jet::Jet(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    throw HypothesisError("Jet: coefficient list must not be empty");
  }
  for (const Complex& c : coeffs_) {
    require_finite(c, "Jet");
  }
}

Jet Jet::monomial(std::size_t degree, const Complex& c, std::size_t order) {
  if (degree > order) {
    throw HypothesisError("Jet::monomial: degree exceeds order");
  }
  Jet j(order);
  j.set_coeff(degree, c);
  return j;
}

Jet Jet::constant(const Complex& c, std::size_t order) {
  return monomial(0, c, order);
}

void Jet::set_coeff(std::size_t l, const Complex& c) {
  if (l >= coeffs_.size()) {
    throw HypothesisError("Jet::set_coeff: index exceeds order");
  }
  require_finite(c, "Jet::set_coeff");
  coeffs_[l] = c;
}

Jet add(const Jet& a, const Jet& b) {
  std::size_t k = std::min(a.order(), b.order());
  Jet r(k);
  for (std::size_t l = 0; l <= k; ++l) {
    r.set_coeff(l, a.coeff(l) + b.coeff(l));
  }
  return r;
}

Jet sub(const Jet& a, const Jet& b) {
  std::size_t k = std::min(a.order(), b.order());
  Jet r(k);
  for (std::size_t l = 0; l <= k; ++l) {
    r.set_coeff(l, a.coeff(l) - b.coeff(l));
  }
  return r;
}

Jet mul(const Jet& a, const Jet& b) {
  std::size_t k = std::min(a.order(), b.order());
  Jet r(k);
  for (std::size_t l = 0; l <= k; ++l) {
    Complex s{0.0};
    for (std::size_t i = 0; i <= l; ++i) {
      s += a.coeff(i) * b.coeff(l - i);
    }
    r.set_coeff(l, s);
  }
  return r;
}

Jet scale(const Jet& a, const Complex& s) {
  require_finite(s, "scale");
  Jet r(a.order());
  for (std::size_t l = 0; l <= a.order(); ++l) {
    r.set_coeff(l, s * a.coeff(l));
  }
  return r;
}

Jet arg_scale(const Jet& a, const Complex& s) {
  require_finite(s, "arg_scale");
  Jet r(a.order());
  Complex p{1.0};
  for (std::size_t l = 0; l <= a.order(); ++l) {
    // Skip exact zeros: for sparse series the power accumulator may
    // overflow at degrees that carry no coefficient, and 0 * inf would
    // poison the result.
    if (a.coeff(l) != Complex{0.0}) r.set_coeff(l, p * a.coeff(l));
    p *= s;
  }
  return r;
}

Jet compose(const Jet& a, const Jet& b) {
  if (b.coeff(0) != Complex{0.0}) {
    throw HypothesisError(
        "compose: inner jet has a nonzero constant term; "
        "use compose_recentered to shift the expansion point");
  }
  std::size_t k = std::min(a.order(), b.order());
  // Horner over the outer coefficients.
  Jet r = Jet::constant(a.coeff(k), k);
  Jet bk(k);
  for (std::size_t l = 0; l <= k; ++l) {
    bk.set_coeff(l, b.coeff(l));
  }
  for (std::size_t l = k; l-- > 0;) {
    r = mul(r, bk);
    r.set_coeff(0, r.coeff(0) + a.coeff(l));
  }
  return r;
}

Jet compose_recentered(const Jet& a, const Jet& b) {
  Complex b0 = b.coeff(0);
  Jet shifted = taylor_shift(a, b0);
  Jet reduced(b.order());
  for (std::size_t l = 1; l <= b.order(); ++l) {
    reduced.set_coeff(l, b.coeff(l));
  }
  return compose(shifted, reduced);
}

Jet taylor_shift(const Jet& a, const Complex& c) {
  require_finite(c, "taylor_shift");
  // Repeated synthetic division by (u - (-c)).
  std::vector<Complex> work(a.coeffs());
  std::size_t k = a.order();
  std::vector<Complex> out(k + 1);
  for (std::size_t l = 0; l <= k; ++l) {
    for (std::size_t i = k; i-- > l;) {
      work[i] += c * work[i + 1];
    }
    out[l] = work[l];
  }
  return Jet(std::move(out));
}

Jet derivative(const Jet& a) {
  if (a.order() == 0) {
    return Jet();
  }
  Jet r(a.order() - 1);
  for (std::size_t l = 1; l <= a.order(); ++l) {
    r.set_coeff(l - 1, static_cast<double>(l) * a.coeff(l));
  }
  return r;
}

Jet lift(const Jet& a, std::size_t order) {
  if (order < a.order()) {
    throw HypothesisError("lift: target order below the jet order");
  }
  Jet r(order);
  for (std::size_t l = 0; l <= a.order(); ++l) {
    r.set_coeff(l, a.coeff(l));
  }
  return r;
}

Complex evaluate(const Jet& a, const Complex& z) {
  require_finite(z, "evaluate");
  Complex acc{0.0};
  for (std::size_t l = a.order() + 1; l-- > 0;) {
    acc = acc * z + a.coeff(l);
  }
  if (!is_finite(acc)) {
    throw EvaluationError("evaluate: overflow to non-finite value");
  }
  return acc;
}

CoefficientRule::CoefficientRule(std::function<Complex(std::size_t)> gen,
                                 double radius)
    : gen_(std::move(gen)), radius_(radius) {
  if (!gen_) {
    throw HypothesisError("CoefficientRule: generator must be callable");
  }
  if (!(radius_ > 0.0)) {
    throw HypothesisError("CoefficientRule: radius bound must be positive");
  }
}

CoefficientRule CoefficientRule::polynomial(std::vector<Complex> coeffs) {
  for (const Complex& c : coeffs) {
    require_finite(c, "CoefficientRule::polynomial");
  }
  auto gen = [cs = std::move(coeffs)](std::size_t l) {
    return l < cs.size() ? cs[l] : Complex{0.0};
  };
  return CoefficientRule(std::move(gen),
                         std::numeric_limits<double>::infinity());
}

CoefficientRule CoefficientRule::zero() { return polynomial({}); }

Complex CoefficientRule::coeff(std::size_t l) const {
  Complex c = gen_(l);
  require_finite(c, "CoefficientRule::coeff");
  return c;
}

Jet CoefficientRule::jet(std::size_t order) const {
  Jet r(order);
  for (std::size_t l = 0; l <= order; ++l) {
    r.set_coeff(l, coeff(l));
  }
  return r;
}

namespace {

void require_positive_degree(std::size_t N, const char* where) {
  if (N == 0) {
    throw HypothesisError(std::string(where) + ": N must be >= 1");
  }
}

}  // namespace

Jet truncate(const Jet& h, std::size_t N) {
  require_positive_degree(N, "truncate");
  std::size_t k = std::min(h.order(), N - 1);
  Jet r(k);
  for (std::size_t l = 0; l <= k; ++l) {
    r.set_coeff(l, h.coeff(l));
  }
  return r;
}

Jet truncate(const CoefficientRule& h, std::size_t N) {
  require_positive_degree(N, "truncate");
  return truncate(h, N, N - 1);
}

Jet truncate(const CoefficientRule& h, std::size_t N, std::size_t order) {
  require_positive_degree(N, "truncate");
  if (order < N - 1) {
    throw HypothesisError("truncate: order too small for the requested head");
  }
  Jet r(order);
  for (std::size_t l = 0; l < N; ++l) {
    r.set_coeff(l, h.coeff(l));
  }
  return r;
}

Jet remainder(const CoefficientRule& h, std::size_t N, std::size_t order) {
  require_positive_degree(N, "remainder");
  if (order < N) {
    throw HypothesisError("remainder: order must be >= N");
  }
  Jet r(order);
  for (std::size_t l = N; l <= order; ++l) {
    r.set_coeff(l, h.coeff(l));
  }
  return r;
}

Jet remainder(const Jet& h, std::size_t N) {
  require_positive_degree(N, "remainder");
  if (h.order() < N) {
    throw HypothesisError("remainder: order must be >= N");
  }
  Jet r(h.order());
  for (std::size_t l = N; l <= h.order(); ++l) {
    r.set_coeff(l, h.coeff(l));
  }
  return r;
}

}
