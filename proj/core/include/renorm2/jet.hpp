#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "renorm2/errors.hpp"
#include "renorm2/types.hpp"

namespace renorm2 {

inline constexpr std::size_t kDefaultOrder = 32;

/// Truncated power series c_0 + c_1 u + ... + c_K u^K with complex
/// coefficients.  The order K is part of the value; arithmetic between jets
/// of different orders truncates to the smaller one.
class Jet {
public:
  /// Zero jet of order 0.
  Jet() : coeffs_(1, Complex{0.0}) {}

  /// Zero jet of the given order.
  explicit Jet(std::size_t order) : coeffs_(order + 1, Complex{0.0}) {}

  /// Jet from raw coefficients c_0..c_K.  Rejects empty or non-finite input.
  explicit Jet(std::vector<Complex> coeffs);

  static Jet monomial(std::size_t degree, const Complex& c, std::size_t order);
  static Jet constant(const Complex& c, std::size_t order);

  std::size_t order() const { return coeffs_.size() - 1; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  /// Coefficient of u^l; zero above the order.
  Complex coeff(std::size_t l) const {
    return l < coeffs_.size() ? coeffs_[l] : Complex{0.0};
  }

  void set_coeff(std::size_t l, const Complex& c);

private:
  std::vector<Complex> coeffs_;
};

Jet add(const Jet& a, const Jet& b);
Jet sub(const Jet& a, const Jet& b);
Jet mul(const Jet& a, const Jet& b);

/// Multiply every coefficient by s.
Jet scale(const Jet& a, const Complex& s);

/// Coefficient-wise map c_l -> s^l c_l, realizing u -> a(s*u).
Jet arg_scale(const Jet& a, const Complex& s);

/// a(b(u)) truncated at min(order a, order b).  b must have zero constant
/// term; use compose_recentered when it does not.
Jet compose(const Jet& a, const Jet& b);

/// a(b(u)) for arbitrary b: shifts the expansion point of a to b(0) first.
Jet compose_recentered(const Jet& a, const Jet& b);

/// Coefficients of a(c + u); exact polynomial recentering.
Jet taylor_shift(const Jet& a, const Complex& c);

Jet derivative(const Jet& a);

/// Same polynomial carried at a higher order (zero padding).
Jet lift(const Jet& a, std::size_t order);

/// Horner evaluation at z.
Complex evaluate(const Jet& a, const Complex& z);

inline Jet operator+(const Jet& a, const Jet& b) { return add(a, b); }
inline Jet operator-(const Jet& a, const Jet& b) { return sub(a, b); }
inline Jet operator*(const Jet& a, const Jet& b) { return mul(a, b); }
inline Jet operator*(const Complex& s, const Jet& a) { return scale(a, s); }

/// Closed-form coefficient generator l -> c_l together with a declared
/// lower bound on the radius of convergence (infinite for polynomials).
class CoefficientRule {
public:
  /// The zero series.
  CoefficientRule()
      : gen_([](std::size_t) { return Complex{0.0}; }),
        radius_(std::numeric_limits<double>::infinity()) {}

  CoefficientRule(std::function<Complex(std::size_t)> gen, double radius);

  static CoefficientRule polynomial(std::vector<Complex> coeffs);
  static CoefficientRule zero();

  Complex coeff(std::size_t l) const;
  double radius() const { return radius_; }

  /// Realize the first order+1 coefficients as a Jet.
  Jet jet(std::size_t order) const;

private:
  std::function<Complex(std::size_t)> gen_;
  double radius_;
};

/// Keep degrees < N (the polynomial head).  N must be positive.
Jet truncate(const Jet& h, std::size_t N);
Jet truncate(const CoefficientRule& h, std::size_t N);
/// Same head carried as a jet of the given order.
Jet truncate(const CoefficientRule& h, std::size_t N, std::size_t order);

/// Degrees N..order (the tail complementary to truncate at the same order).
Jet remainder(const CoefficientRule& h, std::size_t N, std::size_t order);
Jet remainder(const Jet& h, std::size_t N);

}
