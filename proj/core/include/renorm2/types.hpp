#pragma once

#include <cmath>
#include <complex>

namespace renorm2 {

using Complex = std::complex<double>;

inline bool is_finite(double x) { return std::isfinite(x); }

inline bool is_finite(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Point of C^2.  One-dimensional data lives in `x` with `y` kept at zero.
struct CPoint {
  Complex x{0.0};
  Complex y{0.0};
};

inline CPoint operator+(const CPoint& a, const CPoint& b) {
  return {a.x + b.x, a.y + b.y};
}

inline CPoint operator-(const CPoint& a, const CPoint& b) {
  return {a.x - b.x, a.y - b.y};
}

inline CPoint operator*(double s, const CPoint& p) { return {s * p.x, s * p.y}; }

inline double sup_norm(const CPoint& p) {
  return std::max(std::abs(p.x), std::abs(p.y));
}

/// Euclidean distance of C^2 viewed as R^4.
inline double euclid_dist(const CPoint& a, const CPoint& b) {
  double dx = std::abs(a.x - b.x);
  double dy = std::abs(a.y - b.y);
  return std::sqrt(dx * dx + dy * dy);
}

inline bool is_finite(const CPoint& p) { return is_finite(p.x) && is_finite(p.y); }

/// 2x2 complex matrix; entry(a, i) is row a, column i.
struct Mat2 {
  Complex a00{0.0}, a01{0.0}, a10{0.0}, a11{0.0};
};

inline CPoint apply(const Mat2& m, const CPoint& p) {
  return {m.a00 * p.x + m.a01 * p.y, m.a10 * p.x + m.a11 * p.y};
}

inline Complex det(const Mat2& m) { return m.a00 * m.a11 - m.a01 * m.a10; }

}
