#include "doctest.h"

#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "renorm2/errors.hpp"
#include "renorm2/zalcman.hpp"

using namespace renorm2;

namespace {

// One-dimensional polynomial family with exact derivatives, the reference
// construction for the chart checks.
SampledFamily poly_family(std::vector<Complex> coeffs, double radius) {
  Jet p(coeffs);
  Jet dp = derivative(p);
  SampledFamily fam;
  fam.dim = 1;
  fam.domain = {{}, radius, radius};
  fam.eval = [p](int, const CPoint& z) {
    return CPoint{evaluate(p, z.x), Complex{0.0}};
  };
  fam.jacobian = [dp](int, const CPoint& z) {
    Mat2 J;
    J.a00 = evaluate(dp, z.x);
    return J;
  };
  return fam;
}

// Spherical derivative written out directly: |f'| / (1 + |f|^2).
double spherical_oracle(const Complex& value, const Complex& deriv) {
  return std::abs(deriv) / (1.0 + std::abs(value) * std::abs(value));
}

// Full-chart norm for dimension 2, written from scratch against the
// library: max over the two columns of the differential.
double fs2_oracle(const CPoint& h, const Mat2& J) {
  double h2 = std::norm(h.x) + std::norm(h.y);
  double s = 1.0 + h2;
  double best = 0.0;
  for (int col = 0; col < 2; ++col) {
    Complex dx = col == 0 ? J.a00 : J.a01;
    Complex dy = col == 0 ? J.a10 : J.a11;
    double d2 = std::norm(dx) + std::norm(dy);
    Complex inner = std::conj(h.x) * dx + std::conj(h.y) * dy;
    double num = s * d2 - std::norm(inner);
    best = std::max(best, std::sqrt(std::max(num, 0.0)) / s);
  }
  return best;
}

// Literal restatement of the three peak guarantees, checked exhaustively.
bool peak_ok_oracle(const MetricField& field, std::size_t start,
                    std::size_t peak, double sigma) {
  double mu = field.value(start);
  double mv = field.value(peak);
  if (field.distance(start, peak) > 2.0 / (sigma * mu) + 1e-12) return false;
  if (mv < mu) return false;
  double ball = 1.0 / (sigma * mv);
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field.distance(i, peak) <= ball && field.value(i) > 2.0 * mv + 1e-12)
      return false;
  }
  return true;
}

MetricField line_field(const std::vector<double>& xs,
                       const std::vector<double>& values) {
  MetricField field;
  for (double x : xs) field.points.push_back({Complex{x}, Complex{0.0}});
  field.values = values;
  return field;
}

}  // namespace

TEST_CASE("spherical derivative of the identity map") {
  SampledFamily id = poly_family({Complex{0.0}, Complex{1.0}}, 2.0);
  CHECK(fs_derivative(id, 1, {Complex{0.0}, {}}) == doctest::Approx(1.0));
  CHECK(fs_derivative(id, 1, {Complex{1.0}, {}}) == doctest::Approx(0.5));

  SampledFamily flat = poly_family({Complex{0.3, 0.7}}, 2.0);
  CHECK(fs_derivative(flat, 1, {Complex{0.5}, {}}) == doctest::Approx(0.0));
}

TEST_CASE("chart formula reduces to the spherical derivative") {
  std::mt19937_64 rng(211);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Complex> coeffs(5);
    for (auto& c : coeffs) c = Complex{dist(rng), dist(rng)};
    Jet p(coeffs);
    Jet dp = derivative(p);
    SampledFamily fam = poly_family(coeffs, 2.0);
    for (int k = 0; k < 8; ++k) {
      Complex z{dist(rng), dist(rng)};
      double want = spherical_oracle(evaluate(p, z), evaluate(dp, z));
      CHECK(fs_derivative(fam, 1, {z, {}}) ==
            doctest::Approx(want).epsilon(1e-12));
      CHECK(spherical_derivative(evaluate(p, z), evaluate(dp, z)) ==
            doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("finite differences agree with analytic derivatives") {
  std::vector<Complex> coeffs = {Complex{0.1}, Complex{0.8, -0.2},
                                 Complex{0.0}, Complex{0.5}};
  SampledFamily analytic = poly_family(coeffs, 2.0);
  SampledFamily numeric = analytic;
  numeric.jacobian = nullptr;
  numeric.fd_step = 1e-6;
  for (double x : {-0.7, 0.0, 0.4, 1.1}) {
    CPoint p{Complex{x, 0.2}, {}};
    CHECK(fs_derivative(numeric, 1, p) ==
          doctest::Approx(fs_derivative(analytic, 1, p)).epsilon(1e-6));
  }
  numeric.fd_step = 0.0;
  CHECK_THROWS_AS(fs_derivative(numeric, 1, {Complex{0.0}, {}}),
                  HypothesisError);
}

TEST_CASE("two-dimensional chart norm on elementary iterates") {
  ElementaryMap f{Complex{2.0}, Complex{3.0},
                  CoefficientRule::polynomial(
                      {Complex{0.0}, Complex{0.0}, Complex{1.0}})};
  SampledFamily fam = elementary_iterate_family(f, 16, {{}, 0.5, 0.5});
  for (int n : {1, 2, 3}) {
    PolyMap2 Fn = iterate(f, n, 16);
    Jet dq = derivative(Fn.q);
    for (double x : {0.0, 0.2, -0.3}) {
      CPoint p{Complex{x, 0.1}, Complex{0.1, -0.2}};
      CPoint h = Fn(p);
      Mat2 J;
      J.a00 = Fn.u_mult;
      J.a10 = evaluate(dq, p.x);
      J.a11 = Fn.v_mult;
      CHECK(fs_derivative(fam, n, p) ==
            doctest::Approx(fs2_oracle(h, J)).epsilon(1e-12));
    }
  }
  // At the fixed point the norm is the larger multiplier power.
  CHECK(fs_derivative(fam, 4, {{}, {}}) == doctest::Approx(81.0));
}

TEST_CASE("iterated elementary maps blow up at the origin") {
  ElementaryMap f{Complex{2.0}, Complex{3.0},
                  CoefficientRule::polynomial(
                      {Complex{0.0}, Complex{0.0}, Complex{1.0}})};
  SampledFamily fam = elementary_iterate_family(f, 16, {{}, 0.5, 0.5});
  double prev = 0.0;
  for (int n = 1; n <= 30; ++n) {
    double cur = fs_derivative(fam, n, {{}, {}});
    CHECK(cur > prev);
    prev = cur;
  }
  CHECK(fs_derivative(fam, 13, {{}, {}}) > 1e6);
}

TEST_CASE("non-finite family values are reported") {
  SampledFamily bad;
  bad.dim = 1;
  bad.domain = {{}, 1.0, 1.0};
  bad.eval = [](int, const CPoint&) {
    return CPoint{Complex{std::nan(""), 0.0}, {}};
  };
  CHECK_THROWS_AS(fs_derivative(bad, 1, {{}, {}}), EvaluationError);
}

TEST_CASE("metric field distances satisfy the metric axioms") {
  std::mt19937_64 rng(223);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  MetricField field;
  for (int i = 0; i < 12; ++i) {
    field.points.push_back(
        {Complex{dist(rng), dist(rng)}, Complex{dist(rng), dist(rng)}});
    field.values.push_back(1.0);
  }
  for (std::size_t a = 0; a < field.size(); ++a) {
    CHECK(field.distance(a, a) == 0.0);
    for (std::size_t b = 0; b < field.size(); ++b) {
      CHECK(field.distance(a, b) == doctest::Approx(field.distance(b, a)));
      for (std::size_t c = 0; c < field.size(); ++c)
        CHECK(field.distance(a, c) <=
              field.distance(a, b) + field.distance(b, c) + 1e-12);
    }
  }
}

TEST_CASE("peak walk accepts a constant field immediately") {
  std::vector<double> xs, ms;
  for (int i = 0; i <= 10; ++i) {
    xs.push_back(0.1 * i);
    ms.push_back(3.0);
  }
  MetricField field = line_field(xs, ms);
  std::size_t peak = locate_peak_point(field, 4, 1.0);
  CHECK(peak == 4);
  CHECK(check_peak_postconditions(field, 4, peak, 1.0).ok);
  CHECK(peak_ok_oracle(field, 4, peak, 1.0));
}

TEST_CASE("peak walk on the two-point space") {
  // Distance 1 between the points keeps the candidate ball away from x, so
  // u is already a peak.
  MetricField field = line_field({0.0, 1.0}, {1.0, 4.0});
  std::size_t peak = locate_peak_point(field, 0, 2.0);
  CHECK(peak == 0);
  PeakCheck check = check_peak_postconditions(field, 0, peak, 2.0);
  CHECK(check.ok);
  CHECK(check.start_distance == 0.0);
  CHECK(peak_ok_oracle(field, 0, peak, 2.0));

  // Moving the big value within reach forces one jump.
  MetricField close = line_field({0.0, 0.1}, {1.0, 4.0});
  std::size_t moved = locate_peak_point(close, 0, 2.0);
  CHECK(moved == 1);
  CHECK(check_peak_postconditions(close, 0, moved, 2.0).ok);
  CHECK(peak_ok_oracle(close, 0, moved, 2.0));
}

TEST_CASE("peak walk with a steep field and a large sigma") {
  std::vector<double> xs, ms;
  for (int i = 0; i <= 20; ++i) {
    xs.push_back(0.05 * i);
    ms.push_back(std::exp(0.05 * i));
  }
  MetricField field = line_field(xs, ms);
  std::size_t peak = locate_peak_point(field, 0, 40.0);
  CHECK(peak == 0);
  CHECK(check_peak_postconditions(field, 0, peak, 40.0).ok);
  CHECK(peak_ok_oracle(field, 0, peak, 40.0));
}

TEST_CASE("peak walk rejects degenerate inputs") {
  MetricField field = line_field({0.0, 1.0}, {0.0, 1.0});
  CHECK_THROWS_AS(locate_peak_point(field, 0, 1.0), HypothesisError);
  CHECK_THROWS_AS(locate_peak_point(field, 5, 1.0), HypothesisError);
  CHECK_THROWS_AS(locate_peak_point(field, 1, 0.0), HypothesisError);

  MetricField ragged;
  ragged.points = {{Complex{0.0}, {}}, {Complex{1.0}, {}}};
  ragged.values = {1.0};
  CHECK_THROWS_AS(locate_peak_point(ragged, 0, 1.0), HypothesisError);
}

TEST_CASE("postcondition checker flags a bad claimed peak") {
  MetricField field = line_field({0.0, 0.2}, {2.0, 1.0});
  PeakCheck check = check_peak_postconditions(field, 0, 1, 1.0);
  CHECK(!check.ok);
  CHECK(check.value_ratio == doctest::Approx(0.5));
  CHECK(!peak_ok_oracle(field, 0, 1, 1.0));
}

TEST_CASE("rescaling extraction for the linear blow-up family") {
  SampledFamily fam = scaled_identity_family();
  Extraction ex = extract_rescalings(fam, {{}, {}}, 12);
  REQUIRE(ex.seq.entries.size() == 12);
  CHECK(ex.certified_depth >= 2);
  CHECK(ex.grid_spacing > 0.0);

  double prev_scale = std::numeric_limits<double>::infinity();
  for (const RescalingEntry& e : ex.seq.entries) {
    // M_n peaks at the origin with value n, so v_n = 0 and r_n = 1/n.
    CHECK(std::abs(e.center.x) <= 1e-12);
    CHECK(e.scale * e.n == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(e.scale > 0.0);
    CHECK(e.scale <= prev_scale);
    prev_scale = e.scale;
  }

  // Every walk's postconditions hold on the sample.
  for (std::size_t i = 0; i < ex.detail.size(); ++i) {
    MetricField field{ex.sample, ex.field_values[i], {}};
    PeakCheck check = check_peak_postconditions(
        field, ex.detail[i].argmax_index, ex.detail[i].peak_index,
        ex.detail[i].sigma);
    CHECK(check.ok);
    CHECK(peak_ok_oracle(field, ex.detail[i].argmax_index,
                         ex.detail[i].peak_index, ex.detail[i].sigma));
  }

  for (int n : {1, 5, 12}) {
    RescaledBound bound = verify_rescaled_bound(fam, ex, n);
    CHECK(bound.deriv0 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(bound.max_fs <= 2.0 + bound.slack);
  }
}

TEST_CASE("rescaling extraction for the power family near the circle") {
  SampledFamily fam = power_family();
  ExtractOptions opts;
  opts.count = 15;
  Extraction ex = extract_rescalings(fam, {Complex{0.95}, {}}, 15, opts);
  for (const RescalingEntry& e : ex.seq.entries) {
    if (e.n < 10) continue;
    double ratio = e.scale * e.n;
    CHECK(ratio >= 0.2);
    CHECK(ratio <= 5.0);
  }
  for (int n : {10, 15}) {
    RescaledBound bound = verify_rescaled_bound(fam, ex, n);
    CHECK(bound.max_fs <= 2.0 + bound.slack);
  }
}

TEST_CASE("extraction refuses families without derivative growth") {
  SampledFamily constant;
  constant.dim = 1;
  constant.domain = {{}, 1.0, 1.0};
  constant.eval = [](int, const CPoint&) {
    return CPoint{Complex{0.7, 0.2}, {}};
  };
  constant.jacobian = [](int, const CPoint&) { return Mat2{}; };
  CHECK_THROWS_AS(extract_rescalings(constant, {{}, {}}, 5), DiagnosticError);

  SampledFamily identity;
  identity.dim = 1;
  identity.domain = {{}, 1.0, 1.0};
  identity.eval = [](int, const CPoint& z) { return z; };
  identity.jacobian = [](int, const CPoint&) {
    Mat2 J;
    J.a00 = Complex{1.0};
    return J;
  };
  CHECK_THROWS_AS(extract_rescalings(identity, {{}, {}}, 5), DiagnosticError);

  SampledFamily empty;
  empty.dim = 1;
  empty.domain = {{}, 1.0, 1.0};
  CHECK_THROWS_AS(extract_rescalings(empty, {{}, {}}, 5), HypothesisError);
  CHECK_THROWS_AS(extract_rescalings(scaled_identity_family(), {{}, {}}, 0),
                  HypothesisError);
}

TEST_CASE("rescaled evaluation recenters and scales the argument") {
  SampledFamily fam = scaled_identity_family();
  Extraction ex = extract_rescalings(fam, {{}, {}}, 6);
  for (int n : {1, 3, 6}) {
    CPoint at0 = rescaled_eval(fam, ex.seq, n, {{}, {}});
    CHECK(std::abs(at0.x) <= 1e-12);
    CPoint at1 = rescaled_eval(fam, ex.seq, n, {Complex{1.0}, {}});
    CHECK(std::abs(at1.x - Complex{1.0}) <= 1e-9);
  }
  CHECK_THROWS_AS(rescaled_eval(fam, ex.seq, 40, {{}, {}}), Error);

  SampledFamily resc = rescaled_family(fam, ex.seq);
  for (int n : {1, 3, 6})
    CHECK(fs_derivative(resc, n, {{}, {}}) ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("polydisk samples stay inside their domain") {
  PolydiskDomain domain{{Complex{0.5}, Complex{-0.25}}, 1.0, 0.5};
  std::vector<CPoint> one = polydisk_sample(domain, 1, 9);
  for (const CPoint& p : one) {
    CHECK(std::abs(p.x - Complex{0.5}) <= 1.0 + 1e-12);
    CHECK(p.y == Complex{0.0});
  }
  std::vector<CPoint> two = polydisk_sample(domain, 2, 9);
  CHECK(two.size() == one.size() * one.size());
  for (const CPoint& p : two) {
    CHECK(std::abs(p.x - Complex{0.5}) <= 1.0 + 1e-12);
    CHECK(std::abs(p.y - Complex{-0.25}) <= 0.5 + 1e-12);
  }
}
