#include "renorm2/zalcman.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace renorm2 {

namespace {

CPoint eval_checked(const SampledFamily& family, int n, const CPoint& p) {
  CPoint h = family.eval(n, p);
  if (!is_finite(h)) {
    std::ostringstream msg;
    msg << "family evaluation produced a non-finite value at n = " << n;
    throw EvaluationError(msg.str());
  }
  return h;
}

Mat2 jacobian_of(const SampledFamily& family, int n, const CPoint& p) {
  if (family.jacobian) {
    return family.jacobian(n, p);
  }
  if (!(family.fd_step > 0.0)) {
    throw HypothesisError("SampledFamily: difference step must be positive");
  }
  double s = family.fd_step;
  CPoint xp = eval_checked(family, n, {p.x + s, p.y});
  CPoint xm = eval_checked(family, n, {p.x - s, p.y});
  Mat2 J;
  J.a00 = (xp.x - xm.x) / (2.0 * s);
  J.a10 = (xp.y - xm.y) / (2.0 * s);
  if (family.dim == 2) {
    CPoint yp = eval_checked(family, n, {p.x, p.y + s});
    CPoint ym = eval_checked(family, n, {p.x, p.y - s});
    J.a01 = (yp.x - ym.x) / (2.0 * s);
    J.a11 = (yp.y - ym.y) / (2.0 * s);
  }
  return J;
}

double sq(double x) { return x * x; }

}  // namespace

double spherical_derivative(const Complex& value, const Complex& deriv) {
  return std::abs(deriv) / (1.0 + std::norm(value));
}

double fs_derivative(const SampledFamily& family, int n, const CPoint& p) {
  if (family.dim != 1 && family.dim != 2) {
    throw HypothesisError("SampledFamily: dim must be 1 or 2");
  }
  CPoint h = eval_checked(family, n, p);
  Mat2 J = jacobian_of(family, n, p);
  double h2 = std::norm(h.x) + (family.dim == 2 ? std::norm(h.y) : 0.0);
  double s = 1.0 + h2;
  double best = 0.0;
  for (int i = 0; i < family.dim; ++i) {
    Complex dx = (i == 0) ? J.a00 : J.a01;
    Complex dy = (i == 0) ? J.a10 : J.a11;
    double d2 = std::norm(dx) + (family.dim == 2 ? std::norm(dy) : 0.0);
    Complex inner = std::conj(h.x) * dx;
    if (family.dim == 2) {
      inner += std::conj(h.y) * dy;
    }
    double num = s * d2 - std::norm(inner);
    best = std::max(best, std::sqrt(std::max(num, 0.0)) / s);
  }
  if (!is_finite(best)) {
    throw EvaluationError("fs_derivative: non-finite result");
  }
  return best;
}

double MetricField::distance(std::size_t i, std::size_t j) const {
  const CPoint& a = points[i];
  const CPoint& b = points[j];
  return metric ? metric(a, b) : euclid_dist(a, b);
}

std::size_t locate_peak_point(const MetricField& field, std::size_t start,
                              double sigma) {
  if (field.points.size() != field.values.size() || field.points.empty()) {
    throw HypothesisError("MetricField: points and values must align");
  }
  if (start >= field.size()) {
    throw HypothesisError("locate_peak_point: start index out of range");
  }
  if (!(sigma > 0.0)) {
    throw HypothesisError("locate_peak_point: sigma must be positive");
  }
  if (!(field.value(start) > 0.0)) {
    throw HypothesisError(
        "locate_peak_point: weight at the start point must be positive");
  }
  std::size_t v = start;
  for (;;) {
    double mv = field.value(v);
    double ball = 1.0 / (sigma * mv);
    std::size_t next = v;
    for (std::size_t x = 0; x < field.size(); ++x) {
      if (field.distance(x, v) <= ball && field.value(x) > 2.0 * mv) {
        next = x;
        break;
      }
    }
    if (next == v) {
      return v;
    }
    v = next;
  }
}

PeakCheck check_peak_postconditions(const MetricField& field,
                                    std::size_t start, std::size_t peak,
                                    double sigma) {
  PeakCheck c;
  double mu = field.value(start);
  double mv = field.value(peak);
  c.start_distance = field.distance(start, peak);
  c.start_distance_bound = 2.0 / (sigma * mu);
  c.value_ratio = mv / mu;
  double ball = 1.0 / (sigma * mv);
  double worst = 0.0;
  for (std::size_t x = 0; x < field.size(); ++x) {
    if (field.distance(x, peak) <= ball) {
      worst = std::max(worst, field.value(x) / (2.0 * mv));
    }
  }
  c.worst_neighborhood = worst;
  c.ok = c.start_distance <= c.start_distance_bound * (1.0 + 1e-9) &&
         c.value_ratio >= 1.0 && worst <= 1.0;
  return c;
}

const RescalingEntry& RescalingSequence::at(int n) const {
  for (const RescalingEntry& e : entries) {
    if (e.n == n) {
      return e;
    }
  }
  throw Error("RescalingSequence: no entry for n = " + std::to_string(n));
}

std::vector<CPoint> polydisk_sample(const PolydiskDomain& domain, int dim,
                                    int per_axis) {
  std::vector<CPoint> out;
  auto gx = disk_grid(domain.center.x, domain.radius_x, per_axis);
  if (dim == 1) {
    out.reserve(gx.size());
    for (const Complex& z : gx) {
      out.push_back({z, Complex{0.0}});
    }
    return out;
  }
  auto gy = disk_grid(domain.center.y, domain.radius_y, per_axis);
  out.reserve(gx.size() * gy.size());
  for (const Complex& z : gx) {
    for (const Complex& w : gy) {
      out.push_back({z, w});
    }
  }
  return out;
}

Extraction extract_rescalings(const SampledFamily& family, const CPoint& v,
                              int count, const ExtractOptions& opts) {
  if (!family.eval) {
    throw HypothesisError("SampledFamily: evaluator must be callable");
  }
  if (count < 1) {
    throw HypothesisError("extract_rescalings: count must be >= 1");
  }
  Extraction ex;
  ex.sample = polydisk_sample(family.domain, family.dim, opts.grid_per_axis);
  ex.grid_spacing = std::max(
      2.0 * family.domain.radius_x / (opts.grid_per_axis - 1),
      family.dim == 2 ? 2.0 * family.domain.radius_y / (opts.grid_per_axis - 1)
                      : 0.0);

  // Derivative field per member, sup and argmax restricted near v.
  std::vector<double> sups(static_cast<std::size_t>(count), 0.0);
  std::vector<std::size_t> argmax(static_cast<std::size_t>(count), 0);
  ex.field_values.resize(static_cast<std::size_t>(count));
  for (int n = 1; n <= count; ++n) {
    auto& M = ex.field_values[static_cast<std::size_t>(n - 1)];
    M.resize(ex.sample.size());
    double sup = -1.0;
    std::size_t best = 0;
    for (std::size_t i = 0; i < ex.sample.size(); ++i) {
      M[i] = fs_derivative(family, n, ex.sample[i]);
      if (euclid_dist(ex.sample[i], v) <= opts.near_radius && M[i] > sup) {
        sup = M[i];
        best = i;
      }
    }
    if (sup < 0.0) {
      throw HypothesisError(
          "extract_rescalings: no sample point within near_radius of v");
    }
    sups[static_cast<std::size_t>(n - 1)] = sup;
    argmax[static_cast<std::size_t>(n - 1)] = best;
  }

  double smax = *std::max_element(sups.begin(), sups.end());
  ex.certified_depth = static_cast<int>(std::floor(std::sqrt(std::max(smax, 0.0))));
  if (ex.certified_depth < opts.min_certified_depth) {
    std::ostringstream msg;
    msg << "derivative growth not detected: family looks normal on the sample"
        << " (max derivative sup " << smax << ", certified depth "
        << ex.certified_depth << " < " << opts.min_certified_depth
        << "; member sups:";
    for (int n = 1; n <= count && n <= 8; ++n) {
      msg << ' ' << sups[static_cast<std::size_t>(n - 1)];
    }
    if (count > 8) {
      msg << " ...";
    }
    msg << ")";
    throw DiagnosticError(msg.str());
  }

  for (int n = 1; n <= count; ++n) {
    std::size_t idx = static_cast<std::size_t>(n - 1);
    if (!(sups[idx] > 0.0)) {
      throw DiagnosticError("extract_rescalings: member " + std::to_string(n) +
                            " is constant on the sample");
    }
    MetricField field{ex.sample, ex.field_values[idx], {}};
    double sigma = 1.0 / n;
    std::size_t peak = locate_peak_point(field, argmax[idx], sigma);
    double r = 1.0 / ex.field_values[idx][peak];
    ex.seq.entries.push_back({n, ex.sample[peak], r});
    ex.detail.push_back({argmax[idx], peak, sigma, sups[idx]});
  }
  return ex;
}

CPoint rescaled_eval(const SampledFamily& family, const RescalingSequence& seq,
                     int n, const CPoint& w) {
  const RescalingEntry& e = seq.at(n);
  CPoint arg{e.center.x + e.scale * w.x, e.center.y + e.scale * w.y};
  return eval_checked(family, n, arg);
}

SampledFamily rescaled_family(const SampledFamily& family,
                              const RescalingSequence& seq) {
  SampledFamily out = family;
  out.domain.center = CPoint{};
  out.domain.radius_x = std::numeric_limits<double>::infinity();
  out.domain.radius_y = std::numeric_limits<double>::infinity();
  out.eval = [family, seq](int n, const CPoint& w) {
    return rescaled_eval(family, seq, n, w);
  };
  if (family.jacobian) {
    out.jacobian = [family, seq](int n, const CPoint& w) {
      const RescalingEntry& e = seq.at(n);
      CPoint arg{e.center.x + e.scale * w.x, e.center.y + e.scale * w.y};
      Mat2 J = family.jacobian(n, arg);
      J.a00 *= e.scale;
      J.a01 *= e.scale;
      J.a10 *= e.scale;
      J.a11 *= e.scale;
      return J;
    };
  }
  return out;
}

RescaledBound verify_rescaled_bound(const SampledFamily& family,
                                    const Extraction& ex, int n, int w_grid) {
  const RescalingEntry& e = ex.seq.at(n);
  std::size_t idx = 0;
  while (idx < ex.seq.entries.size() && ex.seq.entries[idx].n != n) {
    ++idx;
  }
  const auto& M = ex.field_values[idx];

  RescaledBound b;
  SampledFamily rf = rescaled_family(family, ex.seq);
  b.deriv0 = fs_derivative(rf, n, CPoint{});

  // Probe |w| <= n; skip arguments that leave the declared domain, where the
  // peak guarantee says nothing.
  auto wpts = disk_grid(Complex{0.0}, static_cast<double>(n), w_grid);
  for (const Complex& w : wpts) {
    CPoint arg{e.center.x + e.scale * w, e.center.y};
    if (std::abs(arg.x - family.domain.center.x) >
        family.domain.radius_x * (1.0 + 1e-12)) {
      continue;
    }
    b.max_fs = std::max(b.max_fs, e.scale * fs_derivative(family, n, arg));
  }

  // Largest measured slope of M_n between lattice neighbors, for the
  // discretization allowance.
  double lhat = 0.0;
  double near = 1.5 * ex.grid_spacing;
  for (std::size_t i = 0; i < ex.sample.size(); ++i) {
    for (std::size_t j = i + 1; j < ex.sample.size(); ++j) {
      double d = euclid_dist(ex.sample[i], ex.sample[j]);
      if (d > 0.0 && d <= near) {
        lhat = std::max(lhat, std::abs(M[i] - M[j]) / d);
      }
    }
  }
  double covering = ex.grid_spacing / std::sqrt(2.0) *
                    (family.dim == 2 ? std::sqrt(2.0) : 1.0);
  b.slack = e.scale * lhat * covering;
  return b;
}

SampledFamily scaled_identity_family() {
  SampledFamily f;
  f.dim = 1;
  f.domain = {CPoint{}, 1.0, 1.0};
  f.eval = [](int n, const CPoint& p) {
    return CPoint{static_cast<double>(n) * p.x, Complex{0.0}};
  };
  f.jacobian = [](int n, const CPoint&) {
    Mat2 J;
    J.a00 = static_cast<double>(n);
    return J;
  };
  return f;
}

SampledFamily power_family() {
  SampledFamily f;
  f.dim = 1;
  f.domain = {CPoint{}, 1.0, 1.0};
  f.eval = [](int n, const CPoint& p) {
    return CPoint{std::pow(p.x, n), Complex{0.0}};
  };
  f.jacobian = [](int n, const CPoint& p) {
    Mat2 J;
    J.a00 = static_cast<double>(n) * std::pow(p.x, n - 1);
    return J;
  };
  return f;
}

SampledFamily elementary_iterate_family(const ElementaryMap& f,
                                        std::size_t order,
                                        const PolydiskDomain& domain) {
  SampledFamily fam;
  fam.dim = 2;
  fam.domain = domain;
  fam.eval = [f, order](int n, const CPoint& p) {
    return iterate(f, n, order)(p);
  };
  fam.jacobian = [f, order](int n, const CPoint& p) {
    PolyMap2 it = iterate(f, n, order);
    Mat2 J;
    J.a00 = it.u_mult;
    J.a01 = Complex{0.0};
    J.a10 = evaluate(derivative(it.q), p.x);
    J.a11 = it.v_mult;
    return J;
  };
  return fam;
}

}
