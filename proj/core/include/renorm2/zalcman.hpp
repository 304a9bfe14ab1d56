#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "renorm2/elementary.hpp"
#include "renorm2/jet.hpp"

namespace renorm2 {

struct PolydiskDomain {
  CPoint center;
  double radius_x = 1.0;
  double radius_y = 1.0;
};

/// Indexed family of holomorphic maps C^d -> C^d, d in {1, 2}, restricted
/// to a polydisk.  Derivatives come from an analytic callable when present,
/// otherwise from central differences with the given step.
struct SampledFamily {
  int dim = 1;
  PolydiskDomain domain;
  std::function<CPoint(int, const CPoint&)> eval;
  std::function<Mat2(int, const CPoint&)> jacobian;  // optional
  double fd_step = 1e-6;
};

/// |h'| / (1 + |h|^2) for one-dimensional targets.
double spherical_derivative(const Complex& value, const Complex& deriv);

/// Norm of the differential measured in the Fubini-Study metric of the
/// affine chart: max over coordinate directions i of
///   sqrt((1+|h|^2) |d_i h|^2 - |<h, d_i h>|^2) / (1+|h|^2).
/// Reduces to the spherical derivative when dim == 1.
double fs_derivative(const SampledFamily& family, int n, const CPoint& p);

/// Finite sampled metric space with a positive weight per point.
struct MetricField {
  std::vector<CPoint> points;
  std::vector<double> values;
  std::function<double(const CPoint&, const CPoint&)> metric;  // default euclidean

  double distance(std::size_t i, std::size_t j) const;
  double value(std::size_t i) const { return values[i]; }
  std::size_t size() const { return points.size(); }
};

/// Starting from `start`, repeatedly jump to any sampled point that more
/// than doubles the weight inside the shrinking ball of radius
/// 1/(sigma * value).  Returns the index of the first point whose ball
/// contains no such violator.  Guarantees, with u = start and v = result:
///   (i)  d(u, v) <= 2 / (sigma * M(u)),
///   (ii) M(v) >= M(u),
///   (iii) M(x) <= 2 M(v) whenever d(x, v) <= 1 / (sigma * M(v)).
std::size_t locate_peak_point(const MetricField& field, std::size_t start,
                              double sigma);

struct PeakCheck {
  bool ok = false;
  double start_distance = 0.0;     // d(u, v)
  double start_distance_bound = 0.0;
  double value_ratio = 0.0;        // M(v) / M(u)
  double worst_neighborhood = 0.0;  // max M(x)/M(v) over the (iii) ball
};

/// Re-verifies the three guarantees of locate_peak_point exhaustively.
PeakCheck check_peak_postconditions(const MetricField& field,
                                    std::size_t start, std::size_t peak,
                                    double sigma);

struct RescalingEntry {
  int n = 0;
  CPoint center;   // v_n
  double scale = 0.0;  // r_n = 1 / M_n(v_n)
};

struct RescalingSequence {
  std::vector<RescalingEntry> entries;
  /// Entry with index n; throws if absent.
  const RescalingEntry& at(int n) const;
};

struct ExtractOptions {
  int count = 10;
  int grid_per_axis = 21;
  /// Restrict the peak search to samples within this distance of the
  /// blow-up point; infinite means the whole domain sample.
  double near_radius = std::numeric_limits<double>::infinity();
  /// Gate on floor(sqrt(max sampled derivative sup)); below this the family
  /// looks normal on the sample and extraction refuses to run.
  int min_certified_depth = 2;
};

struct ExtractionDetail {
  std::size_t argmax_index = 0;  // where the derivative sup is attained
  std::size_t peak_index = 0;    // v_n as an index into the sample
  double sigma = 0.0;            // 1/n
  double sup_value = 0.0;        // sup of M_n over the sample
};

struct Extraction {
  RescalingSequence seq;
  std::vector<CPoint> sample;                      // the finite grid X
  std::vector<std::vector<double>> field_values;   // M_n over X, per entry
  std::vector<ExtractionDetail> detail;
  double grid_spacing = 0.0;
  int certified_depth = 0;
};

/// Rescaling extraction around the blow-up point v: for n = 1..count take
/// M_n = fs_derivative(f_n, .) on the sample, walk to a peak point with
/// sigma = 1/n and set r_n = 1/M_n(v_n).  The rescaled maps
/// w -> f_n(v_n + r_n w) then have derivative 1 at 0 and at most 2 on
/// sampled arguments within |w| <= n.
Extraction extract_rescalings(const SampledFamily& family, const CPoint& v,
                              int count, const ExtractOptions& opts = {});

/// f_n evaluated at v_n + r_n * w; throws when index n was not extracted.
CPoint rescaled_eval(const SampledFamily& family, const RescalingSequence& seq,
                     int n, const CPoint& w);

/// The family w -> f_n(v_n + r_n w) with chain-rule derivatives.
SampledFamily rescaled_family(const SampledFamily& family,
                              const RescalingSequence& seq);

struct RescaledBound {
  double deriv0 = 0.0;   // fs derivative of the rescaled map at 0
  double max_fs = 0.0;   // max over probed |w| <= n staying inside the domain
  double slack = 0.0;    // discretization allowance r_n * L_hat * covering radius
};

/// Probes the rescaled map n on a |w| <= n grid (arguments clipped to the
/// family domain) and reports the derivative bound together with the grid
/// slack computed from the measured variation of M_n between neighbors.
RescaledBound verify_rescaled_bound(const SampledFamily& family,
                                    const Extraction& ex, int n,
                                    int w_grid = 21);

/// Sample of the polydisk as a product of clipped square lattices.
std::vector<CPoint> polydisk_sample(const PolydiskDomain& domain, int dim,
                                    int per_axis);

/// f_n(z) = n z on the unit disk, with analytic derivatives.
SampledFamily scaled_identity_family();

/// f_n(z) = z^n on the closed unit disk, with analytic derivatives.
SampledFamily power_family();

/// f_n = n-th iterate of an elementary map, dimension 2, analytic
/// derivatives from the closed form.
SampledFamily elementary_iterate_family(const ElementaryMap& f,
                                        std::size_t order,
                                        const PolydiskDomain& domain);

}
