#pragma once

#include <limits>
#include <string>
#include <vector>

#include "renorm2/correspondence.hpp"
#include "renorm2/elementary.hpp"
#include "renorm2/jet.hpp"
#include "renorm2/types.hpp"

namespace renorm2 {

/// Elementary map data as named in config files.  `h_text` echoes the
/// coefficient list or rule name for the manifest.
struct MapSpec {
  Complex alpha{2.0};
  Complex beta{3.0};
  CoefficientRule h = CoefficientRule::zero();
  std::string h_text = "[]";

  ElementaryMap map() const { return {alpha, beta, h}; }
};

struct ScanParams {
  double radius = 2.0;
  int grid = 21;
  std::vector<int> n_list = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
};

struct ZalcmanParams {
  std::string family = "scaled_identity";  // scaled_identity | power | elementary_iterates
  int count = 10;
  double radius = 1.0;
  int grid = 21;
  int min_certified_depth = 2;
};

struct CorrParams {
  Complex c1{2.0};
  Complex c2{3.0};
  CoefficientRule entire = CoefficientRule::zero();
  std::string entire_text = "[]";
  AlgebraicPart algebraic;
  bool normalize = false;
  ScanParams scan{1.0, 21, {5, 10, 15, 20, 25, 30}};
};

struct BasinParams {
  std::string model = "shear_conjugate";  // elementary | shear_conjugate
  Complex shear{1.0};
  CPoint guess{Complex{0.1}, Complex{0.1}};
  std::vector<int> depths = {5, 10, 15, 20};
  double probe_radius = 0.1;
  int probe_grid = 9;
};

struct ExperimentConfig {
  std::string mode;
  MapSpec map;
  int truncation = 1;
  bool truncation_auto = true;
  std::size_t order = kDefaultOrder;
  int iterate_n = 1;
  ScanParams scan;
  int k_max = 50;
  ZalcmanParams zalcman;
  CorrParams corr;
  BasinParams basin;
  std::string out_dir = "out";
  double tolerance = std::numeric_limits<double>::quiet_NaN();  // unset
  unsigned long long seed = 0;

  bool tolerance_set() const { return tolerance == tolerance; }
};

/// Reads and validates a JSON config file.  Structural problems (missing
/// file, bad syntax, unknown mode or field shape) raise ConfigError; maps
/// whose parameters violate the expansion inequalities needed by the
/// requested mode raise HypothesisError already at parse time.
ExperimentConfig parse_config(const std::string& path);

/// Same validation applied to an in-memory JSON document.
ExperimentConfig parse_config_text(const std::string& text);

}
