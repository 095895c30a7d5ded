#pragma once

#include <string>
#include <vector>

#include "fracldg/assembly.hpp"
#include "fracldg/solver.hpp"

namespace fracldg {

struct ProfileConfig {
  std::vector<double> s_list{0.6, 0.7, 0.8, 0.9};
  SquareGradingOptions mesh;
  double c11_scale = 1.0;
  double cs = 1.0;
  PairQuadrature quad;
  SolveOptions solve;
  /// Slice points with |y| >= 1 - boundary_window count as near y = +-1.
  double boundary_window = 0.2;
  /// Samples of the line y = 0 used for the linearity fit.
  int line_samples = 200;
};

struct ElementSample {
  int element = 0;
  Point barycenter = Point::Zero();
  double value = 0.0;                 ///< first component of p_h at the barycenter
  std::array<double, 3> vertex_values{};
};

struct SlicePoint {
  double y = 0.0;
  double value = 0.0;
};

struct SquareProfile {
  double s = 0.0;
  std::vector<ElementSample> surface;
  /// x = -1 slice at boundary-edge midpoints, sorted by y.
  std::vector<SlicePoint> slice;
  /// max |d value / dy| near y = +-1, by central differences at interior
  /// slice points. Adjacent samples come from different elements, so the
  /// one-sided difference below is a first-order estimate only.
  double max_boundary_slope = 0.0;
  /// max one-sided difference over consecutive slice points near y = +-1.
  double max_edge_slope = 0.0;
  /// Linear fit of the first component along y = 0.
  double line_slope = 0.0;
  double line_intercept = 0.0;
  double line_r2 = 0.0;
  SolveDiagnostics diagnostics;
};

struct ProfileReport {
  int elements = 0;
  std::vector<SquareProfile> profiles;
};

/// Solves the f = 1 problem on the NVB-graded square for every s and
/// extracts the first component of p_h (Q = P1, C_s constant).
ProfileReport riesz_profile_square(const ProfileConfig& config);

/// Same, on a given mesh.
SquareProfile square_profile(const Mesh& mesh, double s, const ProfileConfig& config);

/// Writes surface_s<s>.csv and slice_s<s>.csv per profile and summary.csv.
void write_profile_files(const std::string& directory, const ProfileReport& report);

}  // namespace fracldg
