#pragma once

#include <optional>

#include "sdimlab/contents.hpp"
#include "sdimlab/fractal_string.hpp"

namespace sdimlab {

/// F x [0,1]^{d-1} in R^d, described by the gap lengths of F.
struct ProductSpec {
  FractalString base;
  int ambient_dim = 2;
  double lambda1_f = 0.0;  // lambda_1(F); 0 for string boundaries
  EvalMode mode = EvalMode::kStrict;

  static ProductSpec from_string(FractalString base, int d, EvalMode mode = EvalMode::kStrict);
  /// Realized sets are finite; evaluated with EvalMode::kFinite.
  static ProductSpec from_realized(const RealizedSet& set, int d, double lambda1_f = 0.0);
};

/// Exact boundary length of (F x [0,1])_r by vertical slicing:
/// 2 lambda_1(F) + (2 + 2 pi r)(1 + #{l_j > 2r}) + sum_{l_j <= 2r} 4 r asin(l_j / 2r).
LogBracket product_surface_2d(const ProductSpec& spec, const LogScalar& r);
double product_surface_2d(const ProductSpec& spec, double r);

/// Exact area of (F x [0,1])_r by slice integration.
LogBracket product_volume_2d(const ProductSpec& spec, const LogScalar& r);
double product_volume_2d(const ProductSpec& spec, double r);

struct ProductBounds {
  LogBracket lower;
  LogBracket upper;
};

/// lower = H^0(dF_r); upper from the slice bounds with the narrow-gap
/// contribution replaced by H^{d-2}(d([0,1]^{d-1})_r) pi l_j.
ProductBounds product_surface_bounds(const ProductSpec& spec, const LogScalar& r);

/// lambda_1(F_r) <= V((F x [0,1]^{d-1})_r) <= lambda_1(F_r) V(([0,1]^{d-1})_r).
ProductBounds product_volume_bounds(const ProductSpec& spec, const LogScalar& r);

/// Least level k' from which the upper surface bound stays below
/// (c_2/2 + 1) H^0(dF_r), c_2 = embedded_cube_surface(d, 1), at every
/// endpoint radius of levels k'..k_max. Empty if it fails at k_max.
std::optional<int> proof_display_onset(const ProductSpec& spec, int k_min, int k_max);

/// Four dimensions of F x [0,1]^{d-1}: slopes of the lower and upper bound
/// tracks, shifted by d-1 (surface) or d (volume). A dimension is flagged
/// inconclusive when its two bracket slopes differ by more than tol.
DimensionReport product_dimension_report(const FractalString& base, int d, double tol = 1e-3);
DimensionReport product_dimension_report(double s, double m, int d, int depth,
                                         double tol = 1e-3);

/// Normalized contents of the product at exponent t in (d-1, d): volume over
/// kappa_{d-t} r^{d-t}, surface over (d-t) kappa_{d-t} r^{d-1-t}. Exact for
/// d = 2; for d >= 3 the value column holds the bracket from the bounds.
ContentProfile product_profile(const ProductSpec& spec, double t, ContentKind kind,
                               const ScaleSchedule& schedule);

}  // namespace sdimlab
