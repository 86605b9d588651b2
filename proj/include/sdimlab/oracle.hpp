#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "sdimlab/fractal_string.hpp"

namespace sdimlab {

/// Lebesgue measure of the union of closed intervals [e - r, e + r] over the
/// endpoints, by sort-and-merge in long double.
double brute_parallel_measure(const RealizedSet& set, double r);

/// Boundary points of that union: twice the number of merged components.
std::uint64_t brute_boundary_count(const RealizedSet& set, double r);

/// Sample lattice covering (F x [0,1])_r with a margin of at least 2h.
/// Samples sit at cell centers x0 + (i + 1/2) h, y0 + (j + 1/2) h.
struct Grid2D {
  double h = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;
  std::int64_t nx = 0;
  std::int64_t ny = 0;

  double x(std::int64_t i) const { return x0 + (static_cast<double>(i) + 0.5) * h; }
  double y(std::int64_t j) const { return y0 + (static_cast<double>(j) + 0.5) * h; }
};

/// Largest sample count the raster oracles accept.
inline constexpr std::int64_t kMaxGridSamples = 400'000'000;

Grid2D make_grid(const RealizedSet& set, double r, double h);

/// Occupied cells times h^2; a cell is occupied when its center lies within r.
/// Requires h <= r/50. Throws std::length_error past the sample cap.
double raster_area_2d(const RealizedSet& set, double r, double h);

/// Length of the marching-squares contour of the distance field phi = dist - r,
/// with linear interpolation along cell edges and saddles resolved by the
/// mean of the four corners.
double marching_perimeter_2d(const RealizedSet& set, double r, double h);

/// Writes the occupancy raster as a binary PGM (occupied = 255).
void write_occupancy_pgm(const RealizedSet& set, double r, double h, const std::string& path);

/// (f(r + step) - f(r - step)) / (2 step). Requires 0 < step < r/10 and finite samples.
double finite_diff(const std::function<double(double)>& f, double r, double step);

struct CheckedDerivative {
  double central = 0.0;
  double forward = 0.0;
  double backward = 0.0;
  bool jump = false;  // one-sided slopes disagree beyond jump_tol
};

CheckedDerivative finite_diff_checked(const std::function<double(double)>& f, double r,
                                      double step, double jump_tol = 1e-4);

}  // namespace sdimlab
