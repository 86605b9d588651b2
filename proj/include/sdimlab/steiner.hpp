#pragma once

#include <vector>

namespace sdimlab {

/// Steiner polynomial of a unit cube parallel body: volume(r) = sum_j c_j r^j.
/// surface(r) is the term-by-term derivative.
struct SteinerCoefficients {
  int ambient_dim = 0;
  int body_dim = 0;
  std::vector<double> coefficients;  // index = power of r

  double volume(double r) const;
  double surface(double r) const;
};

/// [0,1]^n inside R^n.
SteinerCoefficients cube_steiner(int n);

/// {0} x [0,1]^{d-1} inside R^d.
SteinerCoefficients embedded_cube_steiner(int d);

/// Volume of the r-parallel body of [0,1]^n in R^n.
double cube_parallel_volume(int n, double r);

/// Surface area of the r-parallel body of [0,1]^n in R^n (the Stacho derivative).
double cube_parallel_surface(int n, double r);

/// Surface area of the r-parallel body of {0} x [0,1]^{d-1} in R^d.
double embedded_cube_surface(int d, double r);

/// Volume of the r-parallel body of {0} x [0,1]^{d-1} in R^d.
double embedded_cube_volume(int d, double r);

/// Binomial coefficient as a double; exact for the small arguments used here.
double binomial(int n, int k);

}  // namespace sdimlab
