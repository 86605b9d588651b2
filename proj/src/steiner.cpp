#include "sdimlab/steiner.hpp"

#include <stdexcept>
#include <string>

#include "sdimlab/special.hpp"

namespace sdimlab {

namespace {

void check_radius(double r) {
  if (!(r >= 0.0)) throw std::domain_error("Steiner polynomial: radius must be >= 0");
}

// Intrinsic volumes of [0,1]^n are C(n, j); the parallel body in R^d picks up
// kappa_{d-j} r^{d-j} for each.
SteinerCoefficients cube_in_space(int n, int d) {
  SteinerCoefficients s;
  s.ambient_dim = d;
  s.body_dim = n;
  s.coefficients.assign(static_cast<std::size_t>(d) + 1, 0.0);
  for (int j = 0; j <= n; ++j) {
    s.coefficients[static_cast<std::size_t>(d - j)] = binomial(n, j) * kappa(d - j);
  }
  return s;
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

double SteinerCoefficients::volume(double r) const {
  check_radius(r);
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * r + *it;
  return acc;
}

double SteinerCoefficients::surface(double r) const {
  check_radius(r);
  double acc = 0.0;
  for (std::size_t j = coefficients.size(); j-- > 1;) {
    acc = acc * r + static_cast<double>(j) * coefficients[j];
  }
  return acc;
}

SteinerCoefficients cube_steiner(int n) {
  if (n < 1) throw std::domain_error("cube_steiner: n must be >= 1, got " + std::to_string(n));
  return cube_in_space(n, n);
}

SteinerCoefficients embedded_cube_steiner(int d) {
  if (d < 2) throw std::domain_error("embedded_cube_steiner: d must be >= 2");
  return cube_in_space(d - 1, d);
}

double cube_parallel_volume(int n, double r) { return cube_steiner(n).volume(r); }

double cube_parallel_surface(int n, double r) { return cube_steiner(n).surface(r); }

double embedded_cube_surface(int d, double r) { return embedded_cube_steiner(d).surface(r); }

double embedded_cube_volume(int d, double r) { return embedded_cube_steiner(d).volume(r); }

}  // namespace sdimlab
