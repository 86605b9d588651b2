#pragma once

namespace sdimlab {

/// Gamma function for x > 0 by a Lanczos approximation (g = 7, 9 terms),
/// with the reflection formula below 1/2. About 15 significant digits.
double lanczos_gamma(double x);

/// Normalizing constant pi^{t/2} / Gamma(1 + t/2); the volume of the unit
/// t-ball for integer t. Throws std::domain_error for t < 0.
double kappa(double t);

}  // namespace sdimlab
