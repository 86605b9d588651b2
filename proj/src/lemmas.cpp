#include <cmath>
#include <stdexcept>
#include <vector>

#include "sdimlab/contents.hpp"

namespace sdimlab {

namespace {

// Terms below 2^-60 of the running total are handed to the geometric majorant.
constexpr double kTailCutoffBinades = -60.0;

// sum_{i=1}^{k} a^{b^i} <= (1 + eps) a^{b^k}
bool growing_holds(double log2a, double b, double eps, int k) {
  std::vector<LogScalar> terms;
  for (int i = 1; i <= k; ++i) terms.push_back(LogScalar::from_log2(std::pow(b, i) * log2a));
  const LogScalar sum = log2_sum(terms);
  const LogScalar rhs = LogScalar::from_double(1.0 + eps) * terms.back();
  // the sum must clear the bound even after its worst-case error
  return sum.log2_ratio(rhs) + std::log1p(sum.rel_err_bound()) / std::log(2.0) <= 0.0;
}

// Rigorous upper bound on sum_{i>=k} a^{-b^i}: explicit terms until they fall
// below 2^-60 of the lead, then a^{-b^n} / (1 - a^{-b^n (b-1)}) for the rest.
LogScalar tail_upper(double log2a, double b, int k) {
  std::vector<LogScalar> terms;
  const double lead = -std::pow(b, k) * log2a;
  int n = k;
  while (true) {
    const double e = -std::pow(b, n) * log2a;
    if (e - lead < kTailCutoffBinades) break;
    terms.push_back(LogScalar::from_log2(e));
    ++n;
  }
  const double bn = std::pow(b, n);
  const LogScalar rest = LogScalar::from_log2(-bn * log2a) /
                         LogScalar::one().minus(LogScalar::from_log2(-bn * (b - 1.0) * log2a));
  terms.push_back(rest);
  return log2_sum(terms);
}

bool tail_holds(double log2a, double b, double eps, int k) {
  const LogScalar sum = tail_upper(log2a, b, k);
  const LogScalar rhs = LogScalar::from_double(1.0 + eps) *
                        LogScalar::from_log2(-std::pow(b, k) * log2a);
  return sum.log2_ratio(rhs) + std::log1p(sum.rel_err_bound()) / std::log(2.0) <= 0.0;
}

}  // namespace

int lemma_onset(double a, double b, double eps, LemmaMode mode, int verify_levels, int max_k0) {
  if (!(a > 1.0) || !(b > 1.0) || !(eps > 0.0)) {
    throw std::domain_error("lemma_onset: requires a > 1, b > 1, eps > 0");
  }
  if (verify_levels < 0) throw std::invalid_argument("lemma_onset: verify_levels < 0");
  const double log2a = std::log2(a);
  const int first = mode == LemmaMode::kGrowing ? 1 : 0;
  int run_start = first;
  int run = 0;
  for (int k = first; k <= max_k0 + verify_levels; ++k) {
    const bool ok = mode == LemmaMode::kGrowing ? growing_holds(log2a, b, eps, k)
                                                : tail_holds(log2a, b, eps, k);
    if (ok) {
      if (run == 0) run_start = k;
      if (++run == verify_levels + 1) return run_start;
    } else {
      run = 0;
    }
  }
  throw std::runtime_error("lemma_onset: no onset found up to k0 = " + std::to_string(max_k0));
}

}  // namespace sdimlab
