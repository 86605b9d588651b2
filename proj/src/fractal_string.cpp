#include "sdimlab/fractal_string.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace sdimlab {

namespace {

constexpr double kExactFloorLimit = 62.0;

std::optional<std::uint64_t> checked_add(std::optional<std::uint64_t> a,
                                         std::optional<std::uint64_t> b) {
  if (!a || !b) return std::nullopt;
  if (*a > std::numeric_limits<std::uint64_t>::max() - *b) return std::nullopt;
  return *a + *b;
}

// Bound on sum_{i>K} N_i r_i. With a = 2^{1-qs}, b = q and N_i r_i <= a^{-b^i},
// Bernoulli's inequality b^j - 1 >= j (b - 1) gives a geometric majorant.
LogScalar winter_tail_bound(const WinterParams& p, int depth) {
  const double gap_exp = 1.0 - p.s * p.q;
  const double qk1 = std::pow(p.q, depth + 1);
  const LogScalar lead = LogScalar::from_log2(-qk1 * gap_exp);
  const LogScalar ratio = LogScalar::from_log2(-qk1 * (p.q - 1.0) * gap_exp);
  return lead / LogScalar::one().minus(ratio);
}

}  // namespace

Multiplicity Multiplicity::exact(std::uint64_t n) {
  Multiplicity m;
  m.exact_ = n;
  m.log2_arg_ = n == 0 ? -std::numeric_limits<double>::infinity() : std::log2(double(n));
  return m;
}

Multiplicity Multiplicity::floor_pow2(double x) {
  if (!std::isfinite(x)) throw std::domain_error("floor_pow2: nonfinite exponent");
  if (x < kExactFloorLimit) {
    using boost::multiprecision::cpp_bin_float_50;
    const cpp_bin_float_50 v = floor(pow(cpp_bin_float_50(2), cpp_bin_float_50(x)));
    return exact(v.convert_to<std::uint64_t>());
  }
  Multiplicity m;
  m.log2_arg_ = x;
  return m;
}

LogBracket Multiplicity::value() const {
  if (exact_) return LogBracket(LogScalar::from_integer(*exact_));
  const LogScalar upper = LogScalar::from_log2(log2_arg_);
  return LogBracket(upper.minus(LogScalar::one()), upper);
}

FractalString::FractalString(std::vector<LogScalar> scales,
                             std::vector<Multiplicity> multiplicities,
                             std::optional<WinterParams> params)
    : scales_(std::move(scales)), mults_(std::move(multiplicities)), params_(params) {
  if (scales_.size() != mults_.size()) {
    throw std::invalid_argument("FractalString: scales and multiplicities differ in length");
  }
  for (std::size_t i = 0; i < scales_.size(); ++i) {
    if (scales_[i].is_zero()) throw std::invalid_argument("FractalString: zero gap length");
    if (i > 0 && !(scales_[i] < scales_[i - 1])) {
      throw std::invalid_argument("FractalString: scales must be strictly decreasing");
    }
  }
  if (params_) {
    const auto& p = *params_;
    if (!(0.0 < p.s && p.s < p.m && p.m < 1.0) || !(p.q > 1.0) || !(p.s * p.q < 1.0)) {
      throw std::invalid_argument("FractalString: invalid generator parameters");
    }
  }

  const int K = depth();
  prefix_.reserve(K + 2);
  prefix_exact_.reserve(K + 2);
  prefix_.emplace_back();  // index 0 unused: empty sum
  prefix_exact_.emplace_back(0);
  LogBracket count(LogScalar::one());
  std::optional<std::uint64_t> count_exact = 1;
  prefix_.push_back(count);
  prefix_exact_.push_back(count_exact);
  for (int k = 1; k <= K; ++k) {
    const Multiplicity& n = mults_[k - 1];
    count += n.value();
    count_exact = checked_add(count_exact, n.is_exact() ? std::optional(n.exact_value())
                                                        : std::nullopt);
    prefix_.push_back(count);
    prefix_exact_.push_back(count_exact);
  }

  suffix_.assign(K + 2, LogBracket());
  for (int k = K; k >= 1; --k) {
    suffix_[k] = suffix_[k + 1] + mults_[k - 1].value() * scales_[k - 1];
  }
  tail_bound_ = params_ ? winter_tail_bound(*params_, K) : LogScalar::zero();
}

FractalString FractalString::from_lengths(std::span<const double> lengths) {
  std::vector<double> sorted(lengths.begin(), lengths.end());
  for (double l : sorted) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw std::invalid_argument("from_lengths: lengths must be positive and finite");
    }
  }
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<LogScalar> scales;
  std::vector<Multiplicity> mults;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    scales.push_back(LogScalar::from_double(sorted[i]));
    mults.push_back(Multiplicity::exact(j - i));
    i = j;
  }
  FractalString out(std::move(scales), std::move(mults));
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (k == 0 || sorted[k] != sorted[k - 1]) out.plain_lengths_.push_back(sorted[k]);
  }
  return out;
}

double FractalString::scale_as_double(int k) const {
  if (!plain_lengths_.empty()) {
    if (k < 1 || k > depth()) throw std::out_of_range("scale: level out of range");
    return plain_lengths_[k - 1];
  }
  return scale(k).to_double();
}

const LogScalar& FractalString::scale(int k) const {
  if (k < 1 || k > depth()) throw std::out_of_range("scale: level out of range");
  return scales_[k - 1];
}

LogBracket FractalString::multiplicity(int k) const {
  if (k < 0 || k > depth()) throw std::out_of_range("multiplicity: level out of range");
  if (k == 0) return LogBracket(LogScalar::one());
  return mults_[k - 1].value();
}

FractalString FractalString::extended(int new_depth) const {
  if (!params_) throw std::logic_error("extended: string has no generator");
  return winter_string(params_->s, params_->m, new_depth);
}

LogBracket FractalString::total_length(bool with_tail) const {
  return tail_length(1, with_tail);
}

LogBracket FractalString::cumulative_count(int k) const {
  if (k < 1 || k > depth() + 1) {
    throw std::out_of_range("cumulative_count: level " + std::to_string(k) + " out of range");
  }
  return prefix_[k];
}

std::optional<std::uint64_t> FractalString::cumulative_count_exact(int k) const {
  if (k < 1 || k > depth() + 1) throw std::out_of_range("cumulative_count: level out of range");
  return prefix_exact_[k];
}

LogBracket FractalString::tail_length(int k, bool with_tail) const {
  if (k < 1 || k > depth() + 1) {
    throw std::out_of_range("tail_length: level " + std::to_string(k) + " out of range");
  }
  LogBracket out = suffix_[k];
  if (with_tail) out.upper += tail_bound_;
  return out;
}

int FractalString::level_of(const LogScalar& r) const {
  if (r.is_zero()) throw std::domain_error("level_of: radius must be positive");
  const LogScalar two_r = r.scaled_pow2(1);
  // first level whose length is <= 2r; scales are decreasing
  const auto it = std::partition_point(scales_.begin(), scales_.end(),
                                       [&](const LogScalar& s) { return two_r < s; });
  return static_cast<int>(it - scales_.begin()) + 1;
}

double winter_q(double s, double m) {
  if (!(0.0 < s && s < m && m < 1.0)) {
    throw std::invalid_argument("winter string requires 0 < s < m < 1");
  }
  return 1.0 + 1.0 / s - 1.0 / m;
}

FractalString winter_string(double s, double m, int depth) {
  const double q = winter_q(s, m);
  if (depth < 1) throw std::invalid_argument("winter string depth must be >= 1");
  std::vector<LogScalar> scales;
  std::vector<Multiplicity> mults;
  scales.reserve(depth);
  mults.reserve(depth);
  for (int k = 1; k <= depth; ++k) {
    const double qk = std::pow(q, k);
    const double qk1 = std::pow(q, k + 1);
    scales.push_back(LogScalar::from_log2(-qk));
    mults.push_back(Multiplicity::floor_pow2(qk1 * s));
  }
  return FractalString(std::move(scales), std::move(mults), WinterParams{s, m, q});
}

FractalString resolve_for_radius(const FractalString& str, const LogScalar& r, EvalMode mode) {
  if (r.is_zero()) throw std::domain_error("radius must be positive");
  if (mode == EvalMode::kFinite || !str.is_truncation()) return str;
  if (str.level_of(r) <= str.depth()) return str;
  if (mode == EvalMode::kStrict) {
    throw std::out_of_range("radius below truncation resolution (2r < r_K)");
  }
  // smallest k with q^k >= -log2(2r), i.e. r_k <= 2r
  const double target = -r.scaled_pow2(1).log2_mag();
  const double q = str.params()->q;
  int k = str.depth();
  while (std::pow(q, k) < target) ++k;
  return str.extended(k + 1);
}

LogBracket boundary_count(const FractalString& str, const LogScalar& r, EvalMode mode) {
  const FractalString resolved = resolve_for_radius(str, r, mode);
  LogBracket c = resolved.cumulative_count(resolved.level_of(r));
  return c * LogScalar::from_log2(1.0);
}

LogBracket parallel_volume(const FractalString& str, const LogScalar& r, EvalMode mode) {
  const FractalString resolved = resolve_for_radius(str, r, mode);
  const int k = resolved.level_of(r);
  const bool with_tail = mode != EvalMode::kFinite;
  return resolved.cumulative_count(k) * r.scaled_pow2(1) + resolved.tail_length(k, with_tail);
}

RealizedSet realize(const FractalString& str, int depth) {
  if (depth < 0 || depth > str.depth()) throw std::out_of_range("realize: depth out of range");
  std::uint64_t total = 0;
  for (int k = 1; k <= depth; ++k) {
    const Multiplicity& n = str.multiplicities()[k - 1];
    if (!n.is_exact() || n.exact_value() > kMaxRealizedGaps - total) {
      throw std::length_error("realize: gap count exceeds 10^7");
    }
    total += n.exact_value();
  }
  RealizedSet out;
  out.endpoints.reserve(total + 1);
  out.gaps.reserve(total);
  double x = 0.0;
  out.endpoints.push_back(x);
  for (int k = 1; k <= depth; ++k) {
    const double len = str.scale_as_double(k);
    for (std::uint64_t j = 0; j < str.multiplicities()[k - 1].exact_value(); ++j) {
      x += len;
      out.gaps.push_back(len);
      out.endpoints.push_back(x);
    }
  }
  return out;
}

RealizedSet realized_from_endpoints(std::vector<double> endpoints) {
  if (endpoints.empty()) return {};
  if (!std::is_sorted(endpoints.begin(), endpoints.end())) {
    throw std::invalid_argument("realized_from_endpoints: endpoints must be sorted");
  }
  RealizedSet out;
  out.endpoints = std::move(endpoints);
  for (std::size_t i = 1; i < out.endpoints.size(); ++i) {
    out.gaps.push_back(out.endpoints[i] - out.endpoints[i - 1]);
  }
  return out;
}

std::uint64_t box_count(const RealizedSet& set, double r) {
  if (!(r > 0.0)) throw std::domain_error("box_count: r must be positive");
  std::uint64_t count = 0;
  bool have_prev = false;
  double prev = 0.0;
  for (double e : set.endpoints) {
    const double cell = std::floor(e / r);
    if (!have_prev || cell != prev) ++count;
    prev = cell;
    have_prev = true;
  }
  return count;
}

}  // namespace sdimlab
