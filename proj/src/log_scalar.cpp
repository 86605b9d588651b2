#include "sdimlab/log_scalar.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <vector>

namespace sdimlab {

namespace {

constexpr double kU = LogScalar::kUnitRoundoff;

// Contributions more than this many binades below the leading term only
// enter the error bound.
constexpr double kNegligibleBinades = -1080.0;

void check_range(std::int64_t integer_part) {
  if (std::fabs(static_cast<double>(integer_part)) > LogScalar::kMaxLog2) {
    throw SaturationError("binary exponent " + std::to_string(integer_part) +
                          " exceeds 2^50");
  }
}

}  // namespace

LogScalar LogScalar::from_log2(double x, double rel_err) {
  if (!std::isfinite(x)) throw std::domain_error("from_log2: nonfinite exponent");
  const double ip = std::floor(x);
  if (std::fabs(ip) > kMaxLog2) {
    throw SaturationError("binary exponent exceeds 2^50");
  }
  return from_log2_parts(static_cast<std::int64_t>(ip), x - ip, rel_err);
}

LogScalar LogScalar::from_log2_parts(std::int64_t integer_part, double fraction,
                                     double rel_err) {
  if (!std::isfinite(fraction)) {
    throw std::domain_error("from_log2_parts: nonfinite fraction");
  }
  LogScalar v;
  v.zero_ = false;
  v.exp_int_ = integer_part;
  v.exp_frac_ = fraction;
  v.rel_err_ = rel_err;
  v.normalize();
  return v;
}

LogScalar LogScalar::from_double(double x) {
  if (!std::isfinite(x) || x < 0.0) {
    throw std::domain_error("from_double: value must be finite and nonnegative");
  }
  if (x == 0.0) return zero();
  int e = 0;
  const double mant = std::frexp(x, &e);  // [0.5, 1)
  if (mant == 0.5) return from_log2_parts(e - 1, 0.0);
  return from_log2_parts(e - 1, std::log2(2.0 * mant), 2.0 * kU);
}

LogScalar LogScalar::from_integer(std::uint64_t n) {
  if (n == 0) return zero();
  const int top = 63 - std::countl_zero(n);
  if ((n & (n - 1)) == 0) return from_log2_parts(top, 0.0);
  // long double holds 64-bit integers exactly on the supported targets
  const long double mant = std::ldexp(static_cast<long double>(n), -top);
  return from_log2_parts(top, static_cast<double>(std::log2(mant)), 2.0 * kU);
}

void LogScalar::normalize() {
  if (zero_) return;
  const double shift = std::floor(exp_frac_);
  if (shift != 0.0) {
    exp_int_ += static_cast<std::int64_t>(shift);
    exp_frac_ -= shift;
  }
  if (exp_frac_ >= 1.0) {  // rounding of frac - floor(frac) can land on 1
    exp_frac_ -= 1.0;
    exp_int_ += 1;
  }
  check_range(exp_int_);
}

double LogScalar::log2_mag() const {
  if (zero_) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(exp_int_) + exp_frac_;
}

double LogScalar::to_double() const {
  if (zero_) return 0.0;
  if (exp_int_ > 1100) return std::numeric_limits<double>::infinity();
  if (exp_int_ < -1100) return 0.0;
  return std::ldexp(std::exp2(exp_frac_), static_cast<int>(exp_int_));
}

LogScalar LogScalar::with_added_error(double extra) const {
  LogScalar v = *this;
  v.rel_err_ += std::fabs(extra);
  return v;
}

LogScalar LogScalar::scaled_pow2(std::int64_t k) const {
  if (zero_) return *this;
  LogScalar v = *this;
  v.exp_int_ += k;
  check_range(v.exp_int_);
  return v;
}

LogScalar LogScalar::pow(double t) const {
  if (!std::isfinite(t)) throw std::domain_error("pow: nonfinite exponent");
  if (zero_) {
    if (t <= 0.0) throw std::domain_error("pow: 0^t with t <= 0");
    return *this;
  }
  if (t == 0.0) return one();
  // t * exp_int_ split exactly into a double product plus its rounding error
  const double e = static_cast<double>(exp_int_);
  const double prod = t * e;
  const double prod_err = std::fma(t, e, -prod);
  const double ip = std::floor(prod);
  if (std::fabs(ip) > kMaxLog2) throw SaturationError("pow: exponent exceeds 2^50");
  const double frac = (prod - ip) + (prod_err + t * exp_frac_);
  const double at = std::fabs(t);
  const double err = std::expm1(at * std::log1p(rel_err_)) + 4.0 * kU * std::max(1.0, at);
  return from_log2_parts(static_cast<std::int64_t>(ip), frac, err);
}

LogScalar& LogScalar::operator*=(const LogScalar& o) {
  if (zero_ || o.zero_) {
    *this = zero();
    return *this;
  }
  exp_int_ += o.exp_int_;
  exp_frac_ += o.exp_frac_;
  rel_err_ = rel_err_ + o.rel_err_ + rel_err_ * o.rel_err_ + 2.0 * kU;
  normalize();
  return *this;
}

LogScalar& LogScalar::operator/=(const LogScalar& o) {
  if (o.zero_) throw std::domain_error("LogScalar division by zero");
  if (zero_) return *this;
  exp_int_ -= o.exp_int_;
  exp_frac_ -= o.exp_frac_;
  // 1/(1-e) - 1 bounds the relative error of an inexact divisor
  const double inv = o.rel_err_ < 1.0 ? o.rel_err_ / (1.0 - o.rel_err_) : INFINITY;
  rel_err_ = rel_err_ + inv + rel_err_ * inv + 2.0 * kU;
  normalize();
  return *this;
}

LogScalar& LogScalar::operator+=(const LogScalar& o) {
  const LogScalar pair[2] = {*this, o};
  *this = log2_sum(pair);
  return *this;
}

double LogScalar::log2_ratio(const LogScalar& other) const {
  if (zero_ || other.zero_) throw std::domain_error("log2_ratio of zero");
  return static_cast<double>(exp_int_ - other.exp_int_) + (exp_frac_ - other.exp_frac_);
}

LogScalar LogScalar::minus(const LogScalar& other) const {
  if (other.zero_) return *this;
  if (zero_ || other > *this) throw std::domain_error("LogScalar::minus would be negative");
  const double d = other.log2_ratio(*this);  // <= 0
  if (d == 0.0) return zero();
  const double ratio = std::exp2(d);
  const double lg = std::log1p(-ratio) / std::numbers::ln2;
  const double err = (rel_err_ + other.rel_err_ * ratio) / (1.0 - ratio) + 4.0 * kU;
  return from_log2_parts(exp_int_, exp_frac_ + lg, err);
}

bool operator<(const LogScalar& a, const LogScalar& b) {
  if (a.zero_) return !b.zero_;
  if (b.zero_) return false;
  if (a.exp_int_ != b.exp_int_) return a.exp_int_ < b.exp_int_;
  return a.exp_frac_ < b.exp_frac_;
}

bool operator==(const LogScalar& a, const LogScalar& b) {
  if (a.zero_ || b.zero_) return a.zero_ == b.zero_;
  return a.exp_int_ == b.exp_int_ && a.exp_frac_ == b.exp_frac_;
}

std::string LogScalar::to_string() const {
  if (zero_) return "0";
  char buf[96];
  std::snprintf(buf, sizeof buf, "2^(%lld%+.17g) [rel_err %.3g]",
                static_cast<long long>(exp_int_), exp_frac_, rel_err_);
  return buf;
}

LogScalar log2_sum(std::span<const LogScalar> values) {
  const LogScalar* lead = nullptr;
  double worst = 0.0;
  for (const auto& v : values) {
    worst = std::max(worst, v.rel_err_bound());
    if (!v.is_zero() && (lead == nullptr || *lead < v)) lead = &v;
  }
  if (lead == nullptr) return LogScalar::zero().with_added_error(worst);
  double acc = 0.0;
  double dropped = 0.0;
  for (const auto& v : values) {
    if (v.is_zero()) continue;
    const double d = v.log2_ratio(*lead);
    if (d < kNegligibleBinades) {
      dropped += std::exp2(std::max(d, -1074.0));
      continue;
    }
    acc += std::exp2(d);
  }
  const double n = static_cast<double>(values.size());
  const double err = worst + 2.0 * n * kU + dropped;
  return LogScalar::from_log2_parts(lead->exponent_int(),
                                    lead->exponent_frac() + std::log2(acc), err);
}

double LogBracket::widened_lower_log2() const {
  if (lower.is_zero()) return -std::numeric_limits<double>::infinity();
  const double e = lower.rel_err_bound();
  if (e >= 1.0) return -std::numeric_limits<double>::infinity();
  return lower.log2_mag() + std::log1p(-e) / std::numbers::ln2;
}

double LogBracket::widened_upper_log2() const {
  if (upper.is_zero()) return -std::numeric_limits<double>::infinity();
  return upper.log2_mag() + std::log1p(upper.rel_err_bound()) / std::numbers::ln2;
}

LogScalar LogBracket::center() const {
  if (lower.is_zero() && upper.is_zero()) return LogScalar::zero();
  if (lower.is_zero()) return upper;
  const double half = 0.5 * upper.log2_ratio(lower);
  return LogScalar::from_log2_parts(lower.exponent_int(), lower.exponent_frac() + half,
                                    std::max(lower.rel_err_bound(), upper.rel_err_bound()));
}

double LogBracket::rel_halfwidth() const {
  if (upper.is_zero()) return 0.0;
  if (lower.is_zero()) return INFINITY;
  const LogScalar c = center();
  const double e_lo = lower.rel_err_bound();
  if (e_lo >= 1.0) return INFINITY;
  // distances from the center in log2 space
  const double up = upper.log2_ratio(c) + std::log1p(upper.rel_err_bound()) / std::numbers::ln2;
  const double down = c.log2_ratio(lower) - std::log1p(-e_lo) / std::numbers::ln2;
  return std::expm1(std::max(up, down) * std::numbers::ln2);
}

LogBracket& LogBracket::operator+=(const LogBracket& o) {
  lower += o.lower;
  upper += o.upper;
  return *this;
}

LogBracket& LogBracket::operator*=(const LogBracket& o) {
  lower *= o.lower;
  upper *= o.upper;
  return *this;
}

LogBracket& LogBracket::operator*=(const LogScalar& o) {
  lower *= o;
  upper *= o;
  return *this;
}

LogBracket& LogBracket::operator/=(const LogScalar& o) {
  lower /= o;
  upper /= o;
  return *this;
}

}  // namespace sdimlab
