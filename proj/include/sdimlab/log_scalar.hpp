#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace sdimlab {

/// Thrown when a binary exponent leaves the supported range |log2| <= 2^50.
class SaturationError : public std::overflow_error {
 public:
  explicit SaturationError(const std::string& what) : std::overflow_error(what) {}
};

/**
 * A nonnegative real stored as 2^e with an extended binary exponent.
 *
 * The exponent e is kept as an exact integer part plus a double fraction in
 * [0, 1), so quantities such as 2^{-q^k} at q^k ~ 10^12 keep full double
 * precision in their mantissa. Every value carries a worst-case relative
 * error bound that only grows under arithmetic.
 */
class LogScalar {
 public:
  static constexpr double kMaxLog2 = 1125899906842624.0;  // 2^50
  static constexpr double kUnitRoundoff = 1.1102230246251565e-16;  // 2^-53

  /// Zero.
  LogScalar() = default;

  static LogScalar zero() { return LogScalar(); }
  static LogScalar one() { return from_log2(0.0); }

  /// 2^x, exact.
  static LogScalar from_log2(double x, double rel_err = 0.0);

  /// 2^(integer_part + fraction); fraction need not be normalized.
  static LogScalar from_log2_parts(std::int64_t integer_part, double fraction,
                                   double rel_err = 0.0);

  /// Nonnegative double. Throws std::domain_error on negative or nonfinite input.
  static LogScalar from_double(double x);

  /// Exact integer converted with one rounding of its logarithm.
  static LogScalar from_integer(std::uint64_t n);

  bool is_zero() const { return zero_; }
  double rel_err_bound() const { return rel_err_; }

  /// Binary logarithm as a plain double. Loses low-order bits once
  /// |log2| exceeds 2^52 / 2^-53 resolution; use the parts for exact work.
  double log2_mag() const;
  std::int64_t exponent_int() const { return exp_int_; }
  double exponent_frac() const { return exp_frac_; }

  /// Plain double value; underflows to 0 and overflows to +inf.
  double to_double() const;

  /// Copy with additional relative error folded into the bound.
  LogScalar with_added_error(double extra) const;

  /// Multiplies by 2^k exactly.
  LogScalar scaled_pow2(std::int64_t k) const;

  /// this^t for real t; 0^t = 0 for t > 0 and throws for t <= 0.
  LogScalar pow(double t) const;

  /// this - other for this >= other. Throws std::domain_error if other > this.
  LogScalar minus(const LogScalar& other) const;

  LogScalar& operator*=(const LogScalar& o);
  LogScalar& operator/=(const LogScalar& o);
  LogScalar& operator+=(const LogScalar& o);

  friend LogScalar operator*(LogScalar a, const LogScalar& b) { return a *= b; }
  friend LogScalar operator/(LogScalar a, const LogScalar& b) { return a /= b; }
  friend LogScalar operator+(LogScalar a, const LogScalar& b) { return a += b; }

  /// Ordering on the represented (center) values, ignoring error bounds.
  friend bool operator<(const LogScalar& a, const LogScalar& b);
  friend bool operator==(const LogScalar& a, const LogScalar& b);
  friend bool operator<=(const LogScalar& a, const LogScalar& b) { return !(b < a); }
  friend bool operator>(const LogScalar& a, const LogScalar& b) { return b < a; }
  friend bool operator>=(const LogScalar& a, const LogScalar& b) { return !(a < b); }

  /// log2(this / other) as a double; both must be nonzero.
  double log2_ratio(const LogScalar& other) const;

  std::string to_string() const;

 private:
  void normalize();

  bool zero_ = true;
  std::int64_t exp_int_ = 0;
  double exp_frac_ = 0.0;
  double rel_err_ = 0.0;
};

/// Sum of nonnegative values evaluated against the largest exponent.
/// The error bound grows by at most n * 2^-51 beyond the largest input bound.
LogScalar log2_sum(std::span<const LogScalar> values);

/// Closed bracket [lower, upper] of nonnegative values. Results that depend on
/// a floor-bracketed multiplicity carry both ends.
struct LogBracket {
  LogScalar lower;
  LogScalar upper;

  LogBracket() = default;
  explicit LogBracket(LogScalar exact) : lower(exact), upper(exact) {}
  LogBracket(LogScalar lo, LogScalar hi) : lower(lo), upper(hi) {}

  /// Bracket widened by the error bounds of both ends, as log2 values.
  double widened_lower_log2() const;
  double widened_upper_log2() const;

  /// Geometric center of the widened bracket.
  LogScalar center() const;

  /// Largest relative distance from center() to a widened end.
  double rel_halfwidth() const;

  LogBracket& operator+=(const LogBracket& o);
  LogBracket& operator*=(const LogBracket& o);
  LogBracket& operator*=(const LogScalar& o);
  LogBracket& operator/=(const LogScalar& o);

  friend LogBracket operator+(LogBracket a, const LogBracket& b) { return a += b; }
  friend LogBracket operator*(LogBracket a, const LogBracket& b) { return a *= b; }
  friend LogBracket operator*(LogBracket a, const LogScalar& b) { return a *= b; }
  friend LogBracket operator/(LogBracket a, const LogScalar& b) { return a /= b; }
};

}  // namespace sdimlab
