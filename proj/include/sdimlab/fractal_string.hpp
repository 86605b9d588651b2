#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdimlab/log_scalar.hpp"

namespace sdimlab {

/// Generator parameters of the two-parameter string with
/// r_k = 2^{-q^k} and N_k = floor(2^{q^{k+1} s}).
struct WinterParams {
  double s = 0.0;
  double m = 0.0;
  double q = 0.0;

  double upper_dim() const { return s * q; }
};

/// Multiplicity N_k: an exact count when it fits in 62 bits, otherwise the
/// floor bracket [2^x - 1, 2^x] of floor(2^x).
class Multiplicity {
 public:
  static Multiplicity exact(std::uint64_t n);
  static Multiplicity floor_pow2(double x);  // floor(2^x), exact when x <= 62

  bool is_exact() const { return exact_.has_value(); }
  std::uint64_t exact_value() const { return exact_.value(); }
  double floor_log2() const { return log2_arg_; }  // meaningful when !is_exact()
  LogBracket value() const;

 private:
  std::optional<std::uint64_t> exact_;
  double log2_arg_ = 0.0;
};

/// How a string is evaluated below its truncation depth.
enum class EvalMode {
  kStrict,      // infinite-string semantics; tails bracketed; 2r < r_K is an error
  kFinite,      // the truncated list is the whole string; no tail
  kAsymptotic,  // like kStrict but extends generated strings on demand
};

/**
 * Fractal string in run-length form: distinct gap lengths r_1 > ... > r_K
 * with multiplicities N_1..N_K. Levels are 1-based; N_0 = 1 and r_0 = inf.
 * Immutable after construction; prefix counts and suffix lengths are cached.
 */
class FractalString {
 public:
  FractalString(std::vector<LogScalar> scales, std::vector<Multiplicity> multiplicities,
                std::optional<WinterParams> params = std::nullopt);

  /// Run-length encodes an arbitrary list of positive lengths.
  static FractalString from_lengths(std::span<const double> lengths);

  int depth() const { return static_cast<int>(scales_.size()); }
  const std::vector<LogScalar>& scales() const { return scales_; }
  const std::vector<Multiplicity>& multiplicities() const { return mults_; }
  const std::optional<WinterParams>& params() const { return params_; }

  /// True when the list is a truncation of an infinite generated string.
  bool is_truncation() const { return params_.has_value(); }

  /// r_k for 1 <= k <= K.
  const LogScalar& scale(int k) const;
  /// r_k as a double; the original value when the string was built from doubles.
  double scale_as_double(int k) const;
  /// N_k for 0 <= k <= K.
  LogBracket multiplicity(int k) const;

  /// Same generator carried to a new depth. Requires is_truncation().
  FractalString extended(int new_depth) const;

  /// Sum of N_k r_k up to the depth; with_tail adds the rigorous bound on
  /// the omitted levels to the upper end.
  LogBracket total_length(bool with_tail = false) const;

  /// Sum_{i=0}^{k-1} N_i for 1 <= k <= K+1 (half of M_k).
  LogBracket cumulative_count(int k) const;
  std::optional<std::uint64_t> cumulative_count_exact(int k) const;

  /// Sum_{i=k}^{K} N_i r_i for 1 <= k <= K+1, plus the tail bound on request.
  LogBracket tail_length(int k, bool with_tail = false) const;

  /// Upper bound on sum_{i>K} N_i r_i; zero for strings that are not truncations.
  const LogScalar& tail_bound() const { return tail_bound_; }

  /// Level k with 2r in [r_k, r_{k-1}); K+1 when 2r < r_K.
  int level_of(const LogScalar& r) const;

 private:
  std::vector<LogScalar> scales_;
  std::vector<Multiplicity> mults_;
  std::optional<WinterParams> params_;
  std::vector<double> plain_lengths_;                // empty unless built from doubles
  std::vector<LogBracket> prefix_;                   // index k: sum_{i<k} N_i
  std::vector<std::optional<std::uint64_t>> prefix_exact_;
  std::vector<LogBracket> suffix_;                   // index k: sum_{i=k}^{K} N_i r_i
  LogScalar tail_bound_;
};

/// The string with q = 1 + 1/s - 1/m, r_k = 2^{-q^k}, N_k = floor(2^{q^{k+1} s}).
/// Requires 0 < s < m < 1 and depth >= 1.
FractalString winter_string(double s, double m, int depth);

/// q = 1 + 1/s - 1/m after validating 0 < s < m < 1.
double winter_q(double s, double m);

/// H^0 of the boundary of the r-parallel set: 2 * cumulative_count(level).
LogBracket boundary_count(const FractalString& str, const LogScalar& r,
                          EvalMode mode = EvalMode::kStrict);

/// lambda_1 of the r-parallel set: 2r * cumulative_count(k) + tail_length(k).
LogBracket parallel_volume(const FractalString& str, const LogScalar& r,
                           EvalMode mode = EvalMode::kStrict);

/// The string that evaluation at radius r actually uses under `mode`,
/// after validation or on-demand extension. Returned by value.
FractalString resolve_for_radius(const FractalString& str, const LogScalar& r, EvalMode mode);

/// A concrete placement of the gaps inside [0, L].
struct RealizedSet {
  std::vector<double> endpoints;  // ascending, first 0, last L
  std::vector<double> gaps;       // in placement order

  double length() const { return endpoints.empty() ? 0.0 : endpoints.back(); }
};

/// Largest total gap count realize() accepts.
inline constexpr std::uint64_t kMaxRealizedGaps = 10'000'000;

/// Packs the gaps of levels 1..depth in nonincreasing length order,
/// consecutive and sharing endpoints.
RealizedSet realize(const FractalString& str, int depth);

/// Realization from explicit sorted endpoints (gaps are consecutive differences).
RealizedSet realized_from_endpoints(std::vector<double> endpoints);

/// Number of grid cells [j r, (j+1) r) that contain an endpoint.
std::uint64_t box_count(const RealizedSet& set, double r);

/// JSON string file and CSV realization export.
std::string to_json(const FractalString& str);
FractalString string_from_json(const std::string& text);
void write_string_file(const FractalString& str, const std::string& path);
FractalString read_string_file(const std::string& path);
std::string realization_csv(const RealizedSet& set);

}  // namespace sdimlab
