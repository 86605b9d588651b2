#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdimlab {

enum class CheckStatus { kPass, kFail, kInconclusive, kInfo };

std::string_view status_name(CheckStatus s);

struct SuiteCheck {
  std::string suite;
  std::string name;
  CheckStatus status = CheckStatus::kInfo;
  double measured = 0.0;
  double target = 0.0;
  double residual = 0.0;
  double threshold = 0.0;
  double uncertainty = 0.0;
  std::string detail;
};

struct SuiteOptions {
  double tol = 1e-6;         // content residual threshold; dimensions use 10 tol
  int precision_bits = 53;   // error bookkeeping: unit roundoff 2^-bits
  std::optional<double> c12;
};

/// Status of a residual against a threshold: inconclusive when the numerical
/// uncertainty exceeds the threshold, otherwise pass or fail.
CheckStatus classify(double residual, double threshold, double uncertainty);

/// Runs "props", "inequalities", "oracle" or "all". Throws std::invalid_argument
/// on an unknown suite name.
std::vector<SuiteCheck> run_suite(std::string_view suite, const SuiteOptions& opts = {});

/// 0 all pass, 1 any failure, 3 inconclusive without failures. Info rows are neutral.
int suite_exit_code(const std::vector<SuiteCheck>& checks);

std::string suite_report_json(const std::vector<SuiteCheck>& checks);

}  // namespace sdimlab
