#pragma once

#include <string>
#include <vector>

#include "sdimlab/contents.hpp"
#include "sdimlab/solvers.hpp"

namespace sdimlab {

/// Columns k,label,r_log2,value,target,rel_residual,value_log2 with 17
/// significant digits; product profiles add a leading d column.
std::string profile_csv(const ContentProfile& profile);

/// {"ldim_S","udim_S","ldim_M","udim_M","targets":{"s","m","sq"},"residuals":{...},"onset_k",...}
std::string dimension_report_json(const DimensionReport& report);

/// [{"name","lhs","mid","rhs","verdict"}, ...] with [lo, hi] brackets.
std::string verdicts_json(const std::vector<InequalityCheck>& checks);

/// %.17g, with "nan"/"inf" spelled out.
std::string format_double(double v);

}  // namespace sdimlab
