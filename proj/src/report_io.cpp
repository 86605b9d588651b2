#include "sdimlab/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace sdimlab {

using nlohmann::ordered_json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string profile_csv(const ContentProfile& profile) {
  const bool product = profile.ambient_dim > 1;
  std::ostringstream out;
  if (product) out << "d,";
  out << "k,label,r_log2,value,target,rel_residual,value_log2\n";
  for (const auto& row : profile.rows) {
    const LogScalar v = row.value.center();
    if (product) out << profile.ambient_dim << ',';
    out << row.k << ',' << label_name(row.label) << ',' << format_double(row.radius.log2_mag())
        << ',' << format_double(v.to_double()) << ','
        << (row.target ? format_double(*row.target) : "") << ','
        << (row.rel_residual ? format_double(*row.rel_residual) : "") << ','
        << format_double(v.is_zero() ? -INFINITY : v.log2_mag()) << '\n';
  }
  return out.str();
}

namespace {

ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string dimension_report_json(const DimensionReport& rep) {
  ordered_json j;
  j["ambient_dim"] = rep.ambient_dim;
  j["depth"] = rep.depth;
  j["ldim_S"] = number(rep.ldim_s);
  j["udim_S"] = number(rep.udim_s);
  j["ldim_M"] = number(rep.ldim_m);
  j["udim_M"] = number(rep.udim_m);
  if (rep.params) {
    const double shift = rep.ambient_dim - 1;
    j["targets"] = {{"s", rep.params->s + shift},
                    {"m", rep.params->m + shift},
                    {"sq", rep.params->upper_dim() + shift}};
    j["residuals"] = {{"ldim_S", number(rep.ldim_s - rep.target_ldim_s())},
                      {"ldim_M", number(rep.ldim_m - rep.target_ldim_m())},
                      {"udim_S", number(rep.udim_s - rep.target_udim())},
                      {"udim_M", number(rep.udim_m - rep.target_udim())}};
  } else {
    j["targets"] = nullptr;
    j["residuals"] = nullptr;
  }
  j["onset_k"] = rep.onset_k ? ordered_json(*rep.onset_k) : ordered_json(nullptr);
  if (rep.bracket_slopes) {
    static constexpr const char* kNames[4] = {"ldim_S", "udim_S", "ldim_M", "udim_M"};
    ordered_json b;
    for (int i = 0; i < 4; ++i) {
      b[kNames[i]] = {number((*rep.bracket_slopes)[i].first),
                      number((*rep.bracket_slopes)[i].second)};
    }
    j["bracket_slopes"] = b;
  }
  j["converged"] = rep.converged;
  j["inconclusive"] = rep.inconclusive;
  j["warnings"] = rep.warnings;
  return j.dump(2) + "\n";
}

std::string verdicts_json(const std::vector<InequalityCheck>& checks) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : checks) {
    ordered_json e;
    e["name"] = c.name;
    e["lhs"] = {number(c.lhs.lo), number(c.lhs.hi)};
    e["mid"] = {number(c.mid.lo), number(c.mid.hi)};
    e["rhs"] = {number(c.rhs.lo), number(c.rhs.hi)};
    e["verdict"] = std::string(verdict_name(c.verdict));
    e["certified"] = c.certified;
    arr.push_back(e);
  }
  return arr.dump(2) + "\n";
}

}  // namespace sdimlab
