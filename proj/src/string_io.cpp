#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sdimlab/fractal_string.hpp"

namespace sdimlab {

using nlohmann::json;

std::string to_json(const FractalString& str) {
  json j;
  if (const auto& p = str.params()) {
    j["params"] = {{"s", p->s}, {"m", p->m}, {"q", p->q}};
  } else {
    j["params"] = nullptr;
  }
  j["depth"] = str.depth();
  json scales = json::array();
  json mults = json::array();
  for (int k = 1; k <= str.depth(); ++k) {
    scales.push_back(str.scale(k).log2_mag());
    const Multiplicity& n = str.multiplicities()[k - 1];
    if (n.is_exact()) {
      mults.push_back({{"exact", n.exact_value()}});
    } else {
      mults.push_back({{"log2", n.floor_log2()}});
    }
  }
  j["scales_log2"] = std::move(scales);
  j["multiplicities"] = std::move(mults);
  return j.dump(2) + "\n";
}

FractalString string_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("string file: ") + e.what());
  }
  try {
    const auto& scales = j.at("scales_log2");
    const auto& mults = j.at("multiplicities");
    const int depth = j.at("depth").get<int>();
    if (!scales.is_array() || !mults.is_array() || scales.size() != mults.size() ||
        static_cast<int>(scales.size()) != depth || depth < 1) {
      throw std::invalid_argument("string file: depth, scales_log2 and multiplicities disagree");
    }
    std::vector<LogScalar> rs;
    std::vector<Multiplicity> ns;
    for (std::size_t i = 0; i < scales.size(); ++i) {
      rs.push_back(LogScalar::from_log2(scales[i].get<double>()));
      const auto& n = mults[i];
      if (n.contains("exact")) {
        ns.push_back(Multiplicity::exact(n.at("exact").get<std::uint64_t>()));
      } else if (n.contains("log2")) {
        ns.push_back(Multiplicity::floor_pow2(n.at("log2").get<double>()));
      } else {
        throw std::invalid_argument("string file: multiplicity needs \"exact\" or \"log2\"");
      }
    }
    std::optional<WinterParams> params;
    if (j.contains("params") && !j["params"].is_null()) {
      const auto& p = j["params"];
      params = WinterParams{p.at("s").get<double>(), p.at("m").get<double>(),
                            p.at("q").get<double>()};
      const double q = winter_q(params->s, params->m);
      if (std::fabs(q - params->q) > 1e-12 * q) {
        throw std::invalid_argument("string file: q inconsistent with s and m");
      }
    }
    return FractalString(std::move(rs), std::move(ns), params);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("string file: ") + e.what());
  }
}

void write_string_file(const FractalString& str, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << to_json(str);
}

FractalString read_string_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return string_from_json(buf.str());
}

std::string realization_csv(const RealizedSet& set) {
  std::string out;
  char line[64];
  for (double e : set.endpoints) {
    std::snprintf(line, sizeof line, "%.17g\n", e);
    out += line;
  }
  return out;
}

}  // namespace sdimlab
