#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdimlab/contents.hpp"
#include "sdimlab/fractal_string.hpp"
#include "sdimlab/log_scalar.hpp"
#include "sdimlab/products.hpp"
#include "sdimlab/report_io.hpp"
#include "sdimlab/solvers.hpp"
#include "sdimlab/suites.hpp"

using namespace sdimlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolated = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitSaturation = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::optional<double> s, m, u, c, t, c12, target;
  int d = 1;
  int depth = 20;
  std::optional<int> k_min, k_max;
  double tol = 1e-6;
  std::string schedule = "critical";
  std::string kind = "surface";
  std::string format;
  std::string out;
  std::string string_file;
  std::string csv_out;
  std::string suite = "all";
  int precision_bits = 53;
};

int precision_bits_from_env() {
  const char* v = std::getenv("SDIMLAB_PRECISION_BITS");
  if (!v || !*v) return 53;
  char* end = nullptr;
  const long bits = std::strtol(v, &end, 10);
  if (*end != '\0' || bits < 8 || bits > 53) {
    throw UsageError("SDIMLAB_PRECISION_BITS must be an integer in [8, 53]");
  }
  return static_cast<int>(bits);
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << text;
}

FractalString input_string(const RunConfig& cfg) {
  if (!cfg.string_file.empty()) return read_string_file(cfg.string_file);
  if (!cfg.s || !cfg.m) throw UsageError("need --string FILE or both --s and --m");
  return winter_string(*cfg.s, *cfg.m, cfg.depth);
}

int cmd_string_gen(const RunConfig& cfg) {
  if (!cfg.s || !cfg.m) throw UsageError("string-gen needs --s and --m");
  const FractalString str = winter_string(*cfg.s, *cfg.m, cfg.depth);
  emit(to_json(str), cfg.out);
  if (!cfg.csv_out.empty()) emit(realization_csv(realize(str, str.depth())), cfg.csv_out);
  return kExitOk;
}

std::string profile_json(const ContentProfile& prof) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : prof.rows) {
    const LogScalar v = row.value.center();
    nlohmann::ordered_json e;
    if (prof.ambient_dim > 1) e["d"] = prof.ambient_dim;
    e["k"] = row.k;
    e["label"] = std::string(label_name(row.label));
    e["r_log2"] = row.radius.log2_mag();
    e["value"] = v.to_double();
    e["target"] = row.target ? nlohmann::ordered_json(*row.target) : nlohmann::ordered_json();
    e["rel_residual"] =
        row.rel_residual ? nlohmann::ordered_json(*row.rel_residual) : nlohmann::ordered_json();
    e["value_log2"] = v.is_zero() ? nlohmann::ordered_json() : nlohmann::ordered_json(v.log2_mag());
    rows.push_back(e);
  }
  nlohmann::ordered_json j;
  j["t"] = prof.t;
  j["kind"] = std::string(kind_name(prof.kind));
  j["ambient_dim"] = prof.ambient_dim;
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

int cmd_profile(const RunConfig& cfg) {
  if (!cfg.t) throw UsageError("profile needs --t");
  if (cfg.kind != "surface" && cfg.kind != "volume") throw UsageError("--kind is surface or volume");
  const FractalString str = input_string(cfg);
  const ContentKind kind = cfg.kind == "volume" ? ContentKind::kVolume : ContentKind::kSurface;
  const int k_min = cfg.k_min.value_or(1);
  const int k_max = cfg.k_max.value_or(str.depth());
  ScaleSchedule sched;
  EvalMode mode = str.is_truncation() ? EvalMode::kStrict : EvalMode::kFinite;
  if (cfg.schedule == "critical") {
    const double base_t = *cfg.t - (cfg.d - 1);
    sched = critical_schedule(str, base_t, k_min, k_max);
  } else {
    sched = dyadic_schedule(k_min, k_max);
    if (str.is_truncation()) mode = EvalMode::kAsymptotic;
  }
  ContentProfile prof;
  if (cfg.d == 1) {
    std::optional<double> target = cfg.target;
    if (!target && str.params() && kind == ContentKind::kSurface) {
      const auto& p = *str.params();
      const ContentTargets tgt = closed_form_targets(p.s, p.m);
      if (std::fabs(*cfg.t - p.s) < 1e-12) target = tgt.lower_s_content;
      if (std::fabs(*cfg.t - tgt.sq) < 1e-12) target = tgt.upper_s_content;
    }
    prof = build_profile(str, *cfg.t, kind, sched, target, mode);
  } else {
    prof = product_profile(ProductSpec::from_string(str, cfg.d, mode), *cfg.t, kind, sched);
    if (cfg.target) {
      for (auto& row : prof.rows) {
        row.target = cfg.target;
        const double v = row.value.center().to_double();
        row.rel_residual = std::fabs(v - *cfg.target) / *cfg.target;
      }
    }
  }
  emit(cfg.format == "json" ? profile_json(prof) : profile_csv(prof), cfg.out);
  return kExitOk;
}

int cmd_dims(const RunConfig& cfg) {
  const FractalString str = input_string(cfg);
  const DimensionReport rep = cfg.d == 1 ? dimension_report(str, cfg.tol)
                                         : product_dimension_report(str, cfg.d, cfg.tol);
  emit(dimension_report_json(rep), cfg.out);
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
  return rep.inconclusive || !rep.converged ? kExitInconclusive : kExitOk;
}

int cmd_solve(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  if (cfg.c) {
    const auto [s, m] = params_for_ratio(*cfg.c, cfg.d);
    j = {{"map", "ratio"}, {"c", *cfg.c}, {"d", cfg.d}, {"s", s}, {"m", m}};
  } else if (cfg.s && cfg.u) {
    const double m = params_for_sdims(*cfg.s, *cfg.u);
    j = {{"map", "sdims"}, {"s", *cfg.s}, {"u", *cfg.u}, {"m", m}, {"q", winter_q(*cfg.s, m)}};
  } else if (cfg.m && cfg.u) {
    const double s = params_for_mdims(*cfg.m, *cfg.u);
    j = {{"map", "mdims"}, {"m", *cfg.m}, {"u", *cfg.u}, {"s", s}};
  } else {
    throw UsageError("solve needs --c [--d], --s with --u, or --m with --u");
  }
  emit(j.dump(2) + "\n", cfg.out);
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  SuiteOptions opts;
  opts.tol = cfg.tol;
  opts.precision_bits = cfg.precision_bits;
  opts.c12 = cfg.c12;
  const auto checks = run_suite(cfg.suite, opts);
  for (const auto& c : checks) {
    std::cout << status_name(c.status) << "  " << c.suite << "/" << c.name;
    if (!c.detail.empty()) std::cout << "  " << c.detail;
    std::cout << "\n";
  }
  if (!cfg.out.empty()) emit(suite_report_json(checks), cfg.out);
  const int code = suite_exit_code(checks);
  return code == 1 ? kExitViolated : code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractal string contents and dimensions"};
  app.require_subcommand(1);
  RunConfig cfg;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "output path (default stdout)");
  };
  const auto add_params = [&](CLI::App* sub) {
    sub->add_option("--s", cfg.s, "lower S-dimension parameter");
    sub->add_option("--m", cfg.m, "lower Minkowski dimension parameter");
    sub->add_option("--depth", cfg.depth, "truncation depth")->check(CLI::PositiveNumber);
    sub->add_option("--string", cfg.string_file, "string file (JSON)");
  };

  auto* gen = app.add_subcommand("string-gen", "generate a string file");
  add_params(gen);
  add_common(gen);
  gen->add_option("--csv", cfg.csv_out, "also write the realization endpoints as CSV");

  auto* prof = app.add_subcommand("profile", "normalized contents along a schedule");
  add_params(prof);
  add_common(prof);
  prof->add_option("--t", cfg.t, "exponent")->required();
  prof->add_option("--d", cfg.d, "ambient dimension")->check(CLI::Range(1, 16));
  prof->add_option("--k-min", cfg.k_min, "first level");
  prof->add_option("--k-max", cfg.k_max, "last level");
  prof->add_option("--schedule", cfg.schedule)->check(CLI::IsMember({"critical", "dyadic"}));
  prof->add_option("--kind", cfg.kind)->check(CLI::IsMember({"surface", "volume"}));
  prof->add_option("--target", cfg.target, "reference value for the residual column");
  prof->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json"}));

  auto* dims = app.add_subcommand("dims", "estimate the four dimensions");
  add_params(dims);
  add_common(dims);
  dims->add_option("--d", cfg.d, "ambient dimension")->check(CLI::Range(1, 16));
  dims->add_option("--tol", cfg.tol, "slope convergence tolerance")->check(CLI::PositiveNumber);
  dims->add_option("--format", cfg.format)->check(CLI::IsMember({"json"}));

  auto* solve = app.add_subcommand("solve", "parameters for prescribed dimensions");
  add_common(solve);
  solve->add_option("--c", cfg.c, "ratio ldim_S / ldim_M");
  solve->add_option("--d", cfg.d, "ambient dimension")->check(CLI::Range(1, 16));
  solve->add_option("--s", cfg.s, "lower S-dimension");
  solve->add_option("--m", cfg.m, "lower Minkowski dimension");
  solve->add_option("--u", cfg.u, "upper dimension");

  auto* verify = app.add_subcommand("verify", "run verification suites");
  add_common(verify);
  verify->add_option("--suite", cfg.suite)
      ->check(CLI::IsMember({"props", "inequalities", "oracle", "all"}));
  verify->add_option("--tol", cfg.tol, "residual tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--c12", cfg.c12, "constant of the lower content inequality");
  verify->add_option("--format", cfg.format)->check(CLI::IsMember({"json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    cfg.precision_bits = precision_bits_from_env();
    if (cfg.d < 1) throw UsageError("--d must be >= 1");
    if (*gen) return cmd_string_gen(cfg);
    if (*prof) return cmd_profile(cfg);
    if (*dims) return cmd_dims(cfg);
    if (*solve) return cmd_solve(cfg);
    if (*verify) return cmd_verify(cfg);
  } catch (const SaturationError& e) {
    std::cerr << "saturation: " << e.what() << "\n";
    return kExitSaturation;
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::length_error& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolated;
  }
  return kExitUsage;
}
