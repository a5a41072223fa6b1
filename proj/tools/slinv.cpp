// Command-line front end: forward spectra, sample synthesis, inversion,
// sample-point design, basis selection and end-to-end example demos.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slinv/error.hpp"
#include "slinv/io.hpp"
#include "slinv/workflow.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> cutoff;
  std::optional<int> max_iters;
  std::optional<double> tol;
  std::optional<int> budget;
};

slinv::ProblemConfig load(const Common& c) {
  if (c.config.empty()) throw slinv::ConfigError("--config is required");
  slinv::ProblemConfig cfg = slinv::load_config(c.config);
  if (c.seed) {
    cfg.design.seed = *c.seed;
    if (cfg.noise) cfg.noise->seed = *c.seed;
  }
  if (c.cutoff) cfg.inversion.svd_cutoff = *c.cutoff;
  if (c.max_iters) cfg.inversion.max_iterations = *c.max_iters;
  if (c.tol) cfg.inversion.tolerance = *c.tol;
  if (c.budget) cfg.design.budget = *c.budget;
  try {
    cfg.inversion.validate();
  } catch (const slinv::InvalidArgument& e) {
    throw slinv::ConfigError(e.what());
  }
  if (cfg.design.budget < 1) throw slinv::ConfigError("--budget must be >= 1");
  return cfg;
}

// --out, then $SLINV_OUT_DIR, then the config's "out", then the working directory.
fs::path out_dir(const Common& c, const std::optional<fs::path>& from_config) {
  if (c.out) return *c.out;
  if (const char* env = std::getenv("SLINV_OUT_DIR"); env && *env) return env;
  if (from_config) return *from_config;
  return ".";
}

int cmd_forward(const Common& c) {
  const auto cfg = load(c);
  if (!cfg.potential) throw slinv::ConfigError("forward needs a \"potential\"");
  const auto pairs = slinv::forward_spectrum(cfg.potential->fn, cfg.forward_modes);
  const fs::path path = out_dir(c, cfg.out_dir) / "eigenvalues.csv";
  slinv::write_eigenvalues_csv(path, pairs);
  std::cout << path.string() << '\n';
  return 0;
}

int cmd_sample(const Common& c) {
  const auto cfg = load(c);
  const auto samples = slinv::synthesize_samples(cfg);
  const fs::path path = out_dir(c, cfg.out_dir) / "samples.csv";
  slinv::write_samples_csv(path, samples);
  std::cout << path.string() << '\n';
  return 0;
}

int cmd_invert(const Common& c, const std::string& samples_flag) {
  const auto cfg = load(c);
  if (!cfg.basis) throw slinv::ConfigError("invert needs a \"basis\"");
  fs::path samples_path;
  if (!samples_flag.empty())
    samples_path = samples_flag;
  else if (cfg.samples_file)
    samples_path = *cfg.samples_file;
  else
    throw slinv::ConfigError("invert needs --samples or a \"samples\" entry in the config");
  const auto samples = slinv::read_samples_csv(samples_path);
  if (samples.size() != cfg.basis->size())
    throw slinv::ConfigError("sample count " + std::to_string(samples.size()) +
                             " does not match basis size " + std::to_string(cfg.basis->size()));
  const auto report = slinv::invert(samples, cfg.basis, cfg.inversion);
  const fs::path dir = out_dir(c, cfg.out_dir);
  slinv::write_inversion_outputs(dir, "report", report, samples,
                                 cfg.potential ? &*cfg.potential : nullptr, "reconstruction");
  std::cout << (dir / "report.json").string() << (report.converged ? "" : " (not converged)") << '\n';
  return 0;
}

int cmd_optimize(const Common& c) {
  const auto cfg = load(c);
  if (!cfg.basis) throw slinv::ConfigError("optimize-points needs a \"basis\"");
  const auto best = slinv::optimize_points(cfg.mode, *cfg.basis, cfg.design);
  const auto baseline = slinv::equally_spaced(cfg.basis->size());
  const double base_c = slinv::condition_number(baseline, cfg.mode, *cfg.basis);
  json j;
  j["points"] = best.points;
  j["mode"] = best.mode;
  j["condition_number"] = best.condition_number;
  j["baseline"] = {{"points", baseline}, {"condition_number", base_c}};
  j["basis"] = slinv::basis_to_json(*cfg.basis);
  j["budget"] = cfg.design.budget;
  j["seed"] = cfg.design.seed;
  const fs::path path = out_dir(c, cfg.out_dir) / "points.json";
  slinv::write_json_file(path, j);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_select(const Common& c, const std::vector<std::string>& files, std::optional<int> m) {
  if (files.empty()) throw slinv::ConfigError("select-basis needs at least one report");
  std::vector<slinv::InversionReport> reports;
  for (const auto& f : files) reports.push_back(slinv::report_from_json(slinv::read_json_file(f)));
  const json j = slinv::selection_json(reports, files, m);
  const fs::path path = out_dir(c, std::nullopt) / "selection.json";
  slinv::write_json_file(path, j);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_demo(const Common& c, const std::string& name) {
  const fs::path dir = out_dir(c, std::nullopt);
  slinv::run_demo(name, dir, std::cout);
  std::cout << (dir / ("demo-" + name) / "summary.json").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recover a Schrödinger potential from samples of one eigenfunction"};
  app.require_subcommand(1);
  Common common;

  auto add_common = [&](CLI::App* sub, bool with_config) {
    if (with_config) sub->add_option("--config", common.config, "Problem configuration (JSON)");
    sub->add_option("--out", common.out, "Output directory");
    sub->add_option("--seed", common.seed, "Seed for noise and point-design restarts");
    sub->add_option("--cutoff", common.cutoff, "Singular-value cutoff of the pseudoinverse");
    sub->add_option("--max-iters", common.max_iters, "Quasi-Newton iteration cap");
    sub->add_option("--tol", common.tol, "Convergence tolerance on max|delta|");
    sub->add_option("--budget", common.budget, "Objective evaluations for point design");
  };

  auto* forward = app.add_subcommand("forward", "Eigenvalues and asymptotic residuals");
  add_common(forward, true);
  auto* sample = app.add_subcommand("sample", "Synthesize eigenfunction samples");
  add_common(sample, true);
  auto* inv = app.add_subcommand("invert", "Recover the potential from a sample CSV");
  add_common(inv, true);
  std::string samples_flag;
  inv->add_option("--samples", samples_flag, "Sample CSV (x,lambda,y,mode)");
  auto* opt = app.add_subcommand("optimize-points", "Minimize the sampling Jacobian condition number");
  add_common(opt, true);
  auto* sel = app.add_subcommand("select-basis", "Rank reconstructions and merge top functions");
  add_common(sel, false);
  std::vector<std::string> report_files;
  std::optional<int> merge_m;
  sel->add_option("reports", report_files, "Report JSON files")->required();
  sel->add_option("--m", merge_m, "Size of the merged composite basis");
  auto* demo = app.add_subcommand("demo", "Reproduce one example end to end");
  add_common(demo, false);
  std::string demo_name;
  demo->add_option("example", demo_name, "Example id")
      ->required()
      ->check(CLI::IsMember(slinv::demo_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*forward) return cmd_forward(common);
    if (*sample) return cmd_sample(common);
    if (*inv) return cmd_invert(common, samples_flag);
    if (*opt) return cmd_optimize(common);
    if (*sel) return cmd_select(common, report_files, merge_m);
    if (*demo) return cmd_demo(common, demo_name);
  } catch (const slinv::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const slinv::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
