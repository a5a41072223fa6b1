#include "slinv/workflow.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "slinv/expression.hpp"
#include "slinv/plot.hpp"

namespace slinv {

using nlohmann::json;
namespace fs = std::filesystem;

std::vector<double> resolve_points(const ProblemConfig& cfg) {
  if (!cfg.points) throw ConfigError("config has no \"points\"");
  if (cfg.points->kind == PointSource::Kind::Explicit) {
    if (cfg.basis && static_cast<int>(cfg.points->points.size()) != cfg.basis->size())
      throw ConfigError("config: need one sample point per basis function");
    return cfg.points->points;
  }
  if (!cfg.basis) throw ConfigError("config: \"equal\" and \"optimized\" points need a \"basis\"");
  const int n = cfg.basis->size();
  switch (cfg.points->kind) {
    case PointSource::Kind::Explicit: break;
    case PointSource::Kind::Equal: return equally_spaced(n);
    case PointSource::Kind::Optimized: return optimize_points(cfg.mode, *cfg.basis, cfg.design).points;
  }
  return {};
}

std::vector<EigenPair> forward_spectrum(const PotentialFn& q, int modes) {
  std::vector<EigenPair> pairs;
  for (int k = 1; k <= modes; ++k) pairs.push_back(eigenvalue(q, k));
  return pairs;
}

SampleSet synthesize_samples(const ProblemConfig& cfg) {
  if (!cfg.potential) throw ConfigError("config has no \"potential\"");
  const auto points = resolve_points(cfg);
  return sample_eigenfunction(cfg.potential->fn, cfg.mode, points, cfg.noise);
}

void write_inversion_outputs(const fs::path& dir, const std::string& stem,
                             const InversionReport& report, const SampleSet& samples,
                             const TargetPotential* truth, const std::string& figure_stem) {
  const std::string fig_stem = figure_stem.empty() ? stem : figure_stem;
  json j = report_to_json(report);
  j["sample_points"] = samples.points();
  j["mode"] = samples.mode();
  if (truth) j["target"] = truth->description;
  write_json_file(dir / (stem + ".json"), j);
  write_reconstruction_csv(dir / (fig_stem + ".csv"), report.recovered, truth ? &truth->fn : nullptr);
  FigureData fig;
  fig.title = truth ? truth->description : stem;
  fig.recovered = &report.recovered;
  fig.truth = truth ? &truth->fn : nullptr;
  fig.samples = &samples;
  if (truth) fig.eigenfunction_potential = truth->fn;
  write_inversion_svg(dir / (fig_stem + ".svg"), fig);
}

json selection_json(std::span<const InversionReport> reports, const std::vector<std::string>& labels,
                    std::optional<int> m) {
  json out;
  out["ranking"] = json::array();
  for (const auto& r : rank_reconstructions(reports)) {
    out["ranking"].push_back({{"index", r.index},
                              {"report", labels.at(r.index)},
                              {"basis", basis_to_json(reports[r.index].recovered.basis())},
                              {"l2_norm", r.l2_norm},
                              {"residual_norm", r.residual_norm}});
  }
  out["contributions"] = json::array();
  for (const auto& c : contributions(reports))
    out["contributions"].push_back(
        {{"function", function_to_json(c.function)}, {"label", c.function.label()}, {"weight", c.weight}});
  if (m) {
    out["m"] = *m;
    out["merged_basis"] = basis_to_json(merge_top_functions(reports, *m));
  }
  return out;
}

double sup_error(const Potential& p, const PotentialFn& q) {
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    worst = std::max(worst, std::abs(p(x) - q(x)));
  }
  return worst;
}

double l2_distance(const Potential& a, const Potential& b) {
  return l2_norm(Potential(a.basis_ptr(), a.coefficients() - b.coefficients()));
}

namespace {

struct Case {
  std::string stem;
  std::shared_ptr<const Basis> basis;
  int mode;
  bool optimized;
};

json run_case(const Case& c, const TargetPotential& target, const fs::path& dir, std::ostream& log) {
  DesignOptions design;
  const auto points = c.optimized ? optimize_points(c.mode, *c.basis, design).points
                                  : equally_spaced(c.basis->size());
  const SampleSet samples = sample_eigenfunction(target.fn, c.mode, points);
  const InversionReport report = invert(samples, c.basis);
  write_inversion_outputs(dir, c.stem, report, samples, &target);
  const Potential proj = project(target.fn, c.basis);
  json j;
  j["case"] = c.stem;
  j["basis"] = basis_to_json(*c.basis);
  j["mode"] = c.mode;
  j["points"] = points;
  j["coefficients"] = std::vector<double>(report.recovered.coefficients().data(),
                                          report.recovered.coefficients().data() + c.basis->size());
  j["projection"] = std::vector<double>(proj.coefficients().data(), proj.coefficients().data() + c.basis->size());
  j["l2_error_vs_projection"] = l2_distance(report.recovered, proj);
  j["sup_error"] = sup_error(report.recovered, target.fn);
  j["converged"] = report.converged;
  j["iterations"] = report.iterations;
  log << c.stem << ": iterations " << report.iterations << (report.converged ? "" : " (not converged)")
      << ", L2 distance to projection " << j["l2_error_vs_projection"].get<double>() << ", sup error "
      << j["sup_error"].get<double>() << '\n';
  return j;
}

std::shared_ptr<const Basis> shared(Basis b) { return std::make_shared<const Basis>(std::move(b)); }

json run_pair(const TargetPotential& target, const fs::path& dir, bool merge, std::ostream& log) {
  const auto legendre = shared(Basis::legendre(4));
  const auto trig = shared(Basis::trig_full(4));
  const auto points = optimize_points(1, *legendre).points;
  const SampleSet samples = sample_eigenfunction(target.fn, 1, points);
  std::vector<InversionReport> reports{invert(samples, legendre), invert(samples, trig)};
  write_inversion_outputs(dir, "legendre", reports[0], samples, &target);
  write_inversion_outputs(dir, "trig", reports[1], samples, &target);
  json j = selection_json(reports, {"legendre", "trig"}, merge ? std::optional<int>(4) : std::nullopt);
  j["points"] = points;
  for (const auto& entry : j["ranking"])
    log << "rank: " << entry["report"].get<std::string>() << " (L2 norm " << entry["l2_norm"].get<double>()
        << ")\n";
  if (merge) {
    const auto merged = basis_from_json(j["merged_basis"]);
    const InversionReport again = invert(samples, merged);
    write_inversion_outputs(dir, "merged", again, samples, &target);
    j["merged_sup_error"] = sup_error(again.recovered, target.fn);
    log << "merged basis:";
    for (const auto& f : merged->functions()) log << ' ' << f.label();
    log << "\nmerged sup error " << j["merged_sup_error"].get<double>() << '\n';
  }
  return j;
}

}  // namespace

const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names = {"gaussian-bump", "triangle", "even-poly6", "trig-mix",
                                                 "poly65",        "sin4pi",   "final-mix"};
  return names;
}

json run_demo(const std::string& name, const fs::path& out_dir, std::ostream& log) {
  if (std::find(demo_names().begin(), demo_names().end(), name) == demo_names().end())
    throw ConfigError("unknown demo \"" + name + "\"");
  const TargetPotential target{name, builtin_potential(name)};
  const fs::path dir = out_dir / ("demo-" + name);
  json summary;
  summary["demo"] = name;
  std::vector<Case> cases;
  if (name == "gaussian-bump") {
    const auto b = shared(Basis::cosine_even(3));
    cases = {{"mode1-optimized", b, 1, true}, {"mode2-optimized", b, 2, true}, {"mode1-equal", b, 1, false}};
  } else if (name == "triangle") {
    const auto b = shared(Basis::cosine_even(3));
    cases = {{"mode1-optimized", b, 1, true}, {"mode1-equal", b, 1, false}};
  } else if (name == "even-poly6") {
    const auto b3 = shared(Basis::legendre_even(3));
    const auto b4 = shared(Basis::legendre_even(4));
    cases = {{"n3-optimized", b3, 1, true}, {"n4-optimized", b4, 1, true},
             {"n3-equal", b3, 1, false},   {"n4-equal", b4, 1, false}};
  } else if (name == "trig-mix") {
    cases = {{"legendre6-optimized", shared(Basis::legendre(6)), 1, true}};
  } else if (name == "poly65") {
    cases = {{"legendre7-optimized", shared(Basis::legendre(7)), 1, true}};
  } else {
    summary["selection"] = run_pair(target, dir, name == "final-mix", log);
  }
  summary["cases"] = json::array();
  for (const auto& c : cases) summary["cases"].push_back(run_case(c, target, dir, log));
  write_json_file(dir / "summary.json", summary);
  return summary;
}

}  // namespace slinv
