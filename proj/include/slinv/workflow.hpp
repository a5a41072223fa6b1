#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "slinv/io.hpp"
#include "slinv/model_select.hpp"

namespace slinv {

/// Sample points named by the config: explicit, i/(n+1), or condition-optimized
/// for the config's basis and mode.
std::vector<double> resolve_points(const ProblemConfig& cfg);

std::vector<EigenPair> forward_spectrum(const PotentialFn& q, int modes);

SampleSet synthesize_samples(const ProblemConfig& cfg);

/// Writes `<stem>.json` (report), `<stem>.csv` (reconstruction grid) and
/// `<stem>.svg` (two-panel figure) into `dir`. The grid and figure use
/// `figure_stem` instead when it is given.
void write_inversion_outputs(const std::filesystem::path& dir, const std::string& stem,
                             const InversionReport& report, const SampleSet& samples,
                             const TargetPotential* truth, const std::string& figure_stem = {});

/// Ranking (and, when m is set, the merged basis) as JSON. `labels` name the
/// reports in the output, one per report.
nlohmann::json selection_json(std::span<const InversionReport> reports,
                              const std::vector<std::string>& labels, std::optional<int> m);

/// sup over a 1001-point grid of |p − q|.
double sup_error(const Potential& p, const PotentialFn& q);

/// L² distance between two expansions over the same basis.
double l2_distance(const Potential& a, const Potential& b);

/// Reproduces one named example end to end; writes figures, reports and a
/// summary.json under `out_dir` and returns the summary.
nlohmann::json run_demo(const std::string& name, const std::filesystem::path& out_dir,
                        std::ostream& log);
const std::vector<std::string>& demo_names();

}  // namespace slinv
