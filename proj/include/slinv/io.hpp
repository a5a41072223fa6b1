#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "slinv/basis.hpp"
#include "slinv/design.hpp"
#include "slinv/error.hpp"
#include "slinv/inversion.hpp"
#include "slinv/spectral.hpp"

namespace slinv {

/// Malformed configuration or data file; the CLI maps it to exit code 2.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Shortest round-trippable text for a double (17 significant digits).
std::string format_double(double v);

// Basis descriptors:
//   {"family": "cosine-even" | "trig-full" | "legendre" | "legendre-even", "n": int}
//   {"family": "composite", "functions": [{"kind": "constant"},
//                                         {"kind": "cos" | "sin", "m": int},
//                                         {"kind": "legendre", "degree": int}]}
nlohmann::json basis_to_json(const Basis& basis);
std::shared_ptr<const Basis> basis_from_json(const nlohmann::json& j);
nlohmann::json function_to_json(const BasisFunction& f);
BasisFunction function_from_json(const nlohmann::json& j);

/// A target potential with a description of where it came from.
struct TargetPotential {
  std::string description;
  PotentialFn fn;
};

/// Accepts a built-in name, {"builtin": name}, {"expression": text},
/// {"basis": {...}, "coefficients": [...]} or {"coefficient_file": path}.
TargetPotential potential_from_json(const nlohmann::json& j,
                                    const std::filesystem::path& base_dir = {});

struct PointSource {
  enum class Kind { Explicit, Equal, Optimized };
  Kind kind = Kind::Equal;
  std::vector<double> points;
};

struct ProblemConfig {
  std::optional<TargetPotential> potential;
  std::shared_ptr<const Basis> basis;
  int mode = 1;
  std::optional<PointSource> points;
  std::optional<NoiseSpec> noise;
  InversionOptions inversion;
  DesignOptions design;
  int forward_modes = 10;
  std::optional<std::filesystem::path> samples_file;
  std::optional<std::filesystem::path> out_dir;
};

/// Parses a problem configuration. Relative paths resolve against base_dir.
/// Throws ConfigError on malformed input.
ProblemConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ProblemConfig load_config(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

/// Sample CSV: header `x,lambda,y,mode`, one row per sample.
void write_samples_csv(std::ostream& os, const SampleSet& samples);
void write_samples_csv(const std::filesystem::path& path, const SampleSet& samples);
SampleSet read_samples_csv(std::istream& is);
SampleSet read_samples_csv(const std::filesystem::path& path);

/// Eigenvalue table: `k,lambda,asymptotic_residual,boundary_residual,zero_count`.
void write_eigenvalues_csv(const std::filesystem::path& path, const std::vector<EigenPair>& pairs);

nlohmann::json report_to_json(const InversionReport& report);
/// Rebuilds the recovered potential and diagnostics from report JSON.
InversionReport report_from_json(const nlohmann::json& j);

/// Reconstruction on a uniform 512-point grid: `x,q_rec[,q_true]`.
void write_reconstruction_csv(const std::filesystem::path& path, const Potential& recovered,
                              const PotentialFn* truth = nullptr);

}  // namespace slinv
