#include "slinv/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "slinv/expression.hpp"

namespace slinv {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

template <typename T>
T get_field(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) throw ConfigError(std::string(where) + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(where) + ": \"" + key + "\" has the wrong type");
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError(std::string(where) + ": unknown key \"" + key + "\"");
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return (path.is_relative() && !base.empty()) ? base / path : path;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json function_to_json(const BasisFunction& f) {
  switch (f.kind()) {
    case BasisFunction::Kind::Constant: return {{"kind", "constant"}};
    case BasisFunction::Kind::Cos: return {{"kind", "cos"}, {"m", f.index()}};
    case BasisFunction::Kind::Sin: return {{"kind", "sin"}, {"m", f.index()}};
    case BasisFunction::Kind::Legendre: return {{"kind", "legendre"}, {"degree", f.index()}};
  }
  return {};
}

BasisFunction function_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("basis function must be an object");
  const auto kind = get_field<std::string>(j, "kind", "basis function");
  try {
    if (kind == "constant") return BasisFunction::constant();
    if (kind == "cos") return BasisFunction::cos(get_field<int>(j, "m", "cos function"));
    if (kind == "sin") return BasisFunction::sin(get_field<int>(j, "m", "sin function"));
    if (kind == "legendre")
      return BasisFunction::legendre(get_field<int>(j, "degree", "legendre function"));
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown basis function kind \"" + kind + "\"");
}

json basis_to_json(const Basis& basis) {
  json j;
  j["family"] = family_name(basis.family());
  if (basis.family() == Basis::Family::Composite) {
    j["functions"] = json::array();
    for (const auto& f : basis.functions()) j["functions"].push_back(function_to_json(f));
  } else {
    j["n"] = basis.size();
  }
  return j;
}

std::shared_ptr<const Basis> basis_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("basis must be an object");
  const auto family = get_field<std::string>(j, "family", "basis");
  try {
    if (family == "composite") {
      reject_unknown(j, {"family", "functions"}, "basis");
      if (!j.contains("functions") || !j["functions"].is_array())
        throw ConfigError("composite basis needs a \"functions\" array");
      std::vector<BasisFunction> fs;
      for (const auto& f : j["functions"]) fs.push_back(function_from_json(f));
      return std::make_shared<const Basis>(Basis::composite(std::move(fs)));
    }
    reject_unknown(j, {"family", "n"}, "basis");
    const int n = get_field<int>(j, "n", "basis");
    if (n < 1) throw ConfigError("basis size n must be >= 1");
    if (family == "cosine-even") return std::make_shared<const Basis>(Basis::cosine_even(n));
    if (family == "trig-full") return std::make_shared<const Basis>(Basis::trig_full(n));
    if (family == "legendre") return std::make_shared<const Basis>(Basis::legendre(n));
    if (family == "legendre-even") return std::make_shared<const Basis>(Basis::legendre_even(n));
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown basis family \"" + family + "\"");
}

TargetPotential potential_from_json(const json& j, const fs::path& base_dir) {
  try {
    if (j.is_string()) {
      const auto name = j.get<std::string>();
      return {name, builtin_potential(name)};
    }
    if (!j.is_object()) throw ConfigError("potential must be a name or an object");
    if (j.contains("builtin")) {
      const auto name = get_field<std::string>(j, "builtin", "potential");
      return {name, builtin_potential(name)};
    }
    if (j.contains("expression")) {
      const auto text = get_field<std::string>(j, "expression", "potential");
      return {text, Expression::parse(text).as_function()};
    }
    if (j.contains("coefficient_file")) {
      const fs::path path = resolve(base_dir, get_field<std::string>(j, "coefficient_file", "potential"));
      TargetPotential t = potential_from_json(read_json_file(path), path.parent_path());
      t.description = path.string();
      return t;
    }
    if (j.contains("coefficients")) {
      auto basis = basis_from_json(get_field<json>(j, "basis", "potential"));
      const auto values = get_field<std::vector<double>>(j, "coefficients", "potential");
      if (static_cast<int>(values.size()) != basis->size())
        throw ConfigError("potential: coefficient count does not match basis size");
      Potential p(basis, Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
      return {"coefficients", p.as_function()};
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("potential: expected builtin, expression, coefficients or coefficient_file");
}

ProblemConfig config_from_json(const json& j, const fs::path& base_dir) {
  reject_unknown(j,
                 {"potential", "basis", "mode", "points", "noise", "inversion", "design", "forward",
                  "samples", "out"},
                 "config");
  ProblemConfig cfg;
  if (j.contains("potential")) cfg.potential = potential_from_json(j["potential"], base_dir);
  if (j.contains("basis")) cfg.basis = basis_from_json(j["basis"]);
  if (j.contains("mode")) {
    cfg.mode = get_field<int>(j, "mode", "config");
    if (cfg.mode < 1) throw ConfigError("config: mode must be >= 1");
  }
  if (j.contains("points")) {
    const json& p = j["points"];
    PointSource src;
    if (p.is_string() && p == "equal") {
      src.kind = PointSource::Kind::Equal;
    } else if (p.is_string() && p == "optimized") {
      src.kind = PointSource::Kind::Optimized;
    } else if (p.is_array()) {
      src.kind = PointSource::Kind::Explicit;
      src.points = get_field<std::vector<double>>(j, "points", "config");
      for (std::size_t i = 0; i < src.points.size(); ++i) {
        if (!(src.points[i] > 0.0 && src.points[i] <= 1.0))
          throw ConfigError("config: sample points must lie in (0, 1]");
        if (i > 0 && !(src.points[i - 1] < src.points[i]))
          throw ConfigError("config: sample points must be strictly increasing");
      }
    } else {
      throw ConfigError("config: \"points\" must be an array, \"equal\" or \"optimized\"");
    }
    cfg.points = src;
  }
  if (j.contains("noise")) {
    const json& n = j["noise"];
    reject_unknown(n, {"sigma", "seed"}, "noise");
    NoiseSpec spec;
    spec.sigma = get_field<double>(n, "sigma", "noise");
    if (n.contains("seed")) spec.seed = get_field<std::uint64_t>(n, "seed", "noise");
    if (!(spec.sigma >= 0.0)) throw ConfigError("noise: sigma must be >= 0");
    cfg.noise = spec;
  }
  if (j.contains("inversion")) {
    const json& o = j["inversion"];
    reject_unknown(o, {"max_iters", "tol", "cutoff", "ivp_tol"}, "inversion");
    if (o.contains("max_iters")) cfg.inversion.max_iterations = get_field<int>(o, "max_iters", "inversion");
    if (o.contains("tol")) cfg.inversion.tolerance = get_field<double>(o, "tol", "inversion");
    if (o.contains("cutoff")) cfg.inversion.svd_cutoff = get_field<double>(o, "cutoff", "inversion");
    if (o.contains("ivp_tol")) {
      const auto t = get_field<std::vector<double>>(o, "ivp_tol", "inversion");
      if (t.size() != 3) throw ConfigError("inversion: ivp_tol needs three values");
      cfg.inversion.ivp = {t[0], t[1], t[2]};
    }
    try {
      cfg.inversion.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("design")) {
    const json& d = j["design"];
    reject_unknown(d, {"budget", "seed"}, "design");
    if (d.contains("budget")) cfg.design.budget = get_field<int>(d, "budget", "design");
    if (d.contains("seed")) cfg.design.seed = get_field<std::uint64_t>(d, "seed", "design");
    if (cfg.design.budget < 1) throw ConfigError("design: budget must be >= 1");
  }
  if (j.contains("forward")) {
    const json& f = j["forward"];
    reject_unknown(f, {"modes"}, "forward");
    cfg.forward_modes = get_field<int>(f, "modes", "forward");
    if (cfg.forward_modes < 1) throw ConfigError("forward: modes must be >= 1");
  }
  if (j.contains("samples")) cfg.samples_file = resolve(base_dir, get_field<std::string>(j, "samples", "config"));
  if (j.contains("out")) cfg.out_dir = resolve(base_dir, get_field<std::string>(j, "out", "config"));
  return cfg;
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

ProblemConfig load_config(const fs::path& path) {
  return config_from_json(read_json_file(path), path.parent_path());
}

void write_json_file(const fs::path& path, const json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_samples_csv(std::ostream& os, const SampleSet& samples) {
  os << "x,lambda,y,mode\n";
  for (const auto& r : samples.rows)
    os << format_double(r.x) << ',' << format_double(r.lambda) << ',' << format_double(r.y) << ','
       << r.mode << '\n';
}

void write_samples_csv(const fs::path& path, const SampleSet& samples) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  write_samples_csv(out, samples);
}

SampleSet read_samples_csv(std::istream& is) {
  std::string line;
  auto chomp = [](std::string& s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  };
  if (!std::getline(is, line)) throw ConfigError("sample CSV is empty");
  chomp(line);
  if (line != "x,lambda,y,mode") throw ConfigError("sample CSV header must be x,lambda,y,mode");
  SampleSet set;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    chomp(line);
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 4)
      throw ConfigError("sample CSV line " + std::to_string(lineno) + ": expected 4 fields");
    try {
      SampleRow r;
      r.x = std::stod(fields[0]);
      r.lambda = std::stod(fields[1]);
      r.y = std::stod(fields[2]);
      r.mode = std::stoi(fields[3]);
      set.rows.push_back(r);
    } catch (const std::exception&) {
      throw ConfigError("sample CSV line " + std::to_string(lineno) + ": bad number");
    }
  }
  try {
    set.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("sample CSV: ") + e.what());
  }
  return set;
}

SampleSet read_samples_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  return read_samples_csv(in);
}

void write_eigenvalues_csv(const fs::path& path, const std::vector<EigenPair>& pairs) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "k,lambda,asymptotic_residual,boundary_residual,zero_count\n";
  for (const auto& p : pairs)
    out << p.mode << ',' << format_double(p.lambda) << ',' << format_double(p.asymptotic_residual)
        << ',' << format_double(p.boundary_residual) << ',' << p.zero_count << '\n';
}

json report_to_json(const InversionReport& report) {
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  const auto& s = report.singular_values;
  const double cond = (s.size() && s(s.size() - 1) > 0.0) ? s(0) / s(s.size() - 1)
                                                          : std::numeric_limits<double>::infinity();
  json j;
  j["basis"] = basis_to_json(report.recovered.basis());
  j["coefficients"] = vec(report.recovered.coefficients());
  j["converged"] = report.converged;
  j["iterations"] = report.iterations;
  j["max_delta"] = report.max_delta;
  j["qbar_est"] = report.qbar_est;
  j["sample_residuals"] = vec(report.sample_residuals);
  j["residual_norm"] = report.residual_norm();
  j["singular_values"] = vec(report.singular_values);
  j["dropped_singular_values"] = report.dropped_singular_values;
  j["condition_number"] = finite_or_null(cond);
  j["l2_norm"] = l2_norm(report.recovered);
  return j;
}

InversionReport report_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("report must be a JSON object");
  auto basis = basis_from_json(get_field<json>(j, "basis", "report"));
  const auto d = get_field<std::vector<double>>(j, "coefficients", "report");
  if (static_cast<int>(d.size()) != basis->size())
    throw ConfigError("report: coefficient count does not match basis size");
  auto to_vec = [](const std::vector<double>& v) {
    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  };
  InversionReport r{Potential(basis, to_vec(d))};
  r.converged = get_field<bool>(j, "converged", "report");
  r.iterations = get_field<int>(j, "iterations", "report");
  r.max_delta = get_field<std::vector<double>>(j, "max_delta", "report");
  r.qbar_est = get_field<double>(j, "qbar_est", "report");
  r.sample_residuals = to_vec(get_field<std::vector<double>>(j, "sample_residuals", "report"));
  r.singular_values = to_vec(get_field<std::vector<double>>(j, "singular_values", "report"));
  r.dropped_singular_values = get_field<int>(j, "dropped_singular_values", "report");
  return r;
}

void write_reconstruction_csv(const fs::path& path, const Potential& recovered,
                              const PotentialFn* truth) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << (truth ? "x,q_rec,q_true\n" : "x,q_rec\n");
  constexpr int kGrid = 512;
  for (int i = 0; i < kGrid; ++i) {
    const double x = static_cast<double>(i) / (kGrid - 1);
    out << format_double(x) << ',' << format_double(recovered(x));
    if (truth) out << ',' << format_double((*truth)(x));
    out << '\n';
  }
}

}  // namespace slinv
