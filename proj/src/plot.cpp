#include "slinv/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "slinv/error.hpp"
#include "slinv/io.hpp"

namespace slinv {
namespace {

constexpr double kPanelW = 420, kPanelH = 300, kMargin = 50, kTop = 40;
constexpr int kGrid = 256;

struct Panel {
  double x0;  // left pixel of the panel frame
  double ymin, ymax;

  double px(double x) const { return x0 + kMargin + x * (kPanelW - 1.5 * kMargin); }
  double py(double y) const {
    const double f = (y - ymin) / (ymax - ymin);
    return kTop + (1.0 - f) * (kPanelH - 2 * kMargin) + kMargin / 2;
  }
};

void expand(double& lo, double& hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.08 * (hi - lo);
  lo -= pad;
  hi += pad;
}

std::string polyline(const Panel& p, const std::vector<double>& xs, const std::vector<double>& ys,
                     const char* color, const char* dash) {
  std::ostringstream os;
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\"";
  if (dash) os << " stroke-dasharray=\"" << dash << "\"";
  os << " points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) os << p.px(xs[i]) << ',' << p.py(ys[i]) << ' ';
  os << "\"/>\n";
  return os.str();
}

std::string frame(const Panel& p, const std::string& label) {
  std::ostringstream os;
  const double left = p.px(0), right = p.px(1), top = p.py(p.ymax), bottom = p.py(p.ymin);
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << right - left
     << "\" height=\"" << bottom - top << "\" fill=\"none\" stroke=\"#444\"/>\n";
  os << "<text x=\"" << 0.5 * (left + right) << "\" y=\"" << top - 8
     << "\" text-anchor=\"middle\" font-size=\"13\">" << label << "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = i / 4.0;
    os << "<text x=\"" << p.px(x) << "\" y=\"" << bottom + 15
       << "\" text-anchor=\"middle\" font-size=\"10\">" << x << "</text>\n";
    const double y = p.ymin + (p.ymax - p.ymin) * i / 4.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", y);
    os << "<text x=\"" << left - 4 << "\" y=\"" << p.py(y) + 3
       << "\" text-anchor=\"end\" font-size=\"10\">" << buf << "</text>\n";
  }
  return os.str();
}

}  // namespace

std::string render_inversion_svg(const FigureData& fig) {
  if (!fig.recovered || !fig.samples) throw InvalidArgument("figure needs a reconstruction and samples");
  std::vector<double> xs(kGrid + 1), rec(kGrid + 1), truth;
  for (int i = 0; i <= kGrid; ++i) {
    xs[i] = static_cast<double>(i) / kGrid;
    rec[i] = (*fig.recovered)(xs[i]);
  }
  if (fig.truth) {
    truth.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) truth[i] = (*fig.truth)(xs[i]);
  }
  double lo = *std::min_element(rec.begin(), rec.end());
  double hi = *std::max_element(rec.begin(), rec.end());
  if (!truth.empty()) {
    lo = std::min(lo, *std::min_element(truth.begin(), truth.end()));
    hi = std::max(hi, *std::max_element(truth.begin(), truth.end()));
  }
  expand(lo, hi);
  const Panel left{0.0, lo, hi};

  // Eigenfunction drawn at the sampled eigenvalue over the whole interval.
  const SampleSet& s = *fig.samples;
  const PotentialFn q = fig.eigenfunction_potential ? fig.eigenfunction_potential
                                                    : fig.recovered->as_function();
  const Trajectory traj = integrate_ivp(q, s.rows.front().lambda, 1.0, 0.0, 1.0);
  std::vector<double> eig(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) eig[i] = traj.at(xs[i])[0];
  double elo = *std::min_element(eig.begin(), eig.end());
  double ehi = *std::max_element(eig.begin(), eig.end());
  for (const auto& r : s.rows) {
    elo = std::min(elo, r.y);
    ehi = std::max(ehi, r.y);
  }
  expand(elo, ehi);
  const Panel right{kPanelW, elo, ehi};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * kPanelW << "\" height=\""
     << kPanelH + kTop << "\" font-family=\"sans-serif\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!fig.title.empty())
    os << "<text x=\"" << kPanelW << "\" y=\"18\" text-anchor=\"middle\" font-size=\"15\">"
       << fig.title << "</text>\n";
  os << frame(left, "potential: true (dashed) vs reconstructed");
  if (!truth.empty()) os << polyline(left, xs, truth, "#d62728", "6,4");
  os << polyline(left, xs, rec, "#1f77b4", nullptr);
  os << frame(right, "sampled eigenfunction");
  os << polyline(right, xs, eig, "#2ca02c", nullptr);
  for (const auto& r : s.rows)
    os << "<text class=\"sample\" x=\"" << right.px(r.x) << "\" y=\"" << right.py(r.y) + 7
       << "\" text-anchor=\"middle\" font-size=\"20\" fill=\"#000\">*</text>\n";
  os << "</svg>\n";
  return os.str();
}

void write_inversion_svg(const std::filesystem::path& path, const FigureData& fig) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << render_inversion_svg(fig);
}

}  // namespace slinv
