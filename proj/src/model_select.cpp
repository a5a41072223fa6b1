#include "slinv/model_select.hpp"

#include <algorithm>
#include <cmath>

#include "slinv/error.hpp"

namespace slinv {

std::vector<RankedReconstruction> rank_reconstructions(std::span<const InversionReport> reports) {
  std::vector<RankedReconstruction> out;
  for (std::size_t i = 0; i < reports.size(); ++i)
    out.push_back({i, l2_norm(reports[i].recovered), reports[i].residual_norm()});
  // Insertion sort: the tolerance comparison is not a strict weak order.
  auto before = [](const RankedReconstruction& a, const RankedReconstruction& b) {
    if (std::abs(a.l2_norm - b.l2_norm) > 1e-6) return a.l2_norm > b.l2_norm;
    return a.residual_norm < b.residual_norm;
  };
  for (std::size_t i = 1; i < out.size(); ++i) {
    for (std::size_t j = i; j > 0 && before(out[j], out[j - 1]); --j) std::swap(out[j], out[j - 1]);
  }
  return out;
}

std::vector<Contribution> contributions(std::span<const InversionReport> reports) {
  std::vector<Contribution> all;
  for (const auto& report : reports) {
    const Basis& basis = report.recovered.basis();
    const auto& d = report.recovered.coefficients();
    for (int l = 0; l < basis.size(); ++l) {
      const double w = std::abs(d(l)) * basis[l].l2_norm();
      auto it = std::find_if(all.begin(), all.end(),
                             [&](const Contribution& c) { return c.function == basis[l]; });
      if (it == all.end())
        all.push_back({basis[l], w});
      else
        it->weight = std::max(it->weight, w);
    }
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Contribution& a, const Contribution& b) { return a.weight > b.weight; });
  return all;
}

Basis merge_top_functions(std::span<const InversionReport> reports, int m) {
  if (m < 1) throw InvalidArgument("merge_top_functions: m must be >= 1");
  const auto ranked = contributions(reports);
  if (static_cast<int>(ranked.size()) < m)
    throw InvalidArgument("merge_top_functions: only " + std::to_string(ranked.size()) +
                          " distinct functions available");
  std::vector<BasisFunction> chosen;
  for (int i = 0; i < m; ++i) chosen.push_back(ranked[static_cast<std::size_t>(i)].function);
  std::stable_partition(chosen.begin(), chosen.end(),
                        [](const BasisFunction& f) { return f.is_constant(); });
  return Basis::composite(std::move(chosen));
}

}  // namespace slinv
