#pragma once

#include <span>
#include <vector>

#include "slinv/basis.hpp"
#include "slinv/inversion.hpp"

namespace slinv {

struct RankedReconstruction {
  std::size_t index = 0;  // position in the input list
  double l2_norm = 0.0;
  double residual_norm = 0.0;
};

/// Orders reconstructions of the same data by descending L² norm of the
/// recovered potential: the larger norm captures more of the target. Norms
/// within 1e-6 count as tied and fall back to the smaller residual norm; full
/// ties keep input order.
std::vector<RankedReconstruction> rank_reconstructions(std::span<const InversionReport> reports);

struct Contribution {
  BasisFunction function = BasisFunction::constant();
  double weight = 0.0;  // |d_l|·‖φ_l‖
};

/// Every function of every report with its scale-invariant contribution,
/// merged by symbolic identity (the larger weight wins), sorted descending.
std::vector<Contribution> contributions(std::span<const InversionReport> reports);

/// Composite basis of the m distinct functions with the largest contribution,
/// constant first when selected. Throws InvalidArgument if m < 1 or fewer than
/// m distinct functions exist.
Basis merge_top_functions(std::span<const InversionReport> reports, int m);

}  // namespace slinv
