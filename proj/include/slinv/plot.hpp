#pragma once

#include <filesystem>
#include <string>

#include "slinv/basis.hpp"
#include "slinv/spectral.hpp"

namespace slinv {

struct FigureData {
  std::string title;
  const Potential* recovered = nullptr;
  const PotentialFn* truth = nullptr;  // optional
  const SampleSet* samples = nullptr;
  /// Potential whose eigenfunction is drawn on the right; the truth when known.
  PotentialFn eigenfunction_potential;
};

/// Two-panel SVG: true vs reconstructed potential on the left, the sampled
/// eigenfunction with asterisks at the sample points on the right.
std::string render_inversion_svg(const FigureData& fig);
void write_inversion_svg(const std::filesystem::path& path, const FigureData& fig);

}  // namespace slinv
