#pragma once

#include <cstdint>

#include "yaglom/grid.hpp"

namespace yaglom {

// Isotropic random field recipe: shell energy ~ |k|^-slope over the active
// band, zero mean, deterministic in (seed, mode). amplitude sets the target rms.
struct SpectrumSpec {
  double slope = 5.0 / 3.0;
  int k_min = 1;
  int k_max = 0;  // 0 = use grid band limit n/3
  std::uint64_t seed = 0;
  double amplitude = 1.0;
};

ScalarField gaussian_scalar(const PeriodicGrid& g, const SpectrumSpec& spec);
VectorField3 gaussian_divfree(const PeriodicGrid& g, const SpectrumSpec& spec);

VectorField3 abc_flow(const PeriodicGrid& g, double A, double B, double C);
VectorField3 taylor_green(const PeriodicGrid& g);

// Band-limited field whose increment-scaling exponent recovers holder_target:
// shell slope p = 2 * holder + 1.
ScalarField fractional_scalar(const PeriodicGrid& g, double holder, std::uint64_t seed);
VectorField3 fractional_divfree(const PeriodicGrid& g, double holder, std::uint64_t seed);

// Shell-averaged energy spectrum E(k), k = 1 .. n/2-1 (index 0 unused).
std::vector<double> shell_spectrum(const ScalarField& f);

}  // namespace yaglom
