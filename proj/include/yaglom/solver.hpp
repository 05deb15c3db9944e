#pragma once

#include <vector>

#include "yaglom/evaluate.hpp"
#include "yaglom/grid.hpp"

namespace yaglom {

// Dealiased pseudo-spectral advection record: theta snapshots every `stride`
// steps (including t = 0 and the final time), fixed solenoidal v.
struct SnapshotSeries {
  std::vector<double> times;
  std::vector<ScalarField> theta;
  VectorField3 v;
  double dt = 0.0;
  int stride = 1;
  double dealias_fraction = 2.0 / 3.0;
};

// RK4 on theta_t = -v . grad theta with spectral products dealiased each stage.
// Preconditions: max|v| dt <= 0.5 h (CFL), v solenoidal.
SnapshotSeries advect(const VectorField3& v, const ScalarField& theta0, double dt, int steps,
                      int store_stride = 1, double dealias_fraction = 2.0 / 3.0);

struct BalanceResult {
  std::vector<double> times;            // interior snapshot times
  std::vector<ScalarField> residual;    // R = D_t(theta^2/2) + div(v theta^2/2) - D_eps
  std::vector<std::array<double, 3>> norms;  // L1, L2, Linf per interior time
};

BalanceResult balance_residual(const SnapshotSeries& series, const BallQuadrature& ball,
                               ShiftMethod method = ShiftMethod::fourier_phase);

}  // namespace yaglom
