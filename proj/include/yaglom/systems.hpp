#pragma once

#include <span>
#include <string>
#include <utility>

#include "yaglom/grid.hpp"
#include "yaglom/increments.hpp"
#include "yaglom/mollifier.hpp"

namespace yaglom {

// Elsasser variables u = v + b, h = v - b (and the exact inverse).
std::pair<VectorField3, VectorField3> elsasser(const VectorField3& v, const VectorField3& b);
std::pair<VectorField3, VectorField3> elsasser_inverse(const VectorField3& u,
                                                       const VectorField3& h);

// Zero-mean total pressure from -lap Pi = d_i d_j (v_i v_j - b_i b_j); pass
// b = nullptr for the advective source alone. Inputs must be solenoidal
// (max |div| <= 1e-8) or a config_error is thrown.
ScalarField pressure_poisson(const VectorField3& v, const VectorField3* b = nullptr);

// Symmetric part of the spectral gradient.
SymTensorField3 strain(const VectorField3& v);

struct RegularityEstimate {
  double exponent = 0.0;      // fitted log-log slope of the L^p increment norm
  double norm_order = 0.0;    // the p used
  double lambda_min = 0.0, lambda_max = 0.0;
  double residual = 0.0;          // rms of fit residuals in log space
  double stderr_slope = 0.0;      // least-squares slope uncertainty
  double prefactor_trend = 0.0;   // mean residual at the smallest scales minus the rest
};

RegularityEstimate scaling_exponent(const ScalarField& f, double p, std::span<const double> lambdas,
                                    const SphereQuadrature& sphere,
                                    ShiftMethod method = ShiftMethod::fourier_phase);
RegularityEstimate scaling_exponent(const VectorField3& f, double p, std::span<const double> lambdas,
                                    const SphereQuadrature& sphere,
                                    ShiftMethod method = ShiftMethod::fourier_phase);

struct ConservationPrediction {
  bool conserved = false;
  double combo = 0.0;        // 2*alpha + beta
  double uncertainty = 0.0;  // propagated slope uncertainty
  std::string note;          // always flags the snapshot-level nature of the check
};

// Sufficient-condition check 2*alpha + beta >= 1 under 2/r1 + 1/r2 = 1.
ConservationPrediction conservation_predictor(const RegularityEstimate& est_v,
                                              const RegularityEstimate& est_omega, double r1,
                                              double r2);

}  // namespace yaglom
