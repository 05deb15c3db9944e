#pragma once

#include <functional>
#include <string>
#include <vector>

#include "yaglom/errors.hpp"
#include "yaglom/vec3.hpp"

namespace yaglom {

// Radial kernel phi(|x|), compactly supported on [0,1), unit mass in R^3:
// 4*pi * int_0^1 r^2 phi(r) dr = 1. Holds the normalization constant so that
// value()/deriv() are the normalized profile and its radial derivative.
class MollifierProfile {
 public:
  using RadialFn = std::function<double(double)>;

  MollifierProfile(std::string name, RadialFn raw_value, RadialFn raw_deriv);

  double value(double r) const { return r >= 1.0 ? 0.0 : c0_ * raw_value_(r); }
  double deriv(double r) const { return r >= 1.0 ? 0.0 : c0_ * raw_deriv_(r); }
  double c0() const { return c0_; }
  const std::string& name() const { return name_; }

  // phi(x) = C0 exp(-1/(1-|x|^2)); the default everywhere.
  static MollifierProfile standard_bump();
  // phi(x) = C0 (1-|x|^2)^4; used to probe profile independence.
  static MollifierProfile quartic_bump();
  // Same shape with the mass multiplied by `factor` (test hook).
  MollifierProfile with_mass(double factor) const;

 private:
  std::string name_;
  RadialFn raw_value_, raw_deriv_;
  double c0_ = 1.0;
};

// Normalization constant for a raw radial shape: C0 with
// 4*pi*C0*int r^2 shape(r) dr = 1 (adaptive quadrature, throws numerical_error
// if it fails to converge).
double normalization_constant(const MollifierProfile::RadialFn& raw_shape);

// int_0^1 r^3 phi'(r) dr; equals -3/(4*pi) for any unit-mass radial profile.
double radial_third_moment(const MollifierProfile& p);

// grad phi_eps(l) = eps^-4 phi'(|l|/eps) l/|l|; zero at l = 0 and |l| >= eps.
Vec3 grad_kernel(const MollifierProfile& p, const Vec3& l, double eps);

// Adaptive Simpson quadrature (shared by the oracles above).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-12);

struct SphereQuadrature {
  std::vector<Vec3> directions;
  std::vector<double> weights;  // positive, sum to 1

  std::size_t size() const { return directions.size(); }
};

// Antipodally paired Fibonacci spiral with equal weights 1/count.
// count must be even and >= 6. Odd spherical moments vanish identically.
SphereQuadrature sphere_rule(int count);

// Gauss-Legendre x uniform-azimuth product rule, polar_count x 2*polar_count
// nodes, exact for spherical harmonics up to degree 2*polar_count - 1. Used
// where band-limited integrands demand spectral angular accuracy (the
// commutator-identity checks); the spiral rule remains the default for the
// law sweeps on rough fields.
SphereQuadrature sphere_rule_gauss(int polar_count);

struct RadialNode {
  double r;
  double w;
};

struct BallQuadrature {
  MollifierProfile profile;
  std::vector<RadialNode> radial;  // nodes strictly inside (0,1)
  SphereQuadrature sphere;
  double epsilon = 0.0;
};

// Composite Gauss-Legendre nodes on (0,1) split at r = 0.8 (half the nodes in
// each panel). The split resolves the bump kernel's boundary layer near r = 1.
std::vector<RadialNode> radial_rule(int radial_count);

BallQuadrature ball_rule(int radial_count, SphereQuadrature sphere, double eps,
                         MollifierProfile profile = MollifierProfile::standard_bump());

// Applies the ball rule to int grad phi_eps(l) . F(l) dl for a vector-valued F.
double ball_integrate(const BallQuadrature& q, const std::function<Vec3(const Vec3&)>& F);

// Plain Gauss-Legendre nodes/weights on (-1,1).
void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace yaglom
