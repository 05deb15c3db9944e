#include "yaglom/mollifier.hpp"

#include <cmath>
#include <numbers>

namespace yaglom {

namespace {

constexpr double kPi = std::numbers::pi;

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth, int force) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // force > 0 keeps subdividing regardless of the error estimate: oscillatory
  // integrands (kernel transforms at pi-rational kappa) can zero out every
  // coarse stencil point and fool the acceptance test.
  if (force <= 0 && std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) throw numerical_error("adaptive quadrature did not converge");
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, force - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, force - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48, 5);
}

double normalization_constant(const MollifierProfile::RadialFn& raw_shape) {
  const double I = integrate_adaptive([&](double r) { return r * r * raw_shape(r); }, 0.0, 1.0);
  if (!(I > 0.0) || !std::isfinite(I)) throw numerical_error("mollifier shape has no mass");
  return 1.0 / (4.0 * kPi * I);
}

MollifierProfile::MollifierProfile(std::string name, RadialFn raw_value, RadialFn raw_deriv)
    : name_(std::move(name)), raw_value_(std::move(raw_value)), raw_deriv_(std::move(raw_deriv)) {
  c0_ = normalization_constant(raw_value_);
}

MollifierProfile MollifierProfile::standard_bump() {
  auto val = [](double r) {
    const double s = 1.0 - r * r;
    if (s <= 1e-12) return 0.0;
    return std::exp(-1.0 / s);
  };
  auto der = [](double r) {
    const double s = 1.0 - r * r;
    if (s <= 1e-12) return 0.0;
    return -2.0 * r / (s * s) * std::exp(-1.0 / s);
  };
  return MollifierProfile("standard_bump", val, der);
}

MollifierProfile MollifierProfile::quartic_bump() {
  auto val = [](double r) {
    const double s = 1.0 - r * r;
    if (s <= 0.0) return 0.0;
    return s * s * s * s;
  };
  auto der = [](double r) {
    const double s = 1.0 - r * r;
    if (s <= 0.0) return 0.0;
    return -8.0 * r * s * s * s;
  };
  return MollifierProfile("quartic_bump", val, der);
}

MollifierProfile MollifierProfile::with_mass(double factor) const {
  MollifierProfile out = *this;
  out.c0_ *= factor;
  out.name_ += "_scaled";
  return out;
}

double radial_third_moment(const MollifierProfile& p) {
  return integrate_adaptive([&](double r) { return r * r * r * p.deriv(r); }, 0.0, 1.0);
}

Vec3 grad_kernel(const MollifierProfile& p, const Vec3& l, double eps) {
  if (!(eps > 0.0)) throw config_error("grad_kernel: eps must be positive");
  const double rl = norm(l);
  if (rl == 0.0) return {0.0, 0.0, 0.0};
  const double r = rl / eps;
  if (r >= 1.0) return {0.0, 0.0, 0.0};
  const double mag = p.deriv(r) / (eps * eps * eps * eps);
  return scaled(l, mag / rl);
}

void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(m, 0.0);
  weights.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    // Newton iteration from the Chebyshev initial guess.
    double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < m; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = m * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

std::vector<RadialNode> radial_rule(int radial_count) {
  if (radial_count < 4) throw config_error("radial rule: need at least 4 nodes");
  const double split = 0.8;
  const int m1 = (radial_count + 1) / 2;
  const int m2 = radial_count - m1;
  std::vector<RadialNode> out;
  out.reserve(radial_count);
  auto add_panel = [&out](double a, double b, int m) {
    std::vector<double> x, w;
    gauss_legendre(m, x, w);
    for (int i = 0; i < m; ++i) {
      out.push_back({a + (b - a) * 0.5 * (x[i] + 1.0), (b - a) * 0.5 * w[i]});
    }
  };
  add_panel(0.0, split, m1);
  add_panel(split, 1.0, m2);
  return out;
}

SphereQuadrature sphere_rule(int count) {
  if (count < 6) throw config_error("sphere rule: need at least 6 directions");
  if (count % 2 != 0) throw config_error("sphere rule: count must be even (antipodal pairs)");
  const int half = count / 2;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  SphereQuadrature q;
  q.directions.reserve(count);
  q.weights.assign(count, 1.0 / count);
  for (int i = 0; i < half; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;  // upper hemisphere
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double a = golden * i;
    const Vec3 p{rho * std::cos(a), rho * std::sin(a), z};
    q.directions.push_back(p);
    q.directions.push_back(negated(p));
  }
  return q;
}

SphereQuadrature sphere_rule_gauss(int polar_count) {
  if (polar_count < 2) throw config_error("gauss sphere rule: need polar_count >= 2");
  std::vector<double> u, wu;
  gauss_legendre(polar_count, u, wu);
  const int naz = 2 * polar_count;
  SphereQuadrature q;
  q.directions.reserve(static_cast<std::size_t>(polar_count) * naz);
  q.weights.reserve(q.directions.capacity());
  for (int i = 0; i < polar_count; ++i) {
    const double z = u[i];
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int j = 0; j < naz; ++j) {
      const double a = 2.0 * kPi * (j + 0.5) / naz;
      q.directions.push_back({rho * std::cos(a), rho * std::sin(a), z});
      q.weights.push_back(wu[i] / 2.0 / naz);
    }
  }
  return q;
}

BallQuadrature ball_rule(int radial_count, SphereQuadrature sphere, double eps,
                         MollifierProfile profile) {
  if (!(eps > 0.0)) throw config_error("ball rule: eps must be positive");
  BallQuadrature q{std::move(profile), radial_rule(radial_count), std::move(sphere), eps};
  return q;
}

double ball_integrate(const BallQuadrature& q, const std::function<Vec3(const Vec3&)>& F) {
  // int grad phi_eps . F dl = (4pi/eps) sum_m w_m r_m^2 phi'(r_m) sum_q w_q zeta . F(r_m eps zeta)
  double total = 0.0;
  for (const auto& rn : q.radial) {
    const double fac = rn.w * rn.r * rn.r * q.profile.deriv(rn.r);
    if (fac == 0.0) continue;
    double sph = 0.0;
    for (std::size_t i = 0; i < q.sphere.size(); ++i) {
      const Vec3& zeta = q.sphere.directions[i];
      sph += q.sphere.weights[i] * dot(zeta, F(scaled(zeta, rn.r * q.epsilon)));
    }
    total += fac * sph;
  }
  return 4.0 * kPi / q.epsilon * total;
}

}  // namespace yaglom
