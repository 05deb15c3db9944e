#include "yaglom/solver.hpp"

#include <cmath>

#include "yaglom/fft.hpp"

namespace yaglom {

namespace {

// -v . grad(theta), evaluated pseudo-spectrally and truncated to the dealias band.
fft::Spectrum advection_rhs(const VectorField3& v, const fft::Spectrum& theta_hat, int kcut) {
  const PeriodicGrid& g = v.grid();
  const int n = g.n;
  const double kb = 2.0 * std::numbers::pi / g.length;
  const std::size_t nxh = theta_hat.nx_half();

  ScalarField adv(g);
  {
    ScalarField grad_c(g);
    for (int axis = 0; axis < 3; ++axis) {
      fft::Spectrum d = theta_hat;
      for (int iz = 0; iz < n; ++iz) {
        const int kz = fft::wavenumber(iz, n);
        for (int iy = 0; iy < n; ++iy) {
          const int ky = fft::wavenumber(iy, n);
          const std::size_t base = nxh * (iy + static_cast<std::size_t>(n) * iz);
          for (std::size_t ix = 0; ix < nxh; ++ix) {
            const int k = axis == 0 ? static_cast<int>(ix) : (axis == 1 ? ky : kz);
            const std::complex<double> f =
                (k == n / 2 || k == -n / 2) ? std::complex<double>{0.0, 0.0}
                                            : std::complex<double>{0.0, kb * k};
            d.c[base + ix] *= f;
          }
        }
      }
      fft::inverse_into(d, grad_c.data());
      auto a = adv.data();
      auto vv = v[axis].data();
      auto gc = grad_c.data();
      for (std::size_t i = 0; i < a.size(); ++i) a[i] -= vv[i] * gc[i];
    }
  }
  fft::Spectrum rhs = fft::forward(adv);
  for (int iz = 0; iz < n; ++iz) {
    const int kz = fft::wavenumber(iz, n);
    for (int iy = 0; iy < n; ++iy) {
      const int ky = fft::wavenumber(iy, n);
      const std::size_t base = nxh * (iy + static_cast<std::size_t>(n) * iz);
      for (std::size_t ix = 0; ix < nxh; ++ix) {
        const int kx = static_cast<int>(ix);
        if (std::abs(kx) > kcut || std::abs(ky) > kcut || std::abs(kz) > kcut) {
          rhs.c[base + ix] = 0.0;
        }
      }
    }
  }
  return rhs;
}

}  // namespace

SnapshotSeries advect(const VectorField3& v, const ScalarField& theta0, double dt, int steps,
                      int store_stride, double dealias_fraction) {
  const PeriodicGrid& g = theta0.grid();
  if (!(v.grid() == g)) throw config_error("advect: grid mismatch");
  if (!(dt > 0.0) || steps < 1 || store_stride < 1) {
    throw config_error("advect: dt > 0, steps >= 1, stride >= 1 required");
  }
  if (max_abs_divergence(v) > 1e-10) throw config_error("advect: v is not solenoidal");
  // CFL on the vector magnitude.
  double vmax = 0.0;
  {
    auto x = v[0].data(), y = v[1].data(), z = v[2].data();
    for (std::size_t i = 0; i < x.size(); ++i) {
      vmax = std::max(vmax, std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]));
    }
  }
  if (vmax * dt > 0.5 * g.spacing() + 1e-15) {
    throw config_error("advect: CFL violated, max|v| dt must be <= 0.5 spacing");
  }
  const int kcut = static_cast<int>(dealias_fraction * (g.n / 2));

  VectorField3 vd(dealias_truncate(v[0], kcut), dealias_truncate(v[1], kcut),
                  dealias_truncate(v[2], kcut));
  fft::Spectrum th = fft::forward(dealias_truncate(theta0, kcut));

  SnapshotSeries out;
  out.v = vd;
  out.dt = dt;
  out.stride = store_stride;
  out.dealias_fraction = dealias_fraction;
  out.times.push_back(0.0);
  out.theta.push_back(fft::inverse(th));

  auto axpy = [](fft::Spectrum& y, const fft::Spectrum& x, double a) {
    for (std::size_t i = 0; i < y.c.size(); ++i) y.c[i] += a * x.c[i];
  };

  for (int s = 1; s <= steps; ++s) {
    const fft::Spectrum k1 = advection_rhs(vd, th, kcut);
    fft::Spectrum tmp = th;
    axpy(tmp, k1, 0.5 * dt);
    const fft::Spectrum k2 = advection_rhs(vd, tmp, kcut);
    tmp = th;
    axpy(tmp, k2, 0.5 * dt);
    const fft::Spectrum k3 = advection_rhs(vd, tmp, kcut);
    tmp = th;
    axpy(tmp, k3, dt);
    const fft::Spectrum k4 = advection_rhs(vd, tmp, kcut);
    for (std::size_t i = 0; i < th.c.size(); ++i) {
      th.c[i] += dt / 6.0 * (k1.c[i] + 2.0 * k2.c[i] + 2.0 * k3.c[i] + k4.c[i]);
    }
    if (s % store_stride == 0 || s == steps) {
      out.times.push_back(s * dt);
      out.theta.push_back(fft::inverse(th));
    }
  }
  return out;
}

BalanceResult balance_residual(const SnapshotSeries& series, const BallQuadrature& ball,
                               ShiftMethod method) {
  if (series.theta.size() < 3) {
    throw config_error("balance_residual: need at least 3 stored snapshots");
  }
  const PeriodicGrid& g = series.v.grid();
  if (!(ball.epsilon > 0.0) || !(ball.epsilon < 0.5 * g.length)) {
    throw config_error("balance_residual: eps must lie in (0, length/2)");
  }

  BalanceResult out;
  const CatalogEntry& temp = catalog_entry("TEMP");
  for (std::size_t s = 1; s + 1 < series.theta.size(); ++s) {
    const double dt2 = series.times[s + 1] - series.times[s - 1];
    const ScalarField& th = series.theta[s];

    // centered difference of theta^2/2 across stored snapshots
    ScalarField ddt(g);
    {
      auto o = ddt.data();
      auto p = series.theta[s + 1].data();
      auto m = series.theta[s - 1].data();
      for (std::size_t i = 0; i < o.size(); ++i) {
        o[i] = (0.5 * p[i] * p[i] - 0.5 * m[i] * m[i]) / dt2;
      }
    }
    // div(v theta^2 / 2), spectral
    VectorField3 flux(g);
    for (int c = 0; c < 3; ++c) {
      auto f = flux[c].data();
      auto vv = series.v[c].data();
      auto t = th.data();
      for (std::size_t i = 0; i < f.size(); ++i) f[i] = 0.5 * vv[i] * t[i] * t[i];
    }
    ScalarField div_flux = divergence(flux);

    FieldSet fs(g);
    fs.set("v", series.v);
    fs.set("theta", th);
    DissipationField de = dissipation_direct(fs, temp, ball, method);

    ScalarField r = ddt + div_flux - de.values;
    double l1 = 0.0, l2 = 0.0, li = 0.0;
    for (double x : r.data()) {
      l1 += std::abs(x);
      l2 += x * x;
      li = std::max(li, std::abs(x));
    }
    const double npts = static_cast<double>(g.size());
    out.times.push_back(series.times[s]);
    out.norms.push_back({l1 / npts, std::sqrt(l2 / npts), li});
    out.residual.push_back(std::move(r));
  }
  return out;
}

}  // namespace yaglom
