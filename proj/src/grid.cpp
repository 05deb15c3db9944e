#include "yaglom/grid.hpp"

#include <cmath>

#include "yaglom/fft.hpp"
#include "yaglom/parallel.hpp"

namespace yaglom {

using fft::Spectrum;
using fft::wavenumber;

ScalarField ScalarField::sample(const PeriodicGrid& g,
                                const std::function<double(double, double, double)>& f) {
  ScalarField out(g);
  const double h = g.spacing();
  auto d = out.data();
  for (int k = 0; k < g.n; ++k) {
    for (int j = 0; j < g.n; ++j) {
      for (int i = 0; i < g.n; ++i) {
        d[g.index(i, j, k)] = f(i * h, j * h, k * h);
      }
    }
  }
  return out;
}

VectorField3::VectorField3(ScalarField x, ScalarField y, ScalarField z)
    : comp{std::move(x), std::move(y), std::move(z)} {
  if (!(comp[0].grid() == comp[1].grid()) || !(comp[0].grid() == comp[2].grid())) {
    throw config_error("vector field: components must share one grid");
  }
}

namespace {

// Applies fn(kx, ky, kz, coeff&) over every stored mode. kx, ky, kz are
// integer wavenumbers; the Nyquist derivative convention is handled by callers.
template <typename Fn>
void for_each_mode(Spectrum& s, Fn&& fn) {
  const int n = s.grid.n;
  const std::size_t nxh = s.nx_half();
  for (int iz = 0; iz < n; ++iz) {
    const int kz = wavenumber(iz, n);
    for (int iy = 0; iy < n; ++iy) {
      const int ky = wavenumber(iy, n);
      const std::size_t base = nxh * (iy + static_cast<std::size_t>(n) * iz);
      for (std::size_t ix = 0; ix < nxh; ++ix) {
        fn(static_cast<int>(ix), ky, kz, s.c[base + ix]);
      }
    }
  }
}

// i*k derivative factor with the Nyquist mode dropped (its odd-symmetric
// partner is not representable in the half-complex layout).
inline std::complex<double> deriv_factor(int k, int n, double k_base) {
  if (k == n / 2 || k == -n / 2) return {0.0, 0.0};
  return {0.0, k_base * k};
}

}  // namespace

ScalarField spectral_derivative(const ScalarField& f, int axis) {
  if (axis < 0 || axis > 2) throw config_error("spectral_derivative: axis must be 0, 1 or 2");
  Spectrum s = fft::forward(f);
  const int n = s.grid.n;
  const double kb = 2.0 * std::numbers::pi / s.grid.length;
  for_each_mode(s, [&](int kx, int ky, int kz, std::complex<double>& c) {
    const int k = axis == 0 ? kx : (axis == 1 ? ky : kz);
    c *= deriv_factor(k, n, kb);
  });
  return fft::inverse(s);
}

ScalarField divergence(const VectorField3& v) {
  Spectrum sx = fft::forward(v[0]);
  Spectrum sy = fft::forward(v[1]);
  Spectrum sz = fft::forward(v[2]);
  const int n = sx.grid.n;
  const double kb = 2.0 * std::numbers::pi / sx.grid.length;
  Spectrum out(sx.grid);
  const std::size_t nxh = sx.nx_half();
  for (int iz = 0; iz < n; ++iz) {
    const int kz = wavenumber(iz, n);
    for (int iy = 0; iy < n; ++iy) {
      const int ky = wavenumber(iy, n);
      const std::size_t base = nxh * (iy + static_cast<std::size_t>(n) * iz);
      for (std::size_t ix = 0; ix < nxh; ++ix) {
        const int kx = static_cast<int>(ix);
        out.c[base + ix] = deriv_factor(kx, n, kb) * sx.c[base + ix] +
                           deriv_factor(ky, n, kb) * sy.c[base + ix] +
                           deriv_factor(kz, n, kb) * sz.c[base + ix];
      }
    }
  }
  return fft::inverse(out);
}

VectorField3 curl(const VectorField3& v) {
  Spectrum sx = fft::forward(v[0]);
  Spectrum sy = fft::forward(v[1]);
  Spectrum sz = fft::forward(v[2]);
  const int n = sx.grid.n;
  const double kb = 2.0 * std::numbers::pi / sx.grid.length;
  Spectrum ox(sx.grid), oy(sx.grid), oz(sx.grid);
  const std::size_t nxh = sx.nx_half();
  for (int iz = 0; iz < n; ++iz) {
    const int kz = wavenumber(iz, n);
    for (int iy = 0; iy < n; ++iy) {
      const int ky = wavenumber(iy, n);
      const std::size_t base = nxh * (iy + static_cast<std::size_t>(n) * iz);
      for (std::size_t ix = 0; ix < nxh; ++ix) {
        const int kx = static_cast<int>(ix);
        const auto dx = deriv_factor(kx, n, kb);
        const auto dy = deriv_factor(ky, n, kb);
        const auto dz = deriv_factor(kz, n, kb);
        const std::size_t m = base + ix;
        ox.c[m] = dy * sz.c[m] - dz * sy.c[m];
        oy.c[m] = dz * sx.c[m] - dx * sz.c[m];
        oz.c[m] = dx * sy.c[m] - dy * sx.c[m];
      }
    }
  }
  return VectorField3(fft::inverse(ox), fft::inverse(oy), fft::inverse(oz));
}

VectorField3 project_divfree(const VectorField3& v) {
  Spectrum s[3] = {fft::forward(v[0]), fft::forward(v[1]), fft::forward(v[2])};
  const int n = s[0].grid.n;
  const std::size_t nxh = s[0].nx_half();
  for (int iz = 0; iz < n; ++iz) {
    const int kz = wavenumber(iz, n);
    for (int iy = 0; iy < n; ++iy) {
      const int ky = wavenumber(iy, n);
      const std::size_t base = nxh * (iy + static_cast<std::size_t>(n) * iz);
      for (std::size_t ix = 0; ix < nxh; ++ix) {
        const int kx = static_cast<int>(ix);
        const double k2 = static_cast<double>(kx) * kx + static_cast<double>(ky) * ky +
                          static_cast<double>(kz) * kz;
        if (k2 == 0.0) continue;  // mean mode untouched
        const std::size_t m = base + ix;
        const double dx = kx, dy = ky, dz = kz;
        const std::complex<double> kv =
            (dx * s[0].c[m] + dy * s[1].c[m] + dz * s[2].c[m]) / k2;
        s[0].c[m] -= dx * kv;
        s[1].c[m] -= dy * kv;
        s[2].c[m] -= dz * kv;
      }
    }
  }
  return VectorField3(fft::inverse(s[0]), fft::inverse(s[1]), fft::inverse(s[2]));
}

VectorField3 helmholtz_filter(const VectorField3& v, double alpha) {
  if (alpha < 0.0) throw config_error("helmholtz_filter: alpha must be >= 0");
  if (alpha == 0.0) return v;
  VectorField3 out(v.grid());
  const double kb = 2.0 * std::numbers::pi / v.grid().length;
  for (int c = 0; c < 3; ++c) {
    Spectrum s = fft::forward(v[c]);
    for_each_mode(s, [&](int kx, int ky, int kz, std::complex<double>& m) {
      const double k2 = kb * kb *
                        (static_cast<double>(kx) * kx + static_cast<double>(ky) * ky +
                         static_cast<double>(kz) * kz);
      m /= 1.0 + alpha * alpha * k2;
    });
    out[c] = fft::inverse(s);
  }
  return out;
}

VectorField3 gradient(const ScalarField& f) {
  return VectorField3(spectral_derivative(f, 0), spectral_derivative(f, 1),
                      spectral_derivative(f, 2));
}

ScalarField dealias_truncate(const ScalarField& f, int kmax) {
  Spectrum s = fft::forward(f);
  for_each_mode(s, [&](int kx, int ky, int kz, std::complex<double>& c) {
    if (std::abs(kx) > kmax || std::abs(ky) > kmax || std::abs(kz) > kmax) c = 0.0;
  });
  return fft::inverse(s);
}

bool is_band_limited(const ScalarField& f, int kmax, double tol) {
  Spectrum s = fft::forward(f);
  double peak = 0.0;
  for (const auto& c : s.c) peak = std::max(peak, std::abs(c));
  if (peak == 0.0) return true;
  bool ok = true;
  for_each_mode(s, [&](int kx, int ky, int kz, std::complex<double>& c) {
    if (std::abs(kx) > kmax || std::abs(ky) > kmax || std::abs(kz) > kmax) {
      if (std::abs(c) > tol * peak) ok = false;
    }
  });
  return ok;
}

double field_mean(const ScalarField& f) { return par::deterministic_mean(f.data()); }

double field_linf(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.data()) m = std::max(m, std::abs(v));
  return m;
}

double field_l2(const ScalarField& f) {
  const auto d = f.data();
  std::vector<double> sq(d.size());
  par::parallel_for(d.size(), [&](std::size_t a, std::size_t b) {
    for (std::size_t i = a; i < b; ++i) sq[i] = d[i] * d[i];
  });
  return std::sqrt(par::deterministic_mean(sq));
}

double max_abs_divergence(const VectorField3& v) { return field_linf(divergence(v)); }

namespace {
ScalarField zip(const ScalarField& a, const ScalarField& b, double sb) {
  if (!(a.grid() == b.grid())) throw config_error("field op: grid mismatch");
  ScalarField out(a.grid());
  auto o = out.data();
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] + sb * y[i];
  return out;
}
}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) { return zip(a, b, 1.0); }
ScalarField operator-(const ScalarField& a, const ScalarField& b) { return zip(a, b, -1.0); }
ScalarField operator*(double s, const ScalarField& a) {
  ScalarField out(a.grid());
  auto o = out.data();
  auto x = a.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = s * x[i];
  return out;
}
VectorField3 operator+(const VectorField3& a, const VectorField3& b) {
  return VectorField3(a[0] + b[0], a[1] + b[1], a[2] + b[2]);
}
VectorField3 operator-(const VectorField3& a, const VectorField3& b) {
  return VectorField3(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}
VectorField3 operator*(double s, const VectorField3& a) {
  return VectorField3(s * a[0], s * a[1], s * a[2]);
}

}  // namespace yaglom
