#include "yaglom/synth.hpp"

#include <cmath>
#include <numbers>

#include "yaglom/fft.hpp"

namespace yaglom {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based generator keyed on (seed, mode, salt): output does not depend
// on iteration order or thread count.
std::uint64_t mode_key(std::uint64_t seed, int kx, int ky, int kz, std::uint64_t salt) {
  std::uint64_t h = splitmix(seed ^ 0x5851f42d4c957f2dULL);
  h = splitmix(h ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(kx)) | (salt << 32)));
  h = splitmix(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(ky)));
  h = splitmix(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(kz)));
  return h;
}

double to_unit(std::uint64_t x) {  // (0, 1]
  return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

// Two standard normals from one key (Box-Muller).
void gaussian_pair(std::uint64_t key, double& g1, double& g2) {
  const double u1 = to_unit(key);
  const double u2 = to_unit(splitmix(key ^ 0xda942042e4dd58b5ULL));
  const double r = std::sqrt(-2.0 * std::log(u1));
  g1 = r * std::cos(2.0 * std::numbers::pi * u2);
  g2 = r * std::sin(2.0 * std::numbers::pi * u2);
}

// Canonical representative of a +-k pair on the kx in {0, n/2} planes.
bool is_canonical(int kx, int ky, int kz, int n) {
  if (kx != 0 && kx != n / 2) return true;
  const int my = ky == 0 ? 0 : n - ky;
  const int mz = kz == 0 ? 0 : n - kz;
  if (kz != mz) return kz < mz;
  return ky <= my;
}

ScalarField gaussian_with_salt(const PeriodicGrid& g, const SpectrumSpec& spec,
                               std::uint64_t salt) {
  const int n = g.n;
  const int kmax = spec.k_max > 0 ? spec.k_max : g.max_mode();
  if (kmax > g.max_mode()) {
    throw config_error("spectrum: k_max exceeds the grid band limit n/3");
  }
  if (spec.k_min < 1 || spec.k_min > kmax) throw config_error("spectrum: empty active band");

  fft::Spectrum s(g);
  // Modal std ~ kappa^{-(slope+2)/2}; shell sums then follow kappa^{-slope}.
  const double mexp = -(spec.slope + 2.0) / 2.0;
  double var_sum = 0.0;
  const std::size_t nxh = s.nx_half();
  for (int iz = 0; iz < n; ++iz) {
    const int kz = fft::wavenumber(iz, n);
    for (int iy = 0; iy < n; ++iy) {
      const int ky = fft::wavenumber(iy, n);
      const std::size_t base = nxh * (iy + static_cast<std::size_t>(n) * iz);
      for (int ix = 0; ix <= n / 2; ++ix) {
        const int kx = ix;
        const double kk = std::sqrt(static_cast<double>(kx) * kx +
                                    static_cast<double>(ky) * ky + static_cast<double>(kz) * kz);
        if (kk < spec.k_min - 0.5 || kk > kmax + 0.49) continue;
        if (std::abs(kx) > kmax || std::abs(ky) > kmax || std::abs(kz) > kmax) continue;
        const double sigma = std::pow(kk, mexp);

        double g1, g2;
        std::complex<double> c;
        const bool self_conj = (kx == 0 || kx == n / 2) &&
                               (ky == 0 || iy == n / 2) && (kz == 0 || iz == n / 2);
        if (self_conj) {
          gaussian_pair(mode_key(spec.seed, kx, ky, kz, salt), g1, g2);
          c = {sigma * g1, 0.0};
        } else if (is_canonical(kx, ky, kz, n)) {
          gaussian_pair(mode_key(spec.seed, kx, ky, kz, salt), g1, g2);
          c = {sigma * g1 * std::numbers::sqrt2 / 2.0, sigma * g2 * std::numbers::sqrt2 / 2.0};
        } else {
          // Hermitian partner of a canonical mode on the kx in {0, n/2} plane.
          const int py = ky == 0 ? 0 : n - ((iy + n) % n);
          const int pz = kz == 0 ? 0 : n - ((iz + n) % n);
          gaussian_pair(mode_key(spec.seed, kx, fft::wavenumber(py, n), fft::wavenumber(pz, n), salt),
                        g1, g2);
          c = {sigma * g1 * std::numbers::sqrt2 / 2.0, -sigma * g2 * std::numbers::sqrt2 / 2.0};
        }
        s.c[base + ix] = c;
        // Accumulated expected variance: half-spectrum entries with kx not in
        // {0, n/2} represent two modes.
        const double mult = (kx == 0 || kx == n / 2) ? 1.0 : 2.0;
        var_sum += mult * sigma * sigma;
      }
    }
  }
  if (var_sum <= 0.0) throw config_error("spectrum: no active modes");
  const double scale = spec.amplitude / std::sqrt(var_sum);
  for (auto& c : s.c) c *= scale;
  return fft::inverse(s);
}

}  // namespace

ScalarField gaussian_scalar(const PeriodicGrid& g, const SpectrumSpec& spec) {
  if (spec.amplitude == 0.0) return ScalarField(g);
  return gaussian_with_salt(g, spec, 0);
}

VectorField3 gaussian_divfree(const PeriodicGrid& g, const SpectrumSpec& spec) {
  if (spec.amplitude == 0.0) return VectorField3(g);
  VectorField3 v(gaussian_with_salt(g, spec, 1), gaussian_with_salt(g, spec, 2),
                 gaussian_with_salt(g, spec, 3));
  return project_divfree(v);
}

VectorField3 abc_flow(const PeriodicGrid& g, double A, double B, double C) {
  return VectorField3(
      ScalarField::sample(g, [&](double, double y, double z) { return A * std::sin(z) + C * std::cos(y); }),
      ScalarField::sample(g, [&](double x, double, double z) { return B * std::sin(x) + A * std::cos(z); }),
      ScalarField::sample(g, [&](double x, double y, double) { return C * std::sin(y) + B * std::cos(x); }));
}

VectorField3 taylor_green(const PeriodicGrid& g) {
  return VectorField3(
      ScalarField::sample(g, [](double x, double y, double z) {
        return std::sin(x) * std::cos(y) * std::cos(z);
      }),
      ScalarField::sample(g, [](double x, double y, double z) {
        return -std::cos(x) * std::sin(y) * std::cos(z);
      }),
      ScalarField(g));
}

namespace {

// Rescales every mode so each integer shell carries exactly the prescribed
// power-law energy. Random phases keep the field "random"; pinning the shell
// energies removes the chi^2 spectrum noise that would otherwise dominate the
// scaling-exponent scatter. Proportional per-shell scaling preserves any
// divergence-free structure.
ScalarField shell_normalize(const ScalarField& f, double slope, int k_max) {
  fft::Spectrum s = fft::forward(f);
  const int n = f.grid().n;
  const std::size_t nxh = s.nx_half();
  std::vector<double> realized(k_max + 1, 0.0);
  auto bin_of = [&](int kx, int ky, int kz) {
    const double kk = std::sqrt(static_cast<double>(kx) * kx + static_cast<double>(ky) * ky +
                                static_cast<double>(kz) * kz);
    return static_cast<int>(kk + 0.5);
  };
  for (int iz = 0; iz < n; ++iz) {
    const int kz = fft::wavenumber(iz, n);
    for (int iy = 0; iy < n; ++iy) {
      const int ky = fft::wavenumber(iy, n);
      const std::size_t base = nxh * (iy + static_cast<std::size_t>(n) * iz);
      for (int ix = 0; ix <= n / 2; ++ix) {
        const int b = bin_of(ix, ky, kz);
        if (b < 1 || b > k_max) continue;
        const double mult = (ix == 0 || ix == n / 2) ? 1.0 : 2.0;
        realized[b] += mult * std::norm(s.c[base + ix]);
      }
    }
  }
  std::vector<double> target(k_max + 1, 0.0);
  double total = 0.0;
  for (int b = 1; b <= k_max; ++b) {
    target[b] = std::pow(static_cast<double>(b), -slope);
    total += target[b];
  }
  std::vector<double> factor(k_max + 1, 0.0);
  for (int b = 1; b <= k_max; ++b) {
    if (realized[b] > 0.0) factor[b] = std::sqrt(target[b] / total / realized[b]);
  }
  for (int iz = 0; iz < n; ++iz) {
    const int kz = fft::wavenumber(iz, n);
    for (int iy = 0; iy < n; ++iy) {
      const int ky = fft::wavenumber(iy, n);
      const std::size_t base = nxh * (iy + static_cast<std::size_t>(n) * iz);
      for (int ix = 0; ix <= n / 2; ++ix) {
        const int b = bin_of(ix, ky, kz);
        s.c[base + ix] *= (b >= 1 && b <= k_max) ? factor[b] : 0.0;
      }
    }
  }
  return fft::inverse(s);
}

}  // namespace

ScalarField fractional_scalar(const PeriodicGrid& g, double holder, std::uint64_t seed) {
  if (!(holder > 0.0) || !(holder < 1.0)) {
    throw config_error("fractional field: holder target must lie in (0,1)");
  }
  SpectrumSpec spec;
  spec.slope = 2.0 * holder + 1.0;
  spec.seed = seed;
  spec.k_min = 1;
  spec.k_max = g.max_mode();
  return shell_normalize(gaussian_scalar(g, spec), spec.slope, spec.k_max);
}

VectorField3 fractional_divfree(const PeriodicGrid& g, double holder, std::uint64_t seed) {
  if (!(holder > 0.0) || !(holder < 1.0)) {
    throw config_error("fractional field: holder target must lie in (0,1)");
  }
  SpectrumSpec spec;
  spec.slope = 2.0 * holder + 1.0;
  spec.seed = seed;
  spec.k_min = 1;
  spec.k_max = g.max_mode();
  VectorField3 v = gaussian_divfree(g, spec);
  // one common factor per shell across the three components keeps k.v = 0
  const int n = g.n;
  const int k_max = spec.k_max;
  fft::Spectrum s[3] = {fft::forward(v[0]), fft::forward(v[1]), fft::forward(v[2])};
  const std::size_t nxh = s[0].nx_half();
  auto bin_of = [&](int kx, int ky, int kz) {
    const double kk = std::sqrt(static_cast<double>(kx) * kx + static_cast<double>(ky) * ky +
                                static_cast<double>(kz) * kz);
    return static_cast<int>(kk + 0.5);
  };
  std::vector<double> realized(k_max + 1, 0.0);
  for (int iz = 0; iz < n; ++iz) {
    const int kz = fft::wavenumber(iz, n);
    for (int iy = 0; iy < n; ++iy) {
      const int ky = fft::wavenumber(iy, n);
      const std::size_t base = nxh * (iy + static_cast<std::size_t>(n) * iz);
      for (int ix = 0; ix <= n / 2; ++ix) {
        const int b = bin_of(ix, ky, kz);
        if (b < 1 || b > k_max) continue;
        const double mult = (ix == 0 || ix == n / 2) ? 1.0 : 2.0;
        for (int c = 0; c < 3; ++c) realized[b] += mult * std::norm(s[c].c[base + ix]);
      }
    }
  }
  double total = 0.0;
  std::vector<double> target(k_max + 1, 0.0);
  for (int b = 1; b <= k_max; ++b) {
    target[b] = std::pow(static_cast<double>(b), -spec.slope);
    total += target[b];
  }
  std::vector<double> factor(k_max + 1, 0.0);
  for (int b = 1; b <= k_max; ++b) {
    if (realized[b] > 0.0) factor[b] = std::sqrt(target[b] / total / realized[b]);
  }
  for (int iz = 0; iz < n; ++iz) {
    const int kz = fft::wavenumber(iz, n);
    for (int iy = 0; iy < n; ++iy) {
      const int ky = fft::wavenumber(iy, n);
      const std::size_t base = nxh * (iy + static_cast<std::size_t>(n) * iz);
      for (int ix = 0; ix <= n / 2; ++ix) {
        const int b = bin_of(ix, ky, kz);
        const double f = (b >= 1 && b <= k_max) ? factor[b] : 0.0;
        for (int c = 0; c < 3; ++c) s[c].c[base + ix] *= f;
      }
    }
  }
  return VectorField3(fft::inverse(s[0]), fft::inverse(s[1]), fft::inverse(s[2]));
}

std::vector<double> shell_spectrum(const ScalarField& f) {
  fft::Spectrum s = fft::forward(f);
  const int n = f.grid().n;
  std::vector<double> E(n / 2, 0.0);
  const std::size_t nxh = s.nx_half();
  for (int iz = 0; iz < n; ++iz) {
    const int kz = fft::wavenumber(iz, n);
    for (int iy = 0; iy < n; ++iy) {
      const int ky = fft::wavenumber(iy, n);
      const std::size_t base = nxh * (iy + static_cast<std::size_t>(n) * iz);
      for (int ix = 0; ix <= n / 2; ++ix) {
        const double kk = std::sqrt(static_cast<double>(ix) * ix + static_cast<double>(ky) * ky +
                                    static_cast<double>(kz) * kz);
        const int bin = static_cast<int>(kk + 0.5);
        if (bin < 1 || bin >= n / 2) continue;
        const double mult = (ix == 0 || ix == n / 2) ? 1.0 : 2.0;
        E[bin] += 0.5 * mult * std::norm(s.c[base + ix]);
      }
    }
  }
  return E;
}

}  // namespace yaglom
