#pragma once

#include <complex>
#include <span>
#include <vector>

#include "yaglom/grid.hpp"
#include "yaglom/vec3.hpp"

namespace yaglom::fft {

// Half-complex spectrum of a real field. Layout: ix + (n/2+1)*(iy + n*iz),
// ix in [0, n/2]; integer wavenumber k(i) = i <= n/2 ? i : i - n; physical
// wavenumber = integer * (2*pi/length). Coefficients are normalized so that
// f(x) = sum_k c(k) exp(i k.x).
struct Spectrum {
  PeriodicGrid grid;
  std::vector<std::complex<double>> c;

  Spectrum() = default;
  explicit Spectrum(const PeriodicGrid& g)
      : grid(g), c(static_cast<std::size_t>(g.n / 2 + 1) * g.n * g.n) {}

  std::size_t nx_half() const { return static_cast<std::size_t>(grid.n / 2 + 1); }
  std::size_t index(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return ix + nx_half() * (iy + static_cast<std::size_t>(grid.n) * iz);
  }
};

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);
void inverse_into(const Spectrum& s, std::span<double> out);

// out[x] = f(x + shift), band-limited (trigonometric) interpolation.
void shifted_into(const Spectrum& s, const Vec3& shift, std::span<double> out);

// out[x] = sum_i w[i] * f_i(x + shift) built from three spectra in one transform.
void shifted_combo_into(const Spectrum& s0, const Spectrum& s1, const Spectrum& s2,
                        const Vec3& w, const Vec3& shift, std::span<double> out);

// Integer wavenumber along one axis for storage index i.
inline int wavenumber(int i, int n) { return i <= n / 2 ? i : i - n; }

}  // namespace yaglom::fft
