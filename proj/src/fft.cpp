#include "yaglom/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

#include "yaglom/parallel.hpp"

namespace yaglom::fft {

namespace {

// One shared plan pair per grid size, created once under a lock. Execution via
// the new-array interface is thread safe. FFTW_ESTIMATE keeps plan selection
// (and therefore rounding) independent of runtime timings.
struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  double* rproto = nullptr;
  fftw_complex* cproto = nullptr;
};

std::mutex g_plan_mutex;
std::map<int, Plans>& plan_map() {
  static std::map<int, Plans> m;
  return m;
}

const Plans& plans_for(int n) {
  std::lock_guard lk(g_plan_mutex);
  auto& m = plan_map();
  auto it = m.find(n);
  if (it != m.end()) return it->second;
  Plans p;
  const std::size_t nr = static_cast<std::size_t>(n) * n * n;
  const std::size_t nc = static_cast<std::size_t>(n) * n * (n / 2 + 1);
  p.rproto = fftw_alloc_real(nr);
  p.cproto = fftw_alloc_complex(nc);
  p.r2c = fftw_plan_dft_r2c_3d(n, n, n, p.rproto, p.cproto, FFTW_ESTIMATE);
  p.c2r = fftw_plan_dft_c2r_3d(n, n, n, p.cproto, p.rproto, FFTW_ESTIMATE);
  return m.emplace(n, p).first->second;
}

struct Workspace {
  std::size_t nr = 0, nc = 0;
  double* r = nullptr;
  fftw_complex* c = nullptr;

  void ensure(int n) {
    const std::size_t wr = static_cast<std::size_t>(n) * n * n;
    const std::size_t wc = static_cast<std::size_t>(n) * n * (n / 2 + 1);
    if (wr <= nr && wc <= nc) return;
    if (r) fftw_free(r);
    if (c) fftw_free(c);
    nr = wr;
    nc = wc;
    r = fftw_alloc_real(nr);
    c = fftw_alloc_complex(nc);
  }
  ~Workspace() {
    if (r) fftw_free(r);
    if (c) fftw_free(c);
  }
};

Workspace& workspace() {
  thread_local Workspace ws;
  return ws;
}

// Per-axis phase tables for a shift. Nyquist entries use the cosine so real
// fields stay real for non-lattice shifts; on lattice-aligned shifts the
// cosine equals the exact +-1 phase.
void phase_table(int n, double k_base, double shift, std::size_t count,
                 std::vector<std::complex<double>>& out) {
  out.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const int k = wavenumber(static_cast<int>(i), n);
    const double t = k_base * k * shift;
    if (static_cast<int>(i) == n / 2) {
      out[i] = {std::cos(t), 0.0};
    } else {
      out[i] = {std::cos(t), std::sin(t)};
    }
  }
}

}  // namespace

Spectrum forward(const ScalarField& f) {
  const int n = f.grid().n;
  const Plans& p = plans_for(n);
  Workspace& ws = workspace();
  ws.ensure(n);
  std::memcpy(ws.r, f.data().data(), sizeof(double) * f.grid().size());
  fftw_execute_dft_r2c(p.r2c, ws.r, ws.c);
  Spectrum s(f.grid());
  const double scale = 1.0 / static_cast<double>(f.grid().size());
  const std::size_t m = s.c.size();
  for (std::size_t i = 0; i < m; ++i) {
    s.c[i] = {ws.c[i][0] * scale, ws.c[i][1] * scale};
  }
  return s;
}

void inverse_into(const Spectrum& s, std::span<double> out) {
  const int n = s.grid.n;
  const Plans& p = plans_for(n);
  Workspace& ws = workspace();
  ws.ensure(n);
  const std::size_t m = s.c.size();
  for (std::size_t i = 0; i < m; ++i) {
    ws.c[i][0] = s.c[i].real();
    ws.c[i][1] = s.c[i].imag();
  }
  fftw_execute_dft_c2r(p.c2r, ws.c, ws.r);
  std::memcpy(out.data(), ws.r, sizeof(double) * s.grid.size());
}

ScalarField inverse(const Spectrum& s) {
  ScalarField f(s.grid);
  inverse_into(s, f.data());
  return f;
}

void shifted_into(const Spectrum& s, const Vec3& shift, std::span<double> out) {
  const int n = s.grid.n;
  const double kb = 2.0 * std::numbers::pi / s.grid.length;
  const Plans& p = plans_for(n);
  Workspace& ws = workspace();
  ws.ensure(n);

  thread_local std::vector<std::complex<double>> tx, ty, tz;
  phase_table(n, kb, shift[0], s.nx_half(), tx);
  phase_table(n, kb, shift[1], static_cast<std::size_t>(n), ty);
  phase_table(n, kb, shift[2], static_cast<std::size_t>(n), tz);

  const std::size_t nxh = s.nx_half();
  for (int iz = 0; iz < n; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      const std::complex<double> pyz = ty[iy] * tz[iz];
      const std::size_t base = nxh * (iy + static_cast<std::size_t>(n) * iz);
      for (std::size_t ix = 0; ix < nxh; ++ix) {
        const std::complex<double> v = s.c[base + ix] * (pyz * tx[ix]);
        ws.c[base + ix][0] = v.real();
        ws.c[base + ix][1] = v.imag();
      }
    }
  }
  fftw_execute_dft_c2r(p.c2r, ws.c, ws.r);
  std::memcpy(out.data(), ws.r, sizeof(double) * s.grid.size());
}

void shifted_combo_into(const Spectrum& s0, const Spectrum& s1, const Spectrum& s2,
                        const Vec3& w, const Vec3& shift, std::span<double> out) {
  const int n = s0.grid.n;
  const double kb = 2.0 * std::numbers::pi / s0.grid.length;
  const Plans& p = plans_for(n);
  Workspace& ws = workspace();
  ws.ensure(n);

  thread_local std::vector<std::complex<double>> tx, ty, tz;
  phase_table(n, kb, shift[0], s0.nx_half(), tx);
  phase_table(n, kb, shift[1], static_cast<std::size_t>(n), ty);
  phase_table(n, kb, shift[2], static_cast<std::size_t>(n), tz);

  const std::size_t nxh = s0.nx_half();
  for (int iz = 0; iz < n; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      const std::complex<double> pyz = ty[iy] * tz[iz];
      const std::size_t base = nxh * (iy + static_cast<std::size_t>(n) * iz);
      for (std::size_t ix = 0; ix < nxh; ++ix) {
        const std::complex<double> m =
            w[0] * s0.c[base + ix] + w[1] * s1.c[base + ix] + w[2] * s2.c[base + ix];
        const std::complex<double> v = m * (pyz * tx[ix]);
        ws.c[base + ix][0] = v.real();
        ws.c[base + ix][1] = v.imag();
      }
    }
  }
  fftw_execute_dft_c2r(p.c2r, ws.c, ws.r);
  std::memcpy(out.data(), ws.r, sizeof(double) * s0.grid.size());
}

}  // namespace yaglom::fft
