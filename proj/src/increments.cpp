#include "yaglom/increments.hpp"

#include <cmath>

#include "yaglom/parallel.hpp"

namespace yaglom {

void trilinear_shift(const PeriodicGrid& g, std::span<const double> samples, const Vec3& l,
                     std::span<double> out) {
  const int n = g.n;
  const double h = g.spacing();
  // Offsets in grid units, wrapped to [0, n).
  double u[3];
  int base[3];
  double frac[3];
  for (int a = 0; a < 3; ++a) {
    u[a] = l[a] / h;
    double w = std::fmod(u[a], static_cast<double>(n));
    if (w < 0) w += n;
    base[a] = static_cast<int>(std::floor(w)) % n;
    frac[a] = w - std::floor(w);
  }
  auto wrap = [n](int i) { return i >= n ? i - n : i; };
  par::parallel_for(g.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t idx = lo; idx < hi; ++idx) {
      const int i = static_cast<int>(idx % n);
      const int j = static_cast<int>((idx / n) % n);
      const int k = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
      const int i0 = wrap(i + base[0]), i1 = wrap(i0 + 1);
      const int j0 = wrap(j + base[1]), j1 = wrap(j0 + 1);
      const int k0 = wrap(k + base[2]), k1 = wrap(k0 + 1);
      const double fx = frac[0], fy = frac[1], fz = frac[2];
      auto s = [&](int ii, int jj, int kk) { return samples[g.index(ii, jj, kk)]; };
      const double c00 = s(i0, j0, k0) * (1 - fx) + s(i1, j0, k0) * fx;
      const double c10 = s(i0, j1, k0) * (1 - fx) + s(i1, j1, k0) * fx;
      const double c01 = s(i0, j0, k1) * (1 - fx) + s(i1, j0, k1) * fx;
      const double c11 = s(i0, j1, k1) * (1 - fx) + s(i1, j1, k1) * fx;
      const double c0 = c00 * (1 - fy) + c10 * fy;
      const double c1 = c01 * (1 - fy) + c11 * fy;
      out[idx] = c0 * (1 - fz) + c1 * fz;
    }
  });
}

ShiftEngine::ShiftEngine(const PeriodicGrid& g, ShiftMethod method) : grid_(g), method_(method) {}

int ShiftEngine::add(const ScalarField& f) {
  if (!(f.grid() == grid_)) throw config_error("shift engine: grid mismatch");
  base_.emplace_back(f.data().begin(), f.data().end());
  if (method_ == ShiftMethod::fourier_phase) {
    spectra_.push_back(fft::forward(f));
  }
  return static_cast<int>(base_.size()) - 1;
}

void ShiftEngine::shift_into(int id, const Vec3& l, std::span<double> out) const {
  if (method_ == ShiftMethod::fourier_phase) {
    fft::shifted_into(spectra_[id], l, out);
  } else {
    trilinear_shift(grid_, base_[id], l, out);
  }
}

void ShiftEngine::shift_combo_into(const std::array<int, 3>& ids, const Vec3& w, const Vec3& l,
                                   std::span<double> out) const {
  if (method_ == ShiftMethod::fourier_phase) {
    fft::shifted_combo_into(spectra_[ids[0]], spectra_[ids[1]], spectra_[ids[2]], w, l, out);
    return;
  }
  std::vector<double> tmp(grid_.size());
  trilinear_shift(grid_, base_[ids[0]], l, out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= w[0];
  for (int c = 1; c < 3; ++c) {
    trilinear_shift(grid_, base_[ids[c]], l, tmp);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w[c] * tmp[i];
  }
}

ScalarField shifted(const ScalarField& f, const Vec3& l, ShiftMethod m) {
  ScalarField out(f.grid());
  if (m == ShiftMethod::fourier_phase) {
    fft::shifted_into(fft::forward(f), l, out.data());
  } else {
    trilinear_shift(f.grid(), f.data(), l, out.data());
  }
  return out;
}

VectorField3 shifted(const VectorField3& f, const Vec3& l, ShiftMethod m) {
  return VectorField3(shifted(f[0], l, m), shifted(f[1], l, m), shifted(f[2], l, m));
}

SymTensorField3 shifted(const SymTensorField3& f, const Vec3& l, ShiftMethod m) {
  SymTensorField3 out(f.grid());
  for (int c = 0; c < 6; ++c) out[c] = shifted(f[c], l, m);
  return out;
}

ScalarField increment(const ScalarField& f, const Vec3& l, ShiftMethod m) {
  if (l[0] == 0.0 && l[1] == 0.0 && l[2] == 0.0) return ScalarField(f.grid());
  return shifted(f, l, m) - f;
}

VectorField3 increment(const VectorField3& f, const Vec3& l, ShiftMethod m) {
  return VectorField3(increment(f[0], l, m), increment(f[1], l, m), increment(f[2], l, m));
}

SymTensorField3 increment(const SymTensorField3& f, const Vec3& l, ShiftMethod m) {
  SymTensorField3 out(f.grid());
  for (int c = 0; c < 6; ++c) out[c] = increment(f[c], l, m);
  return out;
}

ScalarField longitudinal(const VectorField3& v, const Vec3& l, ShiftMethod m) {
  const double r = norm(l);
  if (r == 0.0) throw config_error("longitudinal: displacement must be nonzero");
  const Vec3 d = scaled(l, 1.0 / r);
  VectorField3 dv = increment(v, l, m);
  ScalarField out(v.grid());
  auto o = out.data();
  auto x = dv[0].data(), y = dv[1].data(), z = dv[2].data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = d[0] * x[i] + d[1] * y[i] + d[2] * z[i];
  return out;
}

}  // namespace yaglom
