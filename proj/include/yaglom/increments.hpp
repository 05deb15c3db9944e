#pragma once

#include <memory>
#include <span>
#include <vector>

#include "yaglom/fft.hpp"
#include "yaglom/grid.hpp"

namespace yaglom {

// fourier_phase is exact on band-limited fields; trilinear is first order and
// meant for ingested data where spectral ringing is unacceptable.
enum class ShiftMethod { fourier_phase, trilinear };

ScalarField shifted(const ScalarField& f, const Vec3& l, ShiftMethod m = ShiftMethod::fourier_phase);
VectorField3 shifted(const VectorField3& f, const Vec3& l, ShiftMethod m = ShiftMethod::fourier_phase);
SymTensorField3 shifted(const SymTensorField3& f, const Vec3& l, ShiftMethod m = ShiftMethod::fourier_phase);

ScalarField increment(const ScalarField& f, const Vec3& l, ShiftMethod m = ShiftMethod::fourier_phase);
VectorField3 increment(const VectorField3& f, const Vec3& l, ShiftMethod m = ShiftMethod::fourier_phase);
SymTensorField3 increment(const SymTensorField3& f, const Vec3& l, ShiftMethod m = ShiftMethod::fourier_phase);

// increment(v, l) . l/|l|; throws config_error for l = 0.
ScalarField longitudinal(const VectorField3& v, const Vec3& l, ShiftMethod m = ShiftMethod::fourier_phase);

// Batched shift evaluation: one forward transform per registered component,
// shared across every displacement. Components are identified by the id
// returned from add(). Base samples are copied so the engine owns its inputs.
class ShiftEngine {
 public:
  ShiftEngine(const PeriodicGrid& g, ShiftMethod method);

  int add(const ScalarField& f);
  const PeriodicGrid& grid() const { return grid_; }
  ShiftMethod method() const { return method_; }

  std::span<const double> base(int id) const { return base_[id]; }
  // out[x] = f_id(x + l)
  void shift_into(int id, const Vec3& l, std::span<double> out) const;
  // out[x] = sum_i w[i] f_{ids[i]}(x + l)  (single transform under fourier_phase)
  void shift_combo_into(const std::array<int, 3>& ids, const Vec3& w, const Vec3& l,
                        std::span<double> out) const;

 private:
  PeriodicGrid grid_;
  ShiftMethod method_;
  std::vector<std::vector<double>> base_;
  std::vector<fft::Spectrum> spectra_;  // empty when trilinear
};

// Periodic trilinear interpolation of samples at x + l (helper for trilinear mode).
void trilinear_shift(const PeriodicGrid& g, std::span<const double> samples, const Vec3& l,
                     std::span<double> out);

}  // namespace yaglom
