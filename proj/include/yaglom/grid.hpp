#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "yaglom/errors.hpp"
#include "yaglom/vec3.hpp"

namespace yaglom {

// Uniform periodic lattice on the cube [0, length)^3, x-fastest storage.
struct PeriodicGrid {
  int n = 0;
  double length = 2.0 * std::numbers::pi;

  PeriodicGrid() = default;
  PeriodicGrid(int n_, double length_ = 2.0 * std::numbers::pi) : n(n_), length(length_) {
    if (n < 4 || n % 2 != 0) throw config_error("grid: n must be even and >= 4");
    if (!(length > 0.0)) throw config_error("grid: length must be positive");
  }

  double spacing() const { return length / n; }
  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
  // 2/3-rule band limit: modes with any |k| component or modulus above this vanish
  int max_mode() const { return n / 3; }
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(n) * (j + static_cast<std::size_t>(n) * k);
  }
  bool operator==(const PeriodicGrid&) const = default;
};

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const PeriodicGrid& g) : grid_(g), data_(g.size(), 0.0) {}
  ScalarField(const PeriodicGrid& g, std::vector<double> data) : grid_(g), data_(std::move(data)) {
    if (data_.size() != g.size()) throw config_error("scalar field: data length != n^3");
  }

  const PeriodicGrid& grid() const { return grid_; }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }
  double at(int i, int j, int k) const { return data_[grid_.index(i, j, k)]; }
  double& at(int i, int j, int k) { return data_[grid_.index(i, j, k)]; }

  static ScalarField sample(const PeriodicGrid& g,
                            const std::function<double(double, double, double)>& f);

 private:
  PeriodicGrid grid_;
  std::vector<double> data_;
};

struct VectorField3 {
  VectorField3() = default;
  explicit VectorField3(const PeriodicGrid& g) : comp{ScalarField(g), ScalarField(g), ScalarField(g)} {}
  VectorField3(ScalarField x, ScalarField y, ScalarField z);

  std::array<ScalarField, 3> comp;
  const PeriodicGrid& grid() const { return comp[0].grid(); }
  const ScalarField& operator[](int i) const { return comp[i]; }
  ScalarField& operator[](int i) { return comp[i]; }
};

// Symmetric tensor, component order xx, yy, zz, xy, xz, yz.
struct SymTensorField3 {
  enum Index { XX = 0, YY = 1, ZZ = 2, XY = 3, XZ = 4, YZ = 5 };

  SymTensorField3() = default;
  explicit SymTensorField3(const PeriodicGrid& g)
      : comp{ScalarField(g), ScalarField(g), ScalarField(g),
             ScalarField(g), ScalarField(g), ScalarField(g)} {}

  std::array<ScalarField, 6> comp;
  const PeriodicGrid& grid() const { return comp[0].grid(); }
  const ScalarField& operator[](int i) const { return comp[i]; }
  ScalarField& operator[](int i) { return comp[i]; }

  // Frobenius pairing weights: off-diagonal components count twice.
  static constexpr std::array<double, 6> pair_weight{1.0, 1.0, 1.0, 2.0, 2.0, 2.0};
};

// --- exact spectral operators -------------------------------------------------

ScalarField spectral_derivative(const ScalarField& f, int axis);
ScalarField divergence(const VectorField3& v);
VectorField3 curl(const VectorField3& v);
VectorField3 project_divfree(const VectorField3& v);
VectorField3 helmholtz_filter(const VectorField3& v, double alpha);
VectorField3 gradient(const ScalarField& f);

// Zeros every mode with any wavenumber component above kmax.
ScalarField dealias_truncate(const ScalarField& f, int kmax);
bool is_band_limited(const ScalarField& f, int kmax, double tol = 1e-12);

// --- small field helpers ------------------------------------------------------

double field_mean(const ScalarField& f);
double field_linf(const ScalarField& f);
double field_l2(const ScalarField& f);  // sqrt(mean f^2)
double max_abs_divergence(const VectorField3& v);

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);
VectorField3 operator+(const VectorField3& a, const VectorField3& b);
VectorField3 operator-(const VectorField3& a, const VectorField3& b);
VectorField3 operator*(double s, const VectorField3& a);

}  // namespace yaglom
