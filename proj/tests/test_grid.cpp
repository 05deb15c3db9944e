#include <doctest.h>

#include <cmath>

#include "yaglom/fft.hpp"
#include "yaglom/grid.hpp"
#include "yaglom/increments.hpp"
#include "yaglom/synth.hpp"

using namespace yaglom;

namespace {

double max_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  }
  return m;
}

ScalarField random_band_limited(const PeriodicGrid& g, std::uint64_t seed) {
  SpectrumSpec spec;
  spec.slope = 2.0;
  spec.seed = seed;
  spec.k_max = g.max_mode();
  return gaussian_scalar(g, spec);
}

}  // namespace

TEST_SUITE("grid") {
  TEST_CASE("grid validation") {
    CHECK_THROWS_AS(PeriodicGrid(3), config_error);
    CHECK_THROWS_AS(PeriodicGrid(7), config_error);
    CHECK_THROWS_AS(PeriodicGrid(8, -1.0), config_error);
    PeriodicGrid g(8);
    CHECK(g.spacing() == doctest::Approx(2.0 * std::numbers::pi / 8));
    CHECK(g.size() == 512);
  }

  TEST_CASE("derivative of a single mode") {
    PeriodicGrid g(32);
    auto f = ScalarField::sample(g, [](double x, double, double) { return std::sin(x); });
    auto expect = ScalarField::sample(g, [](double x, double, double) { return std::cos(x); });
    CHECK(max_diff(spectral_derivative(f, 0), expect) < 1e-12);
  }

  TEST_CASE("derivative of a constant vanishes") {
    PeriodicGrid g(16);
    ScalarField f(g);
    for (auto& v : f.data()) v = 3.75;
    for (int axis = 0; axis < 3; ++axis) {
      CHECK(field_linf(spectral_derivative(f, axis)) < 1e-13);
    }
  }

  TEST_CASE("mixed partials commute on band-limited data") {
    PeriodicGrid g(32);
    ScalarField f = random_band_limited(g, 7);
    ScalarField dxy = spectral_derivative(spectral_derivative(f, 0), 1);
    ScalarField dyx = spectral_derivative(spectral_derivative(f, 1), 0);
    CHECK(max_diff(dxy, dyx) < 1e-12);
  }

  TEST_CASE("divergence of shear flow is zero") {
    PeriodicGrid g(16);
    VectorField3 v{ScalarField::sample(g, [](double, double y, double) { return std::sin(y); }),
                   ScalarField(g), ScalarField(g)};
    CHECK(field_linf(divergence(v)) < 1e-13);
  }

  TEST_CASE("divergence of a gradient is the laplacian") {
    PeriodicGrid g(16);
    auto f = ScalarField::sample(
        g, [](double x, double y, double z) { return std::sin(x) * std::sin(y) * std::sin(z); });
    VectorField3 grad = gradient(f);
    auto expect = ScalarField::sample(g, [](double x, double y, double z) {
      return -3.0 * std::sin(x) * std::sin(y) * std::sin(z);
    });
    CHECK(max_diff(divergence(grad), expect) < 1e-10);
  }

  TEST_CASE("curl basics") {
    PeriodicGrid g(16);
    VectorField3 v{ScalarField(g), ScalarField(g),
                   ScalarField::sample(g, [](double x, double, double) { return std::sin(x); })};
    VectorField3 c = curl(v);
    auto expect_y =
        ScalarField::sample(g, [](double x, double, double) { return -std::cos(x); });
    CHECK(field_linf(c[0]) < 1e-13);
    CHECK(max_diff(c[1], expect_y) < 1e-12);
    CHECK(field_linf(c[2]) < 1e-13);
    CHECK(field_linf(divergence(c)) < 1e-12);
  }

  TEST_CASE("ABC flow is Beltrami") {
    PeriodicGrid g(24);
    VectorField3 v = abc_flow(g, 1.0, 1.0, 1.0);
    VectorField3 w = curl(v);
    for (int c = 0; c < 3; ++c) CHECK(max_diff(w[c], v[c]) < 1e-12);
  }

  TEST_CASE("curl of a constant field vanishes") {
    PeriodicGrid g(8);
    VectorField3 v(g);
    for (int c = 0; c < 3; ++c) {
      for (auto& x : v[c].data()) x = 1.0 + c;
    }
    VectorField3 w = curl(v);
    for (int c = 0; c < 3; ++c) CHECK(field_linf(w[c]) < 1e-14);
  }

  TEST_CASE("projection leaves solenoidal fields alone") {
    PeriodicGrid g(24);
    VectorField3 v = abc_flow(g, 1.0, -0.5, 0.25);
    VectorField3 p = project_divfree(v);
    for (int c = 0; c < 3; ++c) CHECK(max_diff(p[c], v[c]) < 1e-12);
  }

  TEST_CASE("projection kills pure gradients") {
    PeriodicGrid g(16);
    auto f = ScalarField::sample(
        g, [](double x, double y, double) { return std::sin(x) * std::cos(2 * y); });
    VectorField3 grad = gradient(f);
    VectorField3 p = project_divfree(grad);
    for (int c = 0; c < 3; ++c) CHECK(field_linf(p[c]) < 1e-12);
  }

  TEST_CASE("projection output is solenoidal and idempotent") {
    PeriodicGrid g(32);
    VectorField3 v{random_band_limited(g, 1), random_band_limited(g, 2),
                   random_band_limited(g, 3)};
    VectorField3 p = project_divfree(v);
    CHECK(max_abs_divergence(p) < 1e-12);
    VectorField3 pp = project_divfree(p);
    for (int c = 0; c < 3; ++c) CHECK(max_diff(pp[c], p[c]) < 1e-12);
  }

  TEST_CASE("transform round trip") {
    PeriodicGrid g(32);
    ScalarField f = random_band_limited(g, 11);
    ScalarField back = fft::inverse(fft::forward(f));
    double scale = field_linf(f);
    CHECK(max_diff(back, f) < 1e-12 * scale);
  }

  TEST_CASE("derivative commutes with lattice translation") {
    PeriodicGrid g(32);
    ScalarField f = random_band_limited(g, 13);
    const Vec3 cell{g.spacing(), 0.0, 0.0};
    ScalarField a = spectral_derivative(shifted(f, cell), 1);
    ScalarField b = shifted(spectral_derivative(f, 1), cell);
    CHECK(max_diff(a, b) < 1e-12 * std::max(1.0, field_linf(a)));
  }

  TEST_CASE("dealias truncation and band-limit check") {
    PeriodicGrid g(32);
    auto f = ScalarField::sample(
        g, [](double x, double, double) { return std::sin(13.0 * x) + std::sin(2.0 * x); });
    CHECK_FALSE(is_band_limited(f, g.max_mode()));
    ScalarField t = dealias_truncate(f, g.max_mode());
    CHECK(is_band_limited(t, g.max_mode()));
    auto expect = ScalarField::sample(g, [](double x, double, double) { return std::sin(2.0 * x); });
    CHECK(max_diff(t, expect) < 1e-12);
  }
}
