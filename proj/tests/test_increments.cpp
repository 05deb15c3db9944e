#include <doctest.h>

#include <cmath>

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

ScalarField cyclic_shift(const ScalarField& f, int di, int dj, int dk) {
  const PeriodicGrid& g = f.grid();
  ScalarField out(g);
  for (int k = 0; k < g.n; ++k) {
    for (int j = 0; j < g.n; ++j) {
      for (int i = 0; i < g.n; ++i) {
        out.at(i, j, k) = f.at((i + di) % g.n, (j + dj) % g.n, (k + dk) % g.n);
      }
    }
  }
  return out;
}

ScalarField band_limited(const PeriodicGrid& g, std::uint64_t seed) {
  SpectrumSpec spec;
  spec.slope = 1.5;
  spec.seed = seed;
  spec.k_max = g.max_mode();
  return gaussian_scalar(g, spec);
}

}  // namespace

TEST_SUITE("increments") {
  TEST_CASE("zero shift is the identity") {
    PeriodicGrid g(16);
    ScalarField f = band_limited(g, 3);
    for (auto m : {ShiftMethod::fourier_phase, ShiftMethod::trilinear}) {
      CHECK(max_diff(shifted(f, {0, 0, 0}, m), f) < 1e-13);
      CHECK(field_linf(increment(f, {0, 0, 0}, m)) == 0.0);
    }
  }

  TEST_CASE("lattice-aligned shifts match cyclic indexing in both methods") {
    PeriodicGrid g(16);
    ScalarField f = band_limited(g, 5);
    const double h = g.spacing();
    const Vec3 l{h, 2 * h, 0.0};
    ScalarField expect = cyclic_shift(f, 1, 2, 0);
    CHECK(max_diff(shifted(f, l, ShiftMethod::fourier_phase), expect) < 1e-12);
    CHECK(max_diff(shifted(f, l, ShiftMethod::trilinear), expect) < 1e-12);
  }

  TEST_CASE("single-mode phase shift is exact") {
    PeriodicGrid g(32);
    auto f = ScalarField::sample(g, [](double x, double, double) { return std::sin(x); });
    const double a = 0.37;
    auto expect = ScalarField::sample(g, [&](double x, double, double) { return std::sin(x + a); });
    CHECK(max_diff(shifted(f, {a, 0, 0}), expect) < 1e-12);
  }

  TEST_CASE("constant fields have zero increments") {
    PeriodicGrid g(8);
    ScalarField f(g);
    for (auto& v : f.data()) v = 2.5;
    CHECK(field_linf(increment(f, {0.3, 0.1, -0.2})) < 1e-13);
  }

  TEST_CASE("increment antisymmetry under l -> -l") {
    // increment(f, l) at x equals -increment(f, -l) at x + l
    PeriodicGrid g(32);
    ScalarField f = band_limited(g, 9);
    const Vec3 l{0.21, -0.13, 0.4};
    ScalarField lhs = increment(f, l);
    ScalarField rhs = shifted(increment(f, negated(l)), l);
    ScalarField sum = lhs + rhs;
    CHECK(field_linf(sum) < 1e-12 * std::max(1.0, field_linf(lhs)));
  }

  TEST_CASE("half-period increment of a single mode") {
    PeriodicGrid g(16);
    auto f = ScalarField::sample(g, [](double x, double, double) { return std::sin(x); });
    ScalarField inc = increment(f, {std::numbers::pi, 0, 0});
    auto expect = ScalarField::sample(
        g, [](double x, double, double) { return -2.0 * std::sin(x); });
    CHECK(max_diff(inc, expect) < 1e-12);
  }

  TEST_CASE("increments are linear in the field") {
    PeriodicGrid g(16);
    ScalarField f = band_limited(g, 21);
    ScalarField h = band_limited(g, 22);
    const Vec3 l{0.11, 0.05, 0.3};
    ScalarField lhs = increment(f + h, l);
    ScalarField rhs = increment(f, l) + increment(h, l);
    CHECK(max_diff(lhs, rhs) < 1e-12);
  }

  TEST_CASE("longitudinal projection") {
    PeriodicGrid g(16);
    VectorField3 v{ScalarField::sample(g, [](double x, double, double) { return std::sin(x); }),
                   ScalarField(g), ScalarField(g)};
    const double a = 0.45;
    ScalarField lon = longitudinal(v, {a, 0, 0});
    auto expect = ScalarField::sample(
        g, [&](double x, double, double) { return std::sin(x + a) - std::sin(x); });
    CHECK(max_diff(lon, expect) < 1e-12);

    // transverse-only field projects to zero
    VectorField3 t{ScalarField(g),
                   ScalarField::sample(g, [](double x, double, double) { return std::cos(x); }),
                   ScalarField(g)};
    CHECK(field_linf(longitudinal(t, {a, 0, 0})) < 1e-13);

    CHECK_THROWS_AS(longitudinal(v, {0, 0, 0}), config_error);
  }

  TEST_CASE("smooth-field increments scale linearly at small l") {
    PeriodicGrid g(32);
    auto f = ScalarField::sample(g, [](double x, double, double) { return std::sin(x); });
    double prev_ratio = 0.0;
    for (double a : {0.2, 0.1, 0.05}) {
      const double m = field_linf(increment(f, {a, 0, 0}));
      const double ratio = m / a;
      CHECK(ratio < 1.0 + 1e-6);  // bounded by max |f'|
      CHECK(ratio > 0.9);
      prev_ratio = ratio;
    }
    CHECK(prev_ratio > 0.99);  // approaches max|f'| = 1
  }

  TEST_CASE("shift engine matches one-shot shifts and combos") {
    PeriodicGrid g(24);
    VectorField3 v{band_limited(g, 31), band_limited(g, 32), band_limited(g, 33)};
    ShiftEngine eng(g, ShiftMethod::fourier_phase);
    const int ix = eng.add(v[0]), iy = eng.add(v[1]), iz = eng.add(v[2]);
    const Vec3 l{0.17, -0.4, 0.09};

    std::vector<double> buf(g.size());
    eng.shift_into(iy, l, buf);
    CHECK(max_diff(ScalarField(g, buf), shifted(v[1], l)) < 1e-12);

    // longitudinal combo equals the pointwise dot of shifted components
    const Vec3 zeta = scaled(l, 1.0 / norm(l));
    eng.shift_combo_into({ix, iy, iz}, zeta, l, buf);
    VectorField3 sv = shifted(v, l);
    double worst = 0.0;
    for (std::size_t i = 0; i < buf.size(); ++i) {
      const double expect = zeta[0] * sv[0].data()[i] + zeta[1] * sv[1].data()[i] +
                            zeta[2] * sv[2].data()[i];
      worst = std::max(worst, std::abs(buf[i] - expect));
    }
    CHECK(worst < 1e-12);
  }

  TEST_CASE("trilinear shift is first-order accurate") {
    PeriodicGrid g(32);
    auto f = ScalarField::sample(g, [](double x, double y, double) {
      return std::sin(x) * std::cos(y);
    });
    const Vec3 half{0.5 * g.spacing(), 0.0, 0.0};
    ScalarField exact = shifted(f, half, ShiftMethod::fourier_phase);
    ScalarField approx = shifted(f, half, ShiftMethod::trilinear);
    const double err = max_diff(exact, approx);
    CHECK(err < 0.01);
    CHECK(err > 1e-8);  // genuinely interpolating, not snapping
  }
}
