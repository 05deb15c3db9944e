#include <doctest.h>

#include "yaglom/catalog.hpp"
#include "yaglom/synth.hpp"
#include "yaglom/systems.hpp"

using namespace yaglom;

TEST_SUITE("catalog") {
  TEST_CASE("all laws are present") {
    const char* ids[] = {"EULER_ENERGY",   "TEMP",          "ELSASSER_PLUS", "ELSASSER_MINUS",
                         "MHD_ENERGY",     "MHD_CROSS",     "HELICITY",      "OLDROYD",
                         "LERAY_ALPHA",    "EULER_ALPHA",   "MOD_LERAY_ALPHA",
                         "CLARK_ALPHA",    "LERAY_MHD_ENERGY", "LERAY_MHD_CROSS"};
    CHECK(catalog().size() == 14);
    for (const char* id : ids) CHECK_NOTHROW(catalog_entry(id));
    CHECK_THROWS_AS(catalog_entry("NOPE"), config_error);
  }

  TEST_CASE("structural law sigma = -4c holds exactly") {
    for (const auto& e : catalog()) {
      for (const auto& t : e.terms) {
        CHECK(t.sigma.q == t.c.q.times(-4));
        CHECK(t.sigma.alpha_pow == t.c.alpha_pow);
        CHECK(t.c.q.num != 0);
      }
    }
  }

  TEST_CASE("published coefficients") {
    const auto& temp = catalog_entry("TEMP");
    REQUIRE(temp.terms.size() == 1);
    CHECK(temp.terms[0].c.value(0.0) == -0.25);
    CHECK(temp.terms[0].sigma.value(0.0) == 1.0);

    const auto& me = catalog_entry("MHD_ENERGY");
    REQUIRE(me.terms.size() == 3);
    CHECK(me.terms[0].c.value(0.0) == -0.25);
    CHECK(me.terms[1].c.value(0.0) == -0.25);
    CHECK(me.terms[2].c.value(0.0) == 0.5);
    CHECK(me.terms[2].sigma.value(0.0) == -2.0);

    const auto& mc = catalog_entry("MHD_CROSS");
    REQUIRE(mc.terms.size() == 3);
    CHECK(mc.terms[0].c.value(0.0) == -0.5);
    CHECK(mc.terms[1].c.value(0.0) == 0.25);
    CHECK(mc.terms[2].c.value(0.0) == 0.25);

    const auto& he = catalog_entry("HELICITY");
    REQUIRE(he.terms.size() == 2);
    CHECK(he.terms[0].c.value(0.0) == -0.5);
    CHECK(he.terms[1].c.value(0.0) == 0.25);

    // alpha-weighted coefficients vanish at alpha = 0 and scale as alpha^2
    const auto& ea = catalog_entry("EULER_ALPHA");
    REQUIRE(ea.terms.size() == 2);
    CHECK(ea.terms[1].c.value(0.0) == 0.0);
    CHECK(ea.terms[1].c.value(0.5) == doctest::Approx(-0.5 * 0.25));
    CHECK(ea.terms[1].sigma.value(0.5) == doctest::Approx(2.0 * 0.25));

    const auto& ca = catalog_entry("CLARK_ALPHA");
    REQUIRE(ca.terms.size() == 3);
    CHECK(ca.terms[1].kind == TermKind::clark_cross);
    CHECK(ca.terms[1].c.value(1.0) == -0.5);
    CHECK(ca.terms[2].c.value(1.0) == -0.25);
  }

  TEST_CASE("elsasser entries carry the proof-pairing note") {
    CHECK(!catalog_entry("ELSASSER_PLUS").notes.empty());
    CHECK(!catalog_entry("ELSASSER_MINUS").notes.empty());
    CHECK(!catalog_entry("MOD_LERAY_ALPHA").notes.empty());
  }

  TEST_CASE("field set slot typing") {
    PeriodicGrid g(8);
    FieldSet fs(g);
    fs.set("v", VectorField3(g));
    fs.set("theta", ScalarField(g));
    CHECK(fs.has("v"));
    CHECK_THROWS_AS(fs.scalar("v"), config_error);
    CHECK_THROWS_AS(fs.vector("missing"), config_error);
    CHECK_THROWS_AS(fs.set("other", ScalarField(PeriodicGrid(16))), config_error);
  }

  TEST_CASE("slot resolution derives omega, u and the elsasser pair") {
    PeriodicGrid g(16);

    FieldSet fs(g);
    fs.set("v", abc_flow(g, 1.0, 1.0, 1.0));
    resolve_slots(catalog_entry("HELICITY"), fs);
    CHECK(fs.has("omega"));  // curl of ABC = ABC
    for (int c = 0; c < 3; ++c) {
      double m = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        m = std::max(m, std::abs(fs.vector("omega")[c].data()[i] - fs.vector("v")[c].data()[i]));
      }
      CHECK(m < 1e-12);
    }

    FieldSet mhd(g);
    mhd.set("v", abc_flow(g, 1, 0, 0));
    mhd.set("b", abc_flow(g, 0, 1, 0));
    resolve_slots(catalog_entry("ELSASSER_PLUS"), mhd);
    CHECK(mhd.has("u"));
    CHECK(mhd.has("h"));

    FieldSet la(g, 0.2);
    la.set("v", abc_flow(g, 1, 1, 1));
    resolve_slots(catalog_entry("LERAY_ALPHA"), la);
    CHECK(la.has("u"));

    FieldSet missing(g);
    missing.set("theta", ScalarField(g));
    CHECK_THROWS_AS(resolve_slots(catalog_entry("TEMP"), missing), config_error);
  }

  TEST_CASE("rational arithmetic") {
    Rational r(2, -4);
    CHECK(r.num == -1);
    CHECK(r.den == 2);
    CHECK(r.times(-4) == Rational(2, 1));
    CHECK_THROWS_AS(Rational(1, 0), config_error);
  }
}
