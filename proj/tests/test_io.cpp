#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "yaglom/config.hpp"
#include "yaglom/field_io.hpp"
#include "yaglom/sha256.hpp"
#include "yaglom/synth.hpp"
#include "yaglom/systems.hpp"

using namespace yaglom;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("yaglom_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("scalar round trip is bit exact") {
    TempDir td;
    PeriodicGrid g(16);
    ScalarField f = fractional_scalar(g, 0.5, 9);
    write_field(td.file("s.ygf"), f);
    LoadedField lf = read_field(td.file("s.ygf"));
    CHECK(lf.ncomp == 1);
    CHECK(lf.grid == g);
    ScalarField back = lf.as_scalar();
    for (std::size_t i = 0; i < f.data().size(); ++i) CHECK(back.data()[i] == f.data()[i]);
  }

  TEST_CASE("vector and tensor round trips") {
    TempDir td;
    PeriodicGrid g(12);
    VectorField3 v = abc_flow(g, 1, 2, 3);
    write_field(td.file("v.ygf"), v);
    LoadedField lv = read_field(td.file("v.ygf"));
    CHECK(lv.ncomp == 3);
    VectorField3 vb = lv.as_vector();
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(vb[c].data()[i] == v[c].data()[i]);
      }
    }
    CHECK_THROWS_AS(lv.as_scalar(), io_error);

    SymTensorField3 t = strain(v);
    write_field(td.file("t.ygf"), t);
    LoadedField lt = read_field(td.file("t.ygf"));
    CHECK(lt.ncomp == 6);
    SymTensorField3 tb = lt.as_tensor();
    for (int c = 0; c < 6; ++c) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(tb[c].data()[i] == t[c].data()[i]);
      }
    }
  }

  TEST_CASE("corrupt files are rejected") {
    TempDir td;
    PeriodicGrid g(8);
    write_field(td.file("f.ygf"), ScalarField(g));

    // wrong magic
    {
      std::fstream fs(td.file("f.ygf"), std::ios::in | std::ios::out | std::ios::binary);
      fs.write("XXXX", 4);
    }
    CHECK_THROWS_AS(read_field(td.file("f.ygf")), io_error);

    // truncated payload
    write_field(td.file("g.ygf"), ScalarField(g));
    std::filesystem::resize_file(td.file("g.ygf"), 100);
    CHECK_THROWS_AS(read_field(td.file("g.ygf")), io_error);

    // oversized payload
    write_field(td.file("h.ygf"), ScalarField(g));
    {
      std::ofstream fs(td.file("h.ygf"), std::ios::app | std::ios::binary);
      double extra = 1.0;
      fs.write(reinterpret_cast<const char*>(&extra), 8);
    }
    CHECK_THROWS_AS(read_field(td.file("h.ygf")), io_error);

    CHECK_THROWS_AS(read_field(td.file("missing.ygf")), io_error);
  }

  TEST_CASE("sha256 known answers") {
    CHECK(sha256_hex(std::string{}) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex(std::string{"abc"}) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("config parsing and validation") {
    TempDir td;
    const char* good = R"({
      "grid": {"n": 16},
      "sphere": {"count": 16},
      "sweeps": {"epsilons": [0.4, 0.8], "lambdas": [0.2, 0.4]},
      "functional": {"id": "TEMP", "slots": {
        "v": {"generator": {"type": "taylor_green"}},
        "theta": {"generator": {"type": "gaussian_scalar", "seed": 3, "k_max": 5}}
      }}
    })";
    {
      std::ofstream os(td.file("ok.json"));
      os << good;
    }
    RunConfig cfg = load_config(td.file("ok.json"));
    CHECK(cfg.n == 16);
    CHECK(cfg.entry_id == "TEMP");
    CHECK(cfg.slots.size() == 2);
    CHECK(cfg.config_hash.size() == 64);

    cfg.override_seed(99);
    CHECK(cfg.slots.at("theta").generator->seed == 99);

    auto expect_bad = [&](const std::string& text) {
      std::ofstream os(td.file("bad.json"));
      os << text;
      os.close();
      CHECK_THROWS_AS(load_config(td.file("bad.json")), config_error);
    };
    expect_bad("not json at all");
    expect_bad(R"({"grid": {"n": 15}})");
    expect_bad(R"({"sphere": {"count": 7}})");
    expect_bad(R"({"grid": {"n": 16}, "sweeps": {"epsilons": [9.0]}})");
    expect_bad(R"({"functional": {"slots": {"v": {}}}})");
    expect_bad(R"({"functional": {"slots": {"v": {"generator": {"type": "nope"}}}}})");
    expect_bad(R"({"grid": {"n": 16},
                   "functional": {"slots": {"v": {"generator":
                     {"type": "gaussian_scalar", "k_max": 9}}}}})");

    CHECK_THROWS_AS(load_config(td.file("missing.json")), io_error);
  }
}
