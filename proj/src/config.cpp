#include "yaglom/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "yaglom/sha256.hpp"

namespace yaglom {

using nlohmann::json;

namespace {

GeneratorSpec parse_generator(const json& j) {
  GeneratorSpec g;
  if (!j.contains("type")) throw config_error("generator spec needs a type");
  g.type = j.at("type").get<std::string>();
  g.A = j.value("A", 1.0);
  g.B = j.value("B", 1.0);
  g.C = j.value("C", 1.0);
  g.slope = j.value("slope", 5.0 / 3.0);
  g.k_min = j.value("k_min", 1);
  g.k_max = j.value("k_max", 0);
  g.seed = j.value("seed", std::uint64_t{0});
  g.amplitude = j.value("amplitude", 1.0);
  g.holder = j.value("holder", 1.0 / 3.0);
  g.source = j.value("source", std::string{});
  return g;
}

std::vector<double> parse_scales(const json& j, const char* what) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(v.get<double>());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] > 0.0)) throw config_error(std::string(what) + ": scales must be positive");
    if (i > 0 && !(out[i] > out[i - 1])) {
      throw config_error(std::string(what) + ": scales must increase strictly");
    }
  }
  return out;
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw io_error("cannot open config: " + path);
  std::stringstream ss;
  ss << is.rdbuf();

  RunConfig c;
  c.config_path = path;
  c.raw_text = ss.str();
  c.config_hash = sha256_hex(c.raw_text);

  json j;
  try {
    j = json::parse(c.raw_text);
  } catch (const json::exception& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }

  try {
    if (j.contains("grid")) {
      c.n = j["grid"].value("n", c.n);
      c.length = j["grid"].value("length", c.length);
    }
    if (j.contains("mollifier")) {
      c.profile = j["mollifier"].value("profile", c.profile);
      c.radial_count = j["mollifier"].value("radial_count", c.radial_count);
    }
    if (j.contains("sphere")) c.sphere_count = j["sphere"].value("count", c.sphere_count);
    if (j.contains("sweeps")) {
      if (j["sweeps"].contains("epsilons")) c.epsilons = parse_scales(j["sweeps"]["epsilons"], "epsilons");
      if (j["sweeps"].contains("lambdas")) c.lambdas = parse_scales(j["sweeps"]["lambdas"], "lambdas");
    }
    if (j.contains("functional")) {
      const auto& f = j["functional"];
      c.entry_id = f.value("id", std::string{});
      c.alpha = f.value("alpha", 0.0);
      if (f.contains("slots")) {
        for (const auto& [name, sj] : f["slots"].items()) {
          SlotConfig sc;
          if (sj.contains("file")) sc.file = sj["file"].get<std::string>();
          if (sj.contains("generator")) sc.generator = parse_generator(sj["generator"]);
          if (sc.file.empty() && !sc.generator) {
            throw config_error("slot '" + name + "' needs a file or a generator");
          }
          c.slots.emplace(name, std::move(sc));
        }
      }
    }
    if (j.contains("solver")) {
      const auto& s = j["solver"];
      c.dt = s.value("dt", c.dt);
      c.steps = s.value("steps", c.steps);
      c.stride = s.value("stride", c.stride);
      c.dealias = s.value("dealias", c.dealias);
    }
    if (j.contains("exponents")) {
      const auto& e = j["exponents"];
      c.p1 = e.value("p1", c.p1);
      c.p2 = e.value("p2", c.p2);
      c.r1 = e.value("r1", c.r1);
      c.r2 = e.value("r2", c.r2);
      c.slot1 = e.value("slot1", c.slot1);
      c.slot2 = e.value("slot2", c.slot2);
      if (e.contains("lambdas")) c.exp_lambdas = parse_scales(e["lambdas"], "exponent lambdas");
    }
    if (j.contains("output")) {
      c.out_dir = j["output"].value("directory", c.out_dir);
      if (j["output"].contains("formats")) {
        c.formats.clear();
        for (const auto& f : j["output"]["formats"]) c.formats.push_back(f.get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw config_error(std::string("config field error: ") + e.what());
  }

  c.validate();
  return c;
}

void RunConfig::override_seed(std::uint64_t seed) {
  for (auto& [name, slot] : slots) {
    if (slot.generator) slot.generator->seed = seed;
  }
}

void RunConfig::validate() const {
  if (n < 4 || n % 2 != 0) throw config_error("grid.n must be even and >= 4");
  if (!(length > 0.0)) throw config_error("grid.length must be positive");
  if (profile != "standard_bump" && profile != "quartic_bump") {
    throw config_error("mollifier.profile must be standard_bump or quartic_bump");
  }
  if (radial_count < 4) throw config_error("mollifier.radial_count must be >= 4");
  if (sphere_count < 6 || sphere_count % 2 != 0) {
    throw config_error("sphere.count must be even and >= 6");
  }
  const double half = 0.5 * length;
  for (double e : epsilons) {
    if (!(e < half)) throw config_error("sweeps.epsilons must stay below length/2");
  }
  for (double l : lambdas) {
    if (!(l < half)) throw config_error("sweeps.lambdas must stay below length/2");
  }
  for (double l : exp_lambdas) {
    if (!(l < half)) throw config_error("exponents.lambdas must stay below length/2");
  }
  if (!(dt > 0.0)) throw config_error("solver.dt must be positive");
  if (steps < 1 || stride < 1) throw config_error("solver.steps and stride must be >= 1");
  if (!(dealias > 0.0) || dealias > 1.0) throw config_error("solver.dealias must lie in (0,1]");
  for (const auto& [name, slot] : slots) {
    if (slot.generator) {
      const auto& g = *slot.generator;
      static const char* known[] = {"abc",
                                    "taylor_green",
                                    "gaussian_scalar",
                                    "gaussian_divfree",
                                    "fractional_scalar",
                                    "fractional_divfree",
                                    "curl_of",
                                    "helmholtz_of",
                                    "strain_of"};
      bool ok = false;
      for (const char* k : known) ok |= g.type == k;
      if (!ok) throw config_error("slot '" + name + "': unknown generator type " + g.type);
      if (g.k_max > n / 3) {
        throw config_error("slot '" + name + "': generator band exceeds the n/3 limit");
      }
      if ((g.type == "curl_of" || g.type == "helmholtz_of" || g.type == "strain_of") &&
          g.source.empty()) {
        throw config_error("slot '" + name + "': derived generator needs a source");
      }
    }
  }
}

}  // namespace yaglom
