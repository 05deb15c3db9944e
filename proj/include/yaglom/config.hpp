#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "yaglom/errors.hpp"

namespace yaglom {

struct GeneratorSpec {
  std::string type;  // abc | taylor_green | gaussian_scalar | gaussian_divfree |
                     // fractional_scalar | fractional_divfree | curl_of |
                     // helmholtz_of | strain_of
  double A = 1.0, B = 1.0, C = 1.0;
  double slope = 5.0 / 3.0;
  int k_min = 1;
  int k_max = 0;
  std::uint64_t seed = 0;
  double amplitude = 1.0;
  double holder = 1.0 / 3.0;
  std::string source;  // referenced slot for the derived types
};

struct SlotConfig {
  std::string file;  // either a field file path ...
  std::optional<GeneratorSpec> generator;  // ... or a generator recipe
};

struct RunConfig {
  // grid
  int n = 32;
  double length = 6.283185307179586476925286766559;
  // mollifier + quadrature
  std::string profile = "standard_bump";
  int radial_count = 32;
  int sphere_count = 48;
  // sweeps
  std::vector<double> epsilons;
  std::vector<double> lambdas;
  // functional
  std::string entry_id;
  double alpha = 0.0;
  std::map<std::string, SlotConfig> slots;
  // solver
  double dt = 0.01;
  int steps = 100;
  int stride = 5;
  double dealias = 2.0 / 3.0;
  // exponent estimation
  double p1 = 4.5, p2 = 1.8;
  double r1 = 3.0, r2 = 3.0;
  std::string slot1 = "v", slot2 = "omega";
  std::vector<double> exp_lambdas;
  // output
  std::string out_dir = "out";
  std::vector<std::string> formats{"json", "csv"};

  std::string config_path;
  std::string config_hash;
  std::string raw_text;  // original file contents (embedded in reports)

  void override_seed(std::uint64_t seed);
  void validate() const;  // throws config_error
};

RunConfig load_config(const std::string& path);

}  // namespace yaglom
