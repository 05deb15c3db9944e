#include "yaglom/driver.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "yaglom/field_io.hpp"
#include "yaglom/sha256.hpp"
#include "yaglom/solver.hpp"
#include "yaglom/synth.hpp"
#include "yaglom/systems.hpp"

namespace yaglom {

using nlohmann::json;

namespace {

std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json fit_json(const Extrapolation& e) {
  return json{{"kind", to_string(e.kind)},
              {"value", e.value},
              {"flatness", e.flatness},
              {"slope", e.slope},
              {"window_begin", e.window_begin}};
}

json base_report(const RunConfig& cfg, const std::string& command) {
  json j;
  j["tool"] = "yaglom";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["config_hash"] = cfg.config_hash;
  json cfg_json = json::parse(cfg.raw_text, nullptr, false);
  j["config"] = cfg_json.is_discarded() ? json(cfg.raw_text) : cfg_json;
  return j;
}

// Global reporting conventions, attached to every functional report.
json conventions() {
  return json::array({
      "mixed third-order products are signed; no absolute values are taken",
      "all law quantities are box averages of the pointwise densities",
      "sweeps are finite-scale surrogates extrapolated by plateau or decay fits",
  });
}

void maybe_write(const RunConfig& cfg, const std::string& name, const std::string& contents,
                 const char* format) {
  for (const auto& f : cfg.formats) {
    if (f == format) {
      write_text_file((std::filesystem::path(cfg.out_dir) / name).string(), contents);
      return;
    }
  }
}

struct Realized {
  FieldSet fields;
  std::map<std::string, std::string> input_hashes;
};

double default_alpha_scale(const RunConfig& cfg) { return cfg.alpha; }

}  // namespace

MollifierProfile profile_by_name(const std::string& name) {
  if (name == "standard_bump") return MollifierProfile::standard_bump();
  if (name == "quartic_bump") return MollifierProfile::quartic_bump();
  throw config_error("unknown mollifier profile: " + name);
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw io_error("cannot open for writing: " + path);
  os << contents;
  os.flush();
  if (!os) throw io_error("failed to write: " + path);
}

FieldSet realize_fields(const RunConfig& cfg, const CatalogEntry* entry,
                        std::map<std::string, std::string>* input_hashes) {
  PeriodicGrid g(cfg.n, cfg.length);
  FieldSet fs(g, default_alpha_scale(cfg));

  // Pass 1: files and self-contained generators.
  for (const auto& [name, slot] : cfg.slots) {
    if (!slot.file.empty()) {
      LoadedField lf = read_field(slot.file);
      if (!(lf.grid == g)) {
        throw config_error("slot '" + name + "': file grid does not match the config grid");
      }
      if (input_hashes) (*input_hashes)[name] = sha256_file(slot.file);
      if (lf.ncomp == 1) fs.set(name, lf.as_scalar());
      if (lf.ncomp == 3) fs.set(name, lf.as_vector());
      if (lf.ncomp == 6) fs.set(name, lf.as_tensor());
      continue;
    }
    const GeneratorSpec& gs = *slot.generator;
    if (gs.type == "abc") {
      fs.set(name, abc_flow(g, gs.A, gs.B, gs.C));
    } else if (gs.type == "taylor_green") {
      fs.set(name, taylor_green(g));
    } else if (gs.type == "gaussian_scalar") {
      SpectrumSpec sp{gs.slope, gs.k_min, gs.k_max, gs.seed, gs.amplitude};
      fs.set(name, gaussian_scalar(g, sp));
    } else if (gs.type == "gaussian_divfree") {
      SpectrumSpec sp{gs.slope, gs.k_min, gs.k_max, gs.seed, gs.amplitude};
      fs.set(name, gaussian_divfree(g, sp));
    } else if (gs.type == "fractional_scalar") {
      fs.set(name, gs.amplitude == 1.0
                       ? fractional_scalar(g, gs.holder, gs.seed)
                       : gs.amplitude * fractional_scalar(g, gs.holder, gs.seed));
    } else if (gs.type == "fractional_divfree") {
      fs.set(name, gs.amplitude == 1.0
                       ? fractional_divfree(g, gs.holder, gs.seed)
                       : gs.amplitude * fractional_divfree(g, gs.holder, gs.seed));
    }
  }
  // Pass 2: generators derived from other slots.
  for (const auto& [name, slot] : cfg.slots) {
    if (slot.file.empty() && slot.generator) {
      const GeneratorSpec& gs = *slot.generator;
      if (gs.type == "curl_of") {
        fs.set(name, curl(fs.vector(gs.source)));
      } else if (gs.type == "helmholtz_of") {
        fs.set(name, helmholtz_filter(fs.vector(gs.source), cfg.alpha));
      } else if (gs.type == "strain_of") {
        fs.set(name, strain(fs.vector(gs.source)));
      }
    }
  }
  if (entry) resolve_slots(*entry, fs);
  return fs;
}

std::vector<SweepRow> dissipation_rows(const EntryEvaluator& ev, std::span<const double> epsilons,
                                       int radial_count, const SphereQuadrature& sphere,
                                       const MollifierProfile& profile) {
  const auto radial = radial_rule(radial_count);
  double peak = 0.0;
  for (const auto& rn : radial) {
    peak = std::max(peak, std::abs(rn.w * rn.r * rn.r * rn.r * profile.deriv(rn.r)));
  }
  const CatalogEntry& entry = ev.entry();
  std::vector<SweepRow> rows;
  for (double eps : epsilons) {
    SweepRow row;
    row.scale = eps;
    row.terms.assign(entry.terms.size(), 0.0);
    for (const auto& rn : radial) {
      const double w = rn.w * rn.r * rn.r * rn.r * profile.deriv(rn.r);
      if (std::abs(w) < 1e-14 * peak) continue;
      const auto raw = ev.term_sphere_density_means(rn.r * eps, sphere);
      for (std::size_t k = 0; k < raw.size(); ++k) {
        row.terms[k] += 4.0 * std::numbers::pi * w *
                        entry.terms[k].c.value(ev.alpha()) * raw[k];
      }
    }
    for (double t : row.terms) row.value += t;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SweepRow> structure_rows(const StructureCurve& curve) {
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < curve.lambdas.size(); ++i) {
    rows.push_back({curve.lambdas[i], curve.g[i], curve.term_breakdown[i]});
  }
  return rows;
}

std::string csv_from_rows(const std::vector<SweepRow>& rows, const std::string& scale_name) {
  std::string out = scale_name + ",value";
  if (!rows.empty()) {
    for (std::size_t k = 0; k < rows.front().terms.size(); ++k) {
      out += ",term" + std::to_string(k);
    }
  }
  out += "\n";
  for (const auto& r : rows) {
    out += fmt_g17(r.scale) + "," + fmt_g17(r.value);
    for (double t : r.terms) out += "," + fmt_g17(t);
    out += "\n";
  }
  return out;
}

namespace {

json rows_json(const std::vector<SweepRow>& rows, const char* scale_name) {
  json scales = json::array(), values = json::array(), terms = json::array();
  for (const auto& r : rows) {
    scales.push_back(r.scale);
    values.push_back(r.value);
    terms.push_back(r.terms);
  }
  return json{{scale_name, scales}, {"value", values}, {"terms", terms}};
}

struct Prepared {
  FieldSet fields;
  std::map<std::string, std::string> hashes;
  const CatalogEntry* entry = nullptr;
};

Prepared prepare_entry(const RunConfig& cfg) {
  if (cfg.entry_id.empty()) throw config_error("functional.id is required");
  Prepared p;
  p.entry = &catalog_entry(cfg.entry_id);
  p.fields = realize_fields(cfg, p.entry, &p.hashes);
  return p;
}

void attach_common(json& rep, const Prepared& p, const RunConfig& cfg) {
  rep["entry"] = p.entry->id;
  rep["entry_notes"] = p.entry->notes;
  rep["conventions"] = conventions();
  rep["input_hashes"] = p.hashes;
  rep["sphere_count"] = cfg.sphere_count;
  rep["radial_count"] = cfg.radial_count;
  rep["profile"] = cfg.profile;
  rep["alpha"] = cfg.alpha;
}

}  // namespace

json run_generate(const RunConfig& cfg) {
  FieldSet fs = realize_fields(cfg, nullptr, nullptr);
  json rep = base_report(cfg, "generate");
  json files = json::object();
  for (const auto& [name, slot] : cfg.slots) {
    if (slot.file.empty()) {
      const std::string path =
          (std::filesystem::path(cfg.out_dir) / (name + ".ygf")).string();
      std::filesystem::create_directories(cfg.out_dir);
      // kind detection mirrors FieldSet storage
      bool written = false;
      try {
        write_field(path, fs.vector(name));
        written = true;
      } catch (const config_error&) {
      }
      if (!written) {
        try {
          write_field(path, fs.scalar(name));
          written = true;
        } catch (const config_error&) {
        }
      }
      if (!written) write_field(path, fs.tensor(name));
      files[name] = json{{"path", path}, {"sha256", sha256_file(path)}};
    }
  }
  rep["generated"] = files;
  maybe_write(cfg, "generate.json", rep.dump(2) + "\n", "json");
  return rep;
}

json run_structure(const RunConfig& cfg) {
  if (cfg.lambdas.empty()) throw config_error("structure: sweeps.lambdas is required");
  Prepared p = prepare_entry(cfg);
  EntryEvaluator ev(*p.entry, p.fields);
  const SphereQuadrature sphere = sphere_rule(cfg.sphere_count);
  StructureCurve curve = ev.structure_curve(cfg.lambdas, sphere);
  const auto rows = structure_rows(curve);

  json rep = base_report(cfg, "structure");
  attach_common(rep, p, cfg);
  rep["s_curve"] = rows_json(rows, "lambda");
  maybe_write(cfg, "structure.csv", csv_from_rows(rows, "lambda"), "csv");
  maybe_write(cfg, "structure.json", rep.dump(2) + "\n", "json");
  return rep;
}

json run_dissipation(const RunConfig& cfg) {
  if (cfg.epsilons.empty()) throw config_error("dissipation: sweeps.epsilons is required");
  Prepared p = prepare_entry(cfg);
  EntryEvaluator ev(*p.entry, p.fields);
  const SphereQuadrature sphere = sphere_rule(cfg.sphere_count);
  const auto rows =
      dissipation_rows(ev, cfg.epsilons, cfg.radial_count, sphere, profile_by_name(cfg.profile));

  json rep = base_report(cfg, "dissipation");
  attach_common(rep, p, cfg);
  rep["d_sweep"] = rows_json(rows, "epsilon");
  maybe_write(cfg, "dissipation.csv", csv_from_rows(rows, "epsilon"), "csv");
  maybe_write(cfg, "dissipation.json", rep.dump(2) + "\n", "json");
  return rep;
}

json run_lawcheck(const RunConfig& cfg) {
  if (cfg.lambdas.size() < 4 || cfg.epsilons.size() < 4) {
    throw config_error("lawcheck: need at least 4 lambdas and 4 epsilons");
  }
  Prepared p = prepare_entry(cfg);
  EntryEvaluator ev(*p.entry, p.fields);
  const SphereQuadrature sphere = sphere_rule(cfg.sphere_count);
  const MollifierProfile prof = profile_by_name(cfg.profile);

  StructureCurve curve = ev.structure_curve(cfg.lambdas, sphere);
  const auto s_rows = structure_rows(curve);
  const auto d_rows = dissipation_rows(ev, cfg.epsilons, cfg.radial_count, sphere, prof);

  std::vector<std::pair<double, double>> d_sweep;
  for (const auto& r : d_rows) d_sweep.emplace_back(r.scale, r.value);
  LawReport law = law_check(curve, d_sweep);
  law.notes.insert(law.notes.end(), p.entry->notes.begin(), p.entry->notes.end());

  json rep = base_report(cfg, "lawcheck");
  attach_common(rep, p, cfg);
  rep["s_curve"] = rows_json(s_rows, "lambda");
  rep["d_sweep"] = rows_json(d_rows, "epsilon");
  rep["law"] = json{{"d_extrapolated", law.d_extrapolated},
                    {"s_extrapolated", law.s_extrapolated},
                    {"ratio", law.ratio},
                    {"verdict", to_string(law.verdict)},
                    {"d_fit", fit_json(law.d_fit)},
                    {"s_fit", fit_json(law.s_fit)},
                    {"ratio_tolerance_frac", law.options.ratio_tolerance_frac},
                    {"noise_floor", law.options.noise_floor},
                    {"notes", law.notes}};
  maybe_write(cfg, "structure.csv", csv_from_rows(s_rows, "lambda"), "csv");
  maybe_write(cfg, "dissipation.csv", csv_from_rows(d_rows, "epsilon"), "csv");
  maybe_write(cfg, "law.json", rep.dump(2) + "\n", "json");
  return rep;
}

json run_balance(const RunConfig& cfg) {
  if (cfg.epsilons.empty()) throw config_error("balance: sweeps.epsilons is required");
  Prepared pre = [&] {
    Prepared p;
    p.entry = &catalog_entry("TEMP");
    p.fields = realize_fields(cfg, p.entry, &p.hashes);
    return p;
  }();
  const VectorField3& v = pre.fields.vector("v");
  const ScalarField& theta0 = pre.fields.scalar("theta");
  if (cfg.steps / cfg.stride < 2) {
    throw config_error("balance: steps/stride must give at least 3 stored snapshots");
  }
  SnapshotSeries series = advect(v, theta0, cfg.dt, cfg.steps, cfg.stride, cfg.dealias);

  json rep = base_report(cfg, "balance");
  attach_common(rep, pre, cfg);
  json sweeps = json::array();
  std::string csv = "epsilon,time,l1,l2,linf\n";
  const SphereQuadrature sphere = sphere_rule(cfg.sphere_count);
  for (double eps : cfg.epsilons) {
    BallQuadrature ball = ball_rule(cfg.radial_count, sphere, eps, profile_by_name(cfg.profile));
    BalanceResult res = balance_residual(series, ball);
    json times = json::array(), l1 = json::array(), l2 = json::array(), li = json::array();
    for (std::size_t i = 0; i < res.times.size(); ++i) {
      times.push_back(res.times[i]);
      l1.push_back(res.norms[i][0]);
      l2.push_back(res.norms[i][1]);
      li.push_back(res.norms[i][2]);
      csv += fmt_g17(eps) + "," + fmt_g17(res.times[i]) + "," + fmt_g17(res.norms[i][0]) + "," +
             fmt_g17(res.norms[i][1]) + "," + fmt_g17(res.norms[i][2]) + "\n";
    }
    sweeps.push_back(json{{"epsilon", eps}, {"time", times}, {"l1", l1}, {"l2", l2}, {"linf", li}});
  }
  rep["balance"] = sweeps;
  rep["solver"] = json{{"dt", cfg.dt}, {"steps", cfg.steps}, {"stride", cfg.stride},
                       {"dealias", cfg.dealias}};
  maybe_write(cfg, "balance.csv", csv, "csv");
  maybe_write(cfg, "balance.json", rep.dump(2) + "\n", "json");
  return rep;
}

json run_exponents(const RunConfig& cfg) {
  FieldSet fs = realize_fields(cfg, nullptr, nullptr);
  PeriodicGrid g(cfg.n, cfg.length);
  std::vector<double> lambdas = cfg.exp_lambdas;
  if (lambdas.empty()) {
    // default window [4h, length/8], 8 geometric points
    const double lo = 4.0 * g.spacing(), hi = g.length / 8.0;
    if (!(lo < hi)) throw config_error("exponents: grid too small for the default window");
    for (int i = 0; i < 8; ++i) lambdas.push_back(lo * std::pow(hi / lo, i / 7.0));
  }
  const SphereQuadrature sphere = sphere_rule(cfg.sphere_count);
  auto estimate = [&](const std::string& slot, double p) {
    if (!fs.has(slot)) throw config_error("exponents: missing slot " + slot);
    try {
      return scaling_exponent(fs.vector(slot), p, lambdas, sphere);
    } catch (const config_error&) {
      return scaling_exponent(fs.scalar(slot), p, lambdas, sphere);
    }
  };
  RegularityEstimate e1 = estimate(cfg.slot1, cfg.p1);
  RegularityEstimate e2 = estimate(cfg.slot2, cfg.p2);
  ConservationPrediction pred = conservation_predictor(e1, e2, cfg.r1, cfg.r2);

  auto est_json = [](const RegularityEstimate& e) {
    return json{{"exponent", e.exponent},
                {"norm_order", e.norm_order},
                {"lambda_min", e.lambda_min},
                {"lambda_max", e.lambda_max},
                {"residual", e.residual},
                {"stderr_slope", e.stderr_slope},
                {"prefactor_trend", e.prefactor_trend}};
  };
  json rep = base_report(cfg, "exponents");
  rep["conventions"] = conventions();
  rep[cfg.slot1] = est_json(e1);
  rep[cfg.slot2] = est_json(e2);
  rep["predictor"] = json{{"conserved", pred.conserved},
                          {"combo_2a_plus_b", pred.combo},
                          {"uncertainty", pred.uncertainty},
                          {"r1", cfg.r1},
                          {"r2", cfg.r2},
                          {"note", pred.note}};
  maybe_write(cfg, "exponents.json", rep.dump(2) + "\n", "json");
  return rep;
}

}  // namespace yaglom
