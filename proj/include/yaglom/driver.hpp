#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "yaglom/catalog.hpp"
#include "yaglom/config.hpp"
#include "yaglom/evaluate.hpp"

namespace yaglom {

inline constexpr const char* kToolVersion = "0.1.0";

struct SweepRow {
  double scale = 0.0;
  double value = 0.0;
  std::vector<double> terms;
};

// Builds the field set for a config: files are read and hashed, generators run,
// slot derivations (omega, u, Elsasser pair) applied last.
FieldSet realize_fields(const RunConfig& cfg, const CatalogEntry* entry,
                        std::map<std::string, std::string>* input_hashes);

// Per-epsilon mean dissipation with the c_k-weighted per-term breakdown.
std::vector<SweepRow> dissipation_rows(const EntryEvaluator& ev, std::span<const double> epsilons,
                                       int radial_count, const SphereQuadrature& sphere,
                                       const MollifierProfile& profile);

std::vector<SweepRow> structure_rows(const StructureCurve& curve);

// Subcommand drivers; each returns the machine-readable report and writes
// the configured artifacts under cfg.out_dir.
nlohmann::json run_generate(const RunConfig& cfg);
nlohmann::json run_structure(const RunConfig& cfg);
nlohmann::json run_dissipation(const RunConfig& cfg);
nlohmann::json run_lawcheck(const RunConfig& cfg);
nlohmann::json run_balance(const RunConfig& cfg);
nlohmann::json run_exponents(const RunConfig& cfg);

void write_text_file(const std::string& path, const std::string& contents);
std::string csv_from_rows(const std::vector<SweepRow>& rows, const std::string& scale_name);

MollifierProfile profile_by_name(const std::string& name);

}  // namespace yaglom
