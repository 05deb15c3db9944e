#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "yaglom/catalog.hpp"
#include "yaglom/increments.hpp"
#include "yaglom/mollifier.hpp"

namespace yaglom {

struct DissipationField {
  ScalarField values;
  double epsilon = 0.0;
  std::string entry;
  std::string quadrature;  // which evaluation path / node family produced it
};

struct StructureCurve {
  std::string entry;
  std::vector<double> lambdas;
  std::vector<double> g;                            // sigma-weighted density means
  std::vector<std::vector<double>> term_breakdown;  // per lambda, per term (sums to g)
};

struct Extrapolation {
  enum class Kind { plateau, decays_to_zero, all_below_floor, none };
  Kind kind = Kind::none;
  double value = 0.0;
  double flatness = 0.0;  // best-window max relative deviation from its median
  double slope = 0.0;     // log-log decay slope when fitted
  int window_begin = -1;
};

enum class Verdict { consistent_4_3, conservative, inconclusive };

std::string to_string(Extrapolation::Kind k);
std::string to_string(Verdict v);

struct LawCheckOptions {
  double ratio_tolerance_frac = 0.15;  // |ratio + 4/3| <= frac * 4/3
  double noise_floor = 1e-9;
  double plateau_flatness_max = 0.25;
  double decay_min_slope = 0.8;
  double decay_min_range = 3.0;  // max/min dynamic range to accept a decay fit
};

struct LawReport {
  std::string entry;
  double d_extrapolated = 0.0;
  double s_extrapolated = 0.0;
  double ratio = 0.0;
  Verdict verdict = Verdict::inconclusive;
  Extrapolation d_fit, s_fit;
  LawCheckOptions options;
  std::vector<std::string> notes;
};

// Binds one catalog entry to a field set; all evaluation paths share the
// spectral shift cache built here. Fields are copied into the engine, so the
// evaluator is self-contained after construction.
class EntryEvaluator {
 public:
  EntryEvaluator(const CatalogEntry& entry, const FieldSet& fields,
                 ShiftMethod method = ShiftMethod::fourier_phase);
  ~EntryEvaluator();
  EntryEvaluator(const EntryEvaluator&) = delete;
  EntryEvaluator& operator=(const EntryEvaluator&) = delete;

  const CatalogEntry& entry() const { return entry_; }
  int term_count() const { return static_cast<int>(entry_.terms.size()); }
  double alpha() const { return alpha_; }

  // Raw sphere density means per term at one scale:
  // R_k = mean_x (1/lambda) sum_q w_q  zeta . delta a <delta b (.) delta c>.
  std::vector<double> term_sphere_density_means(double lambda, const SphereQuadrature& sphere) const;

  // G(x; lambda) = sum_k (-sigma_k) R_k(x; lambda).
  ScalarField structure_density(double lambda, const SphereQuadrature& sphere) const;

  StructureCurve structure_curve(std::span<const double> lambdas,
                                 const SphereQuadrature& sphere) const;

  // Ball-quadrature dissipation field, nodes evaluated against grad phi_eps.
  DissipationField dissipation_direct(const BallQuadrature& ball) const;
  // Same nodes reorganized through the polar representation
  // D(x) = sum_k c_k 4pi int r^3 phi'(r) R_k(x; r*eps) dr.
  DissipationField dissipation_radial(const BallQuadrature& ball) const;
  // Plain lattice sum over grid offsets inside the kernel support
  // (independent node family used for cross-checks).
  DissipationField dissipation_lattice(double epsilon, const MollifierProfile& profile) const;

  // Mean D_eps for a sweep of epsilons through the radial representation.
  std::vector<std::pair<double, double>> dissipation_sweep(std::span<const double> epsilons,
                                                           int radial_count,
                                                           const SphereQuadrature& sphere,
                                                           const MollifierProfile& profile) const;

  // LHS - RHS of the mollified commutator identity for one term (coefficient 1).
  // LHS is the ball-quadrature integral, RHS the mollified-product form built
  // with the lattice-sampled kernel. Transport must be solenoidal.
  ScalarField decomposition_residual(int term_index, const BallQuadrature& ball) const;

 private:
  struct Source;
  struct LongTransport;
  struct ResolvedTerm;
  struct Buffers;

  void check_scale(double scale) const;
  void fill_buffers(double lambda, const Vec3& zeta, Buffers& buf) const;
  void term_values(const ResolvedTerm& t, const Buffers& buf, const Vec3& zeta, std::size_t lo,
                   std::size_t hi, double* out) const;
  std::vector<double> term_means_at(double lambda, const Vec3& zeta, double inv_lambda) const;

  CatalogEntry entry_;
  PeriodicGrid grid_;
  double alpha_ = 0.0;
  ShiftMethod method_;
  ShiftEngine engine_;
  std::vector<Source> sources_;
  std::vector<LongTransport> long_transports_;
  std::vector<ResolvedTerm> terms_;
};

// Spec-shaped free functions (each builds a one-shot evaluator).
ScalarField structure_density(const FieldSet& fields, const CatalogEntry& entry, double lambda,
                              const SphereQuadrature& sphere,
                              ShiftMethod method = ShiftMethod::fourier_phase);
DissipationField dissipation_direct(const FieldSet& fields, const CatalogEntry& entry,
                                    const BallQuadrature& ball,
                                    ShiftMethod method = ShiftMethod::fourier_phase);
DissipationField dissipation_radial(const FieldSet& fields, const CatalogEntry& entry,
                                    const BallQuadrature& ball,
                                    ShiftMethod method = ShiftMethod::fourier_phase);
StructureCurve structure_curve(const FieldSet& fields, const CatalogEntry& entry,
                               std::span<const double> lambdas, const SphereQuadrature& sphere,
                               ShiftMethod method = ShiftMethod::fourier_phase);
ScalarField decomposition_residual(const FieldSet& fields, const CatalogEntry& entry,
                                   int term_index, const BallQuadrature& ball,
                                   ShiftMethod method = ShiftMethod::fourier_phase);

Extrapolation extrapolate_sweep(std::span<const double> scales, std::span<const double> values,
                                const LawCheckOptions& opt);

LawReport law_check(const StructureCurve& curve,
                    std::span<const std::pair<double, double>> d_sweep,
                    const LawCheckOptions& opt = {});

}  // namespace yaglom
