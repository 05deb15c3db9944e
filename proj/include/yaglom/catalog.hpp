#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "yaglom/grid.hpp"

namespace yaglom {

// Exact rational, used so the sigma_k = -4 c_k structural law can be checked
// without floating-point slack.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  Rational times(long long f) const { return Rational(num * f, den); }
  bool operator==(const Rational&) const = default;
};

// c = q * alpha^p with p in {0, 2}. Terms with p > 0 vanish identically at
// alpha = 0 and are skipped by the evaluators so degeneracies are exact.
struct Coefficient {
  Rational q;
  int alpha_pow = 0;

  double value(double alpha) const;
  bool operator==(const Coefficient&) const = default;
};

enum class SlotKind { vector3, scalar, tensor6 };

struct SlotSpec {
  std::string name;
  SlotKind kind;
};

enum class Deriv { none, grad };  // grad = full gradient tensor d_k u_j (9 components)

struct FieldExpr {
  std::string slot;
  Deriv deriv = Deriv::none;
};

// scalar_pair:  (zeta . delta a) * <delta b (.) delta c>, where (.) is the
//   product for scalars, the dot for vectors and the Frobenius pairing for
//   tensors / gradient factors.
// clark_cross:  zeta_i delta u_j delta(d_k u_i) delta(d_k u_j); the kernel
//   index contracts the first gradient factor.
enum class TermKind { scalar_pair, clark_cross };

struct TermSpec {
  Coefficient c;      // ball-integral coefficient c_k
  Coefficient sigma;  // sphere-density coefficient sigma_k (= -4 c_k)
  FieldExpr transport;
  FieldExpr factor_a;
  FieldExpr factor_b;
  TermKind kind = TermKind::scalar_pair;
  std::string label;
};

// How a missing slot may be derived from the ones that are present.
struct SlotDerivation {
  std::string target;
  enum class Kind { curl_of, helmholtz_of, elsasser_from } kind;
  std::vector<std::string> sources;
};

struct CatalogEntry {
  std::string id;
  std::vector<SlotSpec> slots;
  std::vector<TermSpec> terms;
  std::vector<SlotDerivation> derivations;
  std::vector<std::string> notes;
  bool uses_alpha = false;

  const SlotSpec* find_slot(const std::string& name) const;
};

// Every 4/3 law in the toolkit, keyed by id:
// EULER_ENERGY, TEMP, ELSASSER_PLUS, ELSASSER_MINUS, MHD_ENERGY, MHD_CROSS,
// HELICITY, OLDROYD, LERAY_ALPHA, EULER_ALPHA, MOD_LERAY_ALPHA, CLARK_ALPHA,
// LERAY_MHD_ENERGY, LERAY_MHD_CROSS.
const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_entry(const std::string& id);

// Named collection of fields feeding one catalog entry.
class FieldSet {
 public:
  FieldSet() = default;
  explicit FieldSet(const PeriodicGrid& g, double alpha_ = 0.0) : alpha(alpha_), grid_(g) {}

  void set(const std::string& name, ScalarField f);
  void set(const std::string& name, VectorField3 f);
  void set(const std::string& name, SymTensorField3 f);
  bool has(const std::string& name) const;
  const ScalarField& scalar(const std::string& name) const;
  const VectorField3& vector(const std::string& name) const;
  const SymTensorField3& tensor(const std::string& name) const;
  const PeriodicGrid& grid() const { return grid_; }

  double alpha = 0.0;

 private:
  PeriodicGrid grid_;
  std::map<std::string, ScalarField> scalars_;
  std::map<std::string, VectorField3> vectors_;
  std::map<std::string, SymTensorField3> tensors_;
};

// Fills in derivable slots (omega = curl v, u = Helmholtz-filtered v, Elsasser
// pair from v and b) and checks all required slots are present with the right
// kind. Throws config_error otherwise.
void resolve_slots(const CatalogEntry& entry, FieldSet& fields);

}  // namespace yaglom
