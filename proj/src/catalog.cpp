#include "yaglom/catalog.hpp"

#include <cmath>
#include <numeric>

#include "yaglom/systems.hpp"

namespace yaglom {

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw config_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

double Coefficient::value(double alpha) const {
  double v = q.value();
  for (int i = 0; i < alpha_pow; ++i) v *= alpha;
  return v;
}

const SlotSpec* CatalogEntry::find_slot(const std::string& name) const {
  for (const auto& s : slots) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

namespace {

TermSpec term(Rational c, int alpha_pow, FieldExpr transport, FieldExpr fa, FieldExpr fb,
              TermKind kind, std::string label) {
  TermSpec t;
  t.c = Coefficient{c, alpha_pow};
  t.sigma = Coefficient{c.times(-4), alpha_pow};
  t.transport = std::move(transport);
  t.factor_a = std::move(fa);
  t.factor_b = std::move(fb);
  t.kind = kind;
  t.label = std::move(label);
  return t;
}

FieldExpr v(const std::string& s) { return FieldExpr{s, Deriv::none}; }
FieldExpr g(const std::string& s) { return FieldExpr{s, Deriv::grad}; }

void validate(const CatalogEntry& e) {
  for (const auto& t : e.terms) {
    if (t.c.q.num == 0) throw config_error(e.id + ": zero term coefficient");
    const Rational want = t.c.q.times(-4);
    if (!(t.sigma.q == want) || t.sigma.alpha_pow != t.c.alpha_pow) {
      throw config_error(e.id + ": sigma != -4c for term " + t.label);
    }
  }
}

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> out;
  const Rational q14(-1, 4), q12(-1, 2), p14(1, 4), p12(1, 2);

  {
    CatalogEntry e;
    e.id = "EULER_ENERGY";
    e.slots = {{"v", SlotKind::vector3}};
    e.terms = {term(q14, 0, v("v"), v("v"), v("v"), TermKind::scalar_pair, "v|dv|^2")};
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.id = "TEMP";
    e.slots = {{"v", SlotKind::vector3}, {"theta", SlotKind::scalar}};
    e.terms = {term(q14, 0, v("v"), v("theta"), v("theta"), TermKind::scalar_pair, "v|dtheta|^2")};
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.id = "ELSASSER_PLUS";
    e.slots = {{"u", SlotKind::vector3}, {"h", SlotKind::vector3}};
    e.terms = {term(q14, 0, v("h"), v("u"), v("u"), TermKind::scalar_pair, "h|du|^2")};
    e.derivations = {{"u", SlotDerivation::Kind::elsasser_from, {"v", "b"}},
                     {"h", SlotDerivation::Kind::elsasser_from, {"v", "b"}}};
    e.notes = {"transport is the opposite Elsasser field (proof pairing); the theorem "
               "statement writes the transposed integrand"};
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.id = "ELSASSER_MINUS";
    e.slots = {{"u", SlotKind::vector3}, {"h", SlotKind::vector3}};
    e.terms = {term(q14, 0, v("u"), v("h"), v("h"), TermKind::scalar_pair, "u|dh|^2")};
    e.derivations = {{"u", SlotDerivation::Kind::elsasser_from, {"v", "b"}},
                     {"h", SlotDerivation::Kind::elsasser_from, {"v", "b"}}};
    e.notes = {"transport is the opposite Elsasser field (proof pairing); the theorem "
               "statement writes the transposed integrand"};
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.id = "MHD_ENERGY";
    e.slots = {{"v", SlotKind::vector3}, {"b", SlotKind::vector3}};
    e.terms = {term(q14, 0, v("v"), v("v"), v("v"), TermKind::scalar_pair, "v|dv|^2"),
               term(q14, 0, v("v"), v("b"), v("b"), TermKind::scalar_pair, "v|db|^2"),
               term(p12, 0, v("b"), v("v"), v("b"), TermKind::scalar_pair, "b(dv.db)")};
    e.notes = {"mixed products are signed, no absolute value"};
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.id = "MHD_CROSS";
    e.slots = {{"v", SlotKind::vector3}, {"b", SlotKind::vector3}};
    e.terms = {term(q12, 0, v("v"), v("v"), v("b"), TermKind::scalar_pair, "v(dv.db)"),
               term(p14, 0, v("b"), v("v"), v("v"), TermKind::scalar_pair, "b|dv|^2"),
               term(p14, 0, v("b"), v("b"), v("b"), TermKind::scalar_pair, "b|db|^2")};
    e.notes = {"mixed products are signed, no absolute value"};
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.id = "HELICITY";
    e.slots = {{"v", SlotKind::vector3}, {"omega", SlotKind::vector3}};
    e.terms = {term(q12, 0, v("v"), v("omega"), v("v"), TermKind::scalar_pair, "v(domega.dv)"),
               term(p14, 0, v("omega"), v("v"), v("v"), TermKind::scalar_pair, "omega|dv|^2")};
    e.derivations = {{"omega", SlotDerivation::Kind::curl_of, {"v"}}};
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.id = "OLDROYD";
    e.slots = {{"v", SlotKind::vector3}, {"tau", SlotKind::tensor6}};
    e.terms = {term(q14, 0, v("v"), v("v"), v("v"), TermKind::scalar_pair, "v|dv|^2"),
               term(q14, 0, v("v"), v("tau"), v("tau"), TermKind::scalar_pair, "v|dtau|^2")};
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.id = "LERAY_ALPHA";
    e.slots = {{"u", SlotKind::vector3}, {"v", SlotKind::vector3}};
    e.terms = {term(q14, 0, v("u"), v("v"), v("v"), TermKind::scalar_pair, "u|dv|^2")};
    e.derivations = {{"u", SlotDerivation::Kind::helmholtz_of, {"v"}}};
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.id = "EULER_ALPHA";
    e.slots = {{"u", SlotKind::vector3}};
    e.uses_alpha = true;
    e.terms = {term(q14, 0, v("u"), v("u"), v("u"), TermKind::scalar_pair, "u|du|^2"),
               term(q12, 2, v("u"), g("u"), g("u"), TermKind::scalar_pair, "a2 u|dgrad u|^2")};
    e.derivations = {{"u", SlotDerivation::Kind::helmholtz_of, {"v"}}};
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.id = "MOD_LERAY_ALPHA";
    e.slots = {{"u", SlotKind::vector3}};
    e.uses_alpha = true;
    e.terms = {term(q14, 0, v("u"), v("u"), v("u"), TermKind::scalar_pair, "u|du|^2"),
               term(q12, 2, v("u"), g("u"), g("u"), TermKind::scalar_pair, "a2 u|dgrad u|^2")};
    e.derivations = {{"u", SlotDerivation::Kind::helmholtz_of, {"v"}}};
    e.notes = {"gradient structure density uses the fully contracted index pattern; the "
               "stated law and the displayed definition disagree and the law form is used"};
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.id = "CLARK_ALPHA";
    e.slots = {{"u", SlotKind::vector3}};
    e.uses_alpha = true;
    e.terms = {term(q14, 0, v("u"), v("u"), v("u"), TermKind::scalar_pair, "u|du|^2"),
               term(q12, 2, v("u"), g("u"), g("u"), TermKind::clark_cross, "a2 cross grad"),
               term(q14, 2, v("u"), g("u"), g("u"), TermKind::scalar_pair, "a2 u|dgrad u|^2")};
    e.derivations = {{"u", SlotDerivation::Kind::helmholtz_of, {"v"}}};
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.id = "LERAY_MHD_ENERGY";
    e.slots = {{"v", SlotKind::vector3}, {"H", SlotKind::vector3}, {"u", SlotKind::vector3}};
    e.terms = {term(q14, 0, v("u"), v("v"), v("v"), TermKind::scalar_pair, "u|dv|^2"),
               term(q14, 0, v("u"), v("H"), v("H"), TermKind::scalar_pair, "u|dH|^2"),
               term(p12, 0, v("H"), v("v"), v("H"), TermKind::scalar_pair, "H(dv.dH)")};
    e.derivations = {{"u", SlotDerivation::Kind::helmholtz_of, {"v"}}};
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.id = "LERAY_MHD_CROSS";
    e.slots = {{"v", SlotKind::vector3}, {"H", SlotKind::vector3}, {"u", SlotKind::vector3}};
    e.terms = {term(q12, 0, v("u"), v("v"), v("H"), TermKind::scalar_pair, "u(dv.dH)"),
               term(p14, 0, v("H"), v("v"), v("v"), TermKind::scalar_pair, "H|dv|^2"),
               term(p14, 0, v("H"), v("H"), v("H"), TermKind::scalar_pair, "H|dH|^2")};
    e.derivations = {{"u", SlotDerivation::Kind::helmholtz_of, {"v"}}};
    out.push_back(e);
  }

  for (const auto& e : out) validate(e);
  return out;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> c = build_catalog();
  return c;
}

const CatalogEntry& catalog_entry(const std::string& id) {
  for (const auto& e : catalog()) {
    if (e.id == id) return e;
  }
  throw config_error("unknown catalog entry: " + id);
}

void FieldSet::set(const std::string& name, ScalarField f) {
  if (grid_.n == 0) grid_ = f.grid();
  if (!(f.grid() == grid_)) throw config_error("field set: grid mismatch for " + name);
  scalars_.insert_or_assign(name, std::move(f));
}

void FieldSet::set(const std::string& name, VectorField3 f) {
  if (grid_.n == 0) grid_ = f.grid();
  if (!(f.grid() == grid_)) throw config_error("field set: grid mismatch for " + name);
  vectors_.insert_or_assign(name, std::move(f));
}

void FieldSet::set(const std::string& name, SymTensorField3 f) {
  if (grid_.n == 0) grid_ = f.grid();
  if (!(f.grid() == grid_)) throw config_error("field set: grid mismatch for " + name);
  tensors_.insert_or_assign(name, std::move(f));
}

bool FieldSet::has(const std::string& name) const {
  return scalars_.count(name) || vectors_.count(name) || tensors_.count(name);
}

const ScalarField& FieldSet::scalar(const std::string& name) const {
  auto it = scalars_.find(name);
  if (it == scalars_.end()) throw config_error("missing scalar slot: " + name);
  return it->second;
}

const VectorField3& FieldSet::vector(const std::string& name) const {
  auto it = vectors_.find(name);
  if (it == vectors_.end()) throw config_error("missing vector slot: " + name);
  return it->second;
}

const SymTensorField3& FieldSet::tensor(const std::string& name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) throw config_error("missing tensor slot: " + name);
  return it->second;
}

void resolve_slots(const CatalogEntry& entry, FieldSet& fields) {
  for (const auto& d : entry.derivations) {
    if (fields.has(d.target)) continue;
    switch (d.kind) {
      case SlotDerivation::Kind::curl_of:
        if (fields.has(d.sources[0])) fields.set(d.target, curl(fields.vector(d.sources[0])));
        break;
      case SlotDerivation::Kind::helmholtz_of:
        if (fields.has(d.sources[0])) {
          fields.set(d.target, helmholtz_filter(fields.vector(d.sources[0]), fields.alpha));
        }
        break;
      case SlotDerivation::Kind::elsasser_from:
        if (fields.has(d.sources[0]) && fields.has(d.sources[1])) {
          auto [u, h] = elsasser(fields.vector(d.sources[0]), fields.vector(d.sources[1]));
          if (!fields.has("u")) fields.set("u", std::move(u));
          if (!fields.has("h")) fields.set("h", std::move(h));
        }
        break;
    }
  }
  for (const auto& s : entry.slots) {
    if (!fields.has(s.name)) {
      throw config_error(entry.id + ": missing required slot '" + s.name + "'");
    }
    switch (s.kind) {
      case SlotKind::scalar:
        fields.scalar(s.name);
        break;
      case SlotKind::vector3:
        fields.vector(s.name);
        break;
      case SlotKind::tensor6:
        fields.tensor(s.name);
        break;
    }
  }
}

}  // namespace yaglom
