#include "yaglom/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numbers>
#include <set>

#include "yaglom/fft.hpp"
#include "yaglom/parallel.hpp"

namespace yaglom {

namespace {

constexpr double kPi = std::numbers::pi;

// Reusable per-thread buffer arena; slot indices are stable per evaluator.
std::vector<double>& tl_buffer(int slot, std::size_t n) {
  thread_local std::vector<std::vector<double>> pool;
  if (slot >= static_cast<int>(pool.size())) pool.resize(slot + 1);
  pool[slot].resize(n);
  return pool[slot];
}

double median3(double a, double b, double c) {
  return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

// out[x] = samples[(x + off) mod n] per axis, rows moved with memcpy.
void shifted_copy(const PeriodicGrid& g, std::span<const double> in, const std::array<int, 3>& off,
                  std::span<double> out) {
  const int n = g.n;
  const int di = ((off[0] % n) + n) % n;
  const int dj = ((off[1] % n) + n) % n;
  const int dk = ((off[2] % n) + n) % n;
  for (int k = 0; k < n; ++k) {
    const int ks = (k + dk) % n;
    for (int j = 0; j < n; ++j) {
      const int js = (j + dj) % n;
      const double* src = in.data() + g.index(0, js, ks);
      double* dst = out.data() + g.index(0, j, k);
      const int tail = n - di;
      std::memcpy(dst, src + di, sizeof(double) * tail);
      std::memcpy(dst + tail, src, sizeof(double) * di);
    }
  }
}

}  // namespace

std::string to_string(Extrapolation::Kind k) {
  switch (k) {
    case Extrapolation::Kind::plateau: return "plateau";
    case Extrapolation::Kind::decays_to_zero: return "decays_to_zero";
    case Extrapolation::Kind::all_below_floor: return "all_below_floor";
    case Extrapolation::Kind::none: return "no_plateau";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::consistent_4_3: return "consistent_4_3";
    case Verdict::conservative: return "conservative";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// EntryEvaluator internals
// ---------------------------------------------------------------------------

struct EntryEvaluator::Source {
  std::string slot;
  Deriv deriv = Deriv::none;
  int ncomp = 0;
  std::vector<int> ids;      // engine component ids
  std::vector<double> pw;    // pairing weights (tensor off-diagonals count twice)
};

struct EntryEvaluator::LongTransport {
  std::array<int, 3> ids{-1, -1, -1};
};

struct EntryEvaluator::ResolvedTerm {
  double c = 0.0, sigma = 0.0;
  bool active = false;
  TermKind kind = TermKind::scalar_pair;
  std::array<int, 3> transport_ids{-1, -1, -1};
  int long_idx = -1;  // >= 0: transport shifted as one longitudinal combo
  int fa = -1, fb = -1;
};

struct EntryEvaluator::Buffers {
  std::vector<const double*> sh;     // shifted samples by engine id
  std::vector<const double*> combo;  // combo samples by long-transport index
};

EntryEvaluator::~EntryEvaluator() = default;

EntryEvaluator::EntryEvaluator(const CatalogEntry& entry, const FieldSet& fields,
                               ShiftMethod method)
    : entry_(entry), grid_(fields.grid()), alpha_(fields.alpha), method_(method),
      engine_(fields.grid(), method) {
  if (grid_.n == 0) throw config_error("evaluator: empty field set");

  // Register the scalar components of one (slot, deriv) expression.
  std::map<std::pair<std::string, int>, int> source_index;
  auto source_for = [&](const FieldExpr& e) -> int {
    const auto key = std::make_pair(e.slot, static_cast<int>(e.deriv));
    auto it = source_index.find(key);
    if (it != source_index.end()) return it->second;
    Source s;
    s.slot = e.slot;
    s.deriv = e.deriv;
    const SlotSpec* spec = entry_.find_slot(e.slot);
    if (!spec) throw config_error(entry_.id + ": term references unknown slot " + e.slot);
    if (e.deriv == Deriv::grad) {
      if (spec->kind != SlotKind::vector3) {
        throw config_error(entry_.id + ": grad factor needs a vector slot");
      }
      const VectorField3& u = fields.vector(e.slot);
      s.ncomp = 9;  // component 3k + j holds d_k u_j
      for (int k = 0; k < 3; ++k) {
        for (int j = 0; j < 3; ++j) {
          s.ids.push_back(engine_.add(spectral_derivative(u[j], k)));
          s.pw.push_back(1.0);
        }
      }
    } else {
      switch (spec->kind) {
        case SlotKind::scalar:
          s.ncomp = 1;
          s.ids.push_back(engine_.add(fields.scalar(e.slot)));
          s.pw.push_back(1.0);
          break;
        case SlotKind::vector3: {
          const VectorField3& v = fields.vector(e.slot);
          s.ncomp = 3;
          for (int c = 0; c < 3; ++c) {
            s.ids.push_back(engine_.add(v[c]));
            s.pw.push_back(1.0);
          }
          break;
        }
        case SlotKind::tensor6: {
          const SymTensorField3& t = fields.tensor(e.slot);
          s.ncomp = 6;
          for (int c = 0; c < 6; ++c) {
            s.ids.push_back(engine_.add(t[c]));
            s.pw.push_back(SymTensorField3::pair_weight[c]);
          }
          break;
        }
      }
    }
    const int idx = static_cast<int>(sources_.size());
    sources_.push_back(std::move(s));
    source_index.emplace(key, idx);
    return idx;
  };

  // Slots whose full components are needed (factor slots and clark transports).
  std::set<std::string> full_slots;
  for (const auto& t : entry_.terms) {
    if (Coefficient{t.c}.value(alpha_) == 0.0) continue;
    if (t.factor_a.deriv == Deriv::none) full_slots.insert(t.factor_a.slot);
    if (t.factor_b.deriv == Deriv::none) full_slots.insert(t.factor_b.slot);
    if (t.kind == TermKind::clark_cross) full_slots.insert(t.transport.slot);
  }

  std::map<std::string, int> long_index;
  for (const auto& t : entry_.terms) {
    ResolvedTerm rt;
    rt.c = t.c.value(alpha_);
    rt.sigma = t.sigma.value(alpha_);
    rt.active = rt.c != 0.0;
    rt.kind = t.kind;
    if (!rt.active) {
      terms_.push_back(rt);
      continue;
    }
    rt.fa = source_for(t.factor_a);
    rt.fb = source_for(t.factor_b);
    if (rt.kind == TermKind::scalar_pair) {
      const Source& a = sources_[rt.fa];
      const Source& b = sources_[rt.fb];
      if (a.ncomp != b.ncomp) throw config_error(entry_.id + ": factor component mismatch");
    } else {
      if (sources_[rt.fa].deriv != Deriv::grad || sources_[rt.fb].deriv != Deriv::grad) {
        throw config_error(entry_.id + ": clark_cross needs gradient factors");
      }
    }
    // Transport components.
    const SlotSpec* tspec = entry_.find_slot(t.transport.slot);
    if (!tspec || tspec->kind != SlotKind::vector3 || t.transport.deriv != Deriv::none) {
      throw config_error(entry_.id + ": transport must be a plain vector slot");
    }
    const int tsrc = source_for(FieldExpr{t.transport.slot, Deriv::none});
    for (int c = 0; c < 3; ++c) rt.transport_ids[c] = sources_[tsrc].ids[c];
    if (method_ == ShiftMethod::fourier_phase && !full_slots.count(t.transport.slot) &&
        rt.kind == TermKind::scalar_pair) {
      auto it = long_index.find(t.transport.slot);
      if (it == long_index.end()) {
        LongTransport lt;
        lt.ids = rt.transport_ids;
        it = long_index.emplace(t.transport.slot, static_cast<int>(long_transports_.size())).first;
        long_transports_.push_back(lt);
      }
      rt.long_idx = it->second;
    }
    terms_.push_back(rt);
  }
}

void EntryEvaluator::check_scale(double scale) const {
  if (!(scale > 0.0) || !(scale < 0.5 * grid_.length)) {
    throw config_error("scale must lie in (0, length/2)");
  }
}

// Shift every needed component for displacement lambda*zeta into the arena.
void EntryEvaluator::fill_buffers(double lambda, const Vec3& zeta, Buffers& buf) const {
  const std::size_t npts = grid_.size();
  const Vec3 l = scaled(zeta, lambda);
  const int total_ids = [&] {
    int m = 0;
    for (const auto& s : sources_) {
      for (int id : s.ids) m = std::max(m, id + 1);
    }
    return m;
  }();
  buf.sh.assign(total_ids, nullptr);
  buf.combo.assign(long_transports_.size(), nullptr);

  std::set<int> skip_full;  // transports shifted as combos only
  for (const auto& t : terms_) {
    if (t.active && t.long_idx >= 0) {
      for (int c = 0; c < 3; ++c) skip_full.insert(t.transport_ids[c]);
    }
  }
  // A slot can be both a combo transport and a factor; factors win.
  for (const auto& t : terms_) {
    if (!t.active) continue;
    for (int src : {t.fa, t.fb}) {
      for (int id : sources_[src].ids) skip_full.erase(id);
    }
    if (t.long_idx < 0) {
      for (int c = 0; c < 3; ++c) skip_full.erase(t.transport_ids[c]);
    }
  }

  int slot = 0;
  auto need_id = [&](int id) {
    if (buf.sh[id]) return;
    auto& b = tl_buffer(slot++, npts);
    engine_.shift_into(id, l, b);
    buf.sh[id] = b.data();
  };
  for (const auto& t : terms_) {
    if (!t.active) continue;
    for (int src : {t.fa, t.fb}) {
      for (int id : sources_[src].ids) need_id(id);
    }
    if (t.long_idx < 0) {
      for (int c = 0; c < 3; ++c) need_id(t.transport_ids[c]);
    }
  }
  for (std::size_t li = 0; li < long_transports_.size(); ++li) {
    bool used = false;
    for (const auto& t : terms_) used |= t.active && t.long_idx == static_cast<int>(li);
    if (!used) continue;
    auto& b = tl_buffer(slot++, npts);
    engine_.shift_combo_into(long_transports_[li].ids, zeta, l, b);
    buf.combo[li] = b.data();
  }
  (void)skip_full;
}

// T_k values on [lo, hi): (zeta . delta transport) <delta a (.) delta b>, or the
// clark contraction. zeta must be a unit vector; kernel magnitudes belong to
// the caller's node weights.
void EntryEvaluator::term_values(const ResolvedTerm& t, const Buffers& buf, const Vec3& zeta,
                                 std::size_t lo, std::size_t hi, double* out) const {
  const double zx = zeta[0], zy = zeta[1], zz = zeta[2];
  const double* tb[3];
  const double* ts[3];
  for (int c = 0; c < 3; ++c) {
    tb[c] = engine_.base(t.transport_ids[c]).data();
    ts[c] = buf.sh[t.transport_ids[c]];
  }
  const double* combo = t.long_idx >= 0 ? buf.combo[t.long_idx] : nullptr;

  if (t.kind == TermKind::scalar_pair) {
    const Source& A = sources_[t.fa];
    const Source& B = sources_[t.fb];
    const int nc = A.ncomp;
    const double* as[9];
    const double* ab[9];
    const double* bs[9];
    const double* bb[9];
    double pw[9];
    for (int c = 0; c < nc; ++c) {
      as[c] = buf.sh[A.ids[c]];
      ab[c] = engine_.base(A.ids[c]).data();
      bs[c] = buf.sh[B.ids[c]];
      bb[c] = engine_.base(B.ids[c]).data();
      pw[c] = A.pw[c];
    }
    for (std::size_t i = lo; i < hi; ++i) {
      double tl;
      if (combo) {
        tl = combo[i] - (zx * tb[0][i] + zy * tb[1][i] + zz * tb[2][i]);
      } else {
        tl = zx * (ts[0][i] - tb[0][i]) + zy * (ts[1][i] - tb[1][i]) + zz * (ts[2][i] - tb[2][i]);
      }
      double p = 0.0;
      for (int c = 0; c < nc; ++c) {
        p += pw[c] * (as[c][i] - ab[c][i]) * (bs[c][i] - bb[c][i]);
      }
      out[i] = tl * p;
    }
    return;
  }

  // clark_cross: sum_k (sum_i zeta_i dG_ki)(sum_j du_j dG_kj), G comp = 3k + j.
  const Source& G = sources_[t.fa];
  const double* gs[9];
  const double* gb[9];
  for (int c = 0; c < 9; ++c) {
    gs[c] = buf.sh[G.ids[c]];
    gb[c] = engine_.base(G.ids[c]).data();
  }
  for (std::size_t i = lo; i < hi; ++i) {
    double du[3];
    for (int c = 0; c < 3; ++c) du[c] = ts[c][i] - tb[c][i];
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
      double a = 0.0, b = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double dg = gs[3 * k + c][i] - gb[3 * k + c][i];
        a += zeta[c] * dg;
        b += du[c] * dg;
      }
      s += a * b;
    }
    out[i] = s;
  }
}

// Serial per-direction term means (runs inside direction-parallel regions).
std::vector<double> EntryEvaluator::term_means_at(double lambda, const Vec3& zeta,
                                                  double inv_lambda) const {
  Buffers buf;
  fill_buffers(lambda, zeta, buf);
  const std::size_t npts = grid_.size();
  auto& scratch = tl_buffer(60, npts);
  std::vector<double> means(terms_.size(), 0.0);
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    if (!terms_[k].active) continue;
    term_values(terms_[k], buf, zeta, 0, npts, scratch.data());
    constexpr std::size_t kBlock = 8192;
    double total = 0.0;
    for (std::size_t b = 0; b < npts; b += kBlock) {
      const std::size_t e = std::min(npts, b + kBlock);
      double s = 0.0;
      for (std::size_t i = b; i < e; ++i) s += scratch[i];
      total += s;
    }
    means[k] = inv_lambda * total / static_cast<double>(npts);
  }
  return means;
}

std::vector<double> EntryEvaluator::term_sphere_density_means(double lambda,
                                                              const SphereQuadrature& sphere) const {
  check_scale(lambda);
  const std::size_t Q = sphere.size();
  std::vector<std::vector<double>> per_dir(Q);
  par::parallel_blocks(Q, 1, [&](std::size_t q0, std::size_t q1) {
    for (std::size_t q = q0; q < q1; ++q) {
      per_dir[q] = term_means_at(lambda, sphere.directions[q], 1.0 / lambda);
    }
  });
  std::vector<double> out(terms_.size(), 0.0);
  for (std::size_t q = 0; q < Q; ++q) {
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      out[k] += sphere.weights[q] * per_dir[q][k];
    }
  }
  return out;
}

ScalarField EntryEvaluator::structure_density(double lambda, const SphereQuadrature& sphere) const {
  check_scale(lambda);
  const std::size_t npts = grid_.size();
  ScalarField out(grid_);
  auto acc = out.data();
  auto& scratch = tl_buffer(61, npts);
  for (std::size_t q = 0; q < sphere.size(); ++q) {
    const Vec3& zeta = sphere.directions[q];
    Buffers buf;
    fill_buffers(lambda, zeta, buf);
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      if (!terms_[k].active) continue;
      const double w = -terms_[k].sigma / lambda * sphere.weights[q];
      par::parallel_for(npts, [&](std::size_t lo, std::size_t hi) {
        term_values(terms_[k], buf, zeta, lo, hi, scratch.data());
        for (std::size_t i = lo; i < hi; ++i) acc[i] += w * scratch[i];
      });
    }
  }
  return out;
}

StructureCurve EntryEvaluator::structure_curve(std::span<const double> lambdas,
                                               const SphereQuadrature& sphere) const {
  StructureCurve out;
  out.entry = entry_.id;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    check_scale(lambdas[i]);
    if (i > 0 && !(lambdas[i] > lambdas[i - 1])) {
      throw config_error("structure_curve: lambdas must increase strictly");
    }
  }
  for (double lam : lambdas) {
    const auto raw = term_sphere_density_means(lam, sphere);
    std::vector<double> contrib(terms_.size(), 0.0);
    double g = 0.0;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      contrib[k] = -terms_[k].sigma * raw[k];
      g += contrib[k];
    }
    out.lambdas.push_back(lam);
    out.g.push_back(g);
    out.term_breakdown.push_back(std::move(contrib));
  }
  return out;
}

DissipationField EntryEvaluator::dissipation_direct(const BallQuadrature& ball) const {
  check_scale(ball.epsilon);
  const std::size_t npts = grid_.size();
  ScalarField out(grid_);
  auto acc = out.data();
  auto& scratch = tl_buffer(61, npts);
  const double eps = ball.epsilon;
  for (const auto& rn : ball.radial) {
    const double kernel = ball.profile.deriv(rn.r);
    if (kernel == 0.0) continue;
    const double node_w = 4.0 * kPi / eps * rn.w * rn.r * rn.r * kernel;
    for (std::size_t q = 0; q < ball.sphere.size(); ++q) {
      const Vec3& zeta = ball.sphere.directions[q];
      Buffers buf;
      fill_buffers(rn.r * eps, zeta, buf);
      for (std::size_t k = 0; k < terms_.size(); ++k) {
        if (!terms_[k].active) continue;
        const double w = terms_[k].c * node_w * ball.sphere.weights[q];
        par::parallel_for(npts, [&](std::size_t lo, std::size_t hi) {
          term_values(terms_[k], buf, zeta, lo, hi, scratch.data());
          for (std::size_t i = lo; i < hi; ++i) acc[i] += w * scratch[i];
        });
      }
    }
  }
  return {std::move(out), eps, entry_.id, "ball_direct"};
}

DissipationField EntryEvaluator::dissipation_radial(const BallQuadrature& ball) const {
  check_scale(ball.epsilon);
  const std::size_t npts = grid_.size();
  ScalarField out(grid_);
  auto acc = out.data();
  auto& scratch = tl_buffer(61, npts);
  const double eps = ball.epsilon;
  const int nterms = static_cast<int>(terms_.size());
  std::vector<std::vector<double>> density(nterms);
  for (auto& d : density) d.assign(npts, 0.0);

  for (const auto& rn : ball.radial) {
    const double kernel = ball.profile.deriv(rn.r);
    if (kernel == 0.0) continue;
    const double lambda = rn.r * eps;
    for (auto& d : density) std::fill(d.begin(), d.end(), 0.0);
    for (std::size_t q = 0; q < ball.sphere.size(); ++q) {
      const Vec3& zeta = ball.sphere.directions[q];
      Buffers buf;
      fill_buffers(lambda, zeta, buf);
      for (int k = 0; k < nterms; ++k) {
        if (!terms_[k].active) continue;
        const double w = ball.sphere.weights[q] / lambda;
        double* dk = density[k].data();
        par::parallel_for(npts, [&](std::size_t lo, std::size_t hi) {
          term_values(terms_[k], buf, zeta, lo, hi, scratch.data());
          for (std::size_t i = lo; i < hi; ++i) dk[i] += w * scratch[i];
        });
      }
    }
    // D += c_k * 4pi * w_m r_m^3 phi'(r_m) * R_k(x; r_m eps)
    for (int k = 0; k < nterms; ++k) {
      if (!terms_[k].active) continue;
      const double w = terms_[k].c * 4.0 * kPi * rn.w * rn.r * rn.r * rn.r * kernel;
      const double* dk = density[k].data();
      par::parallel_for(npts, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) acc[i] += w * dk[i];
      });
    }
  }
  return {std::move(out), eps, entry_.id, "ball_radial"};
}

DissipationField EntryEvaluator::dissipation_lattice(double epsilon,
                                                     const MollifierProfile& profile) const {
  check_scale(epsilon);
  const std::size_t npts = grid_.size();
  const double h = grid_.spacing();
  ScalarField out(grid_);
  auto acc = out.data();
  auto& scratch = tl_buffer(61, npts);
  const int reach = static_cast<int>(std::ceil(epsilon / h));
  const double cell = h * h * h;

  // Shift every registered component by the lattice offset (memcpy rotation),
  // then reuse the same term kernels with the kernel direction as zeta.
  const int total_ids = [&] {
    int m = -1;
    for (const auto& s : sources_) {
      for (int id : s.ids) m = std::max(m, id);
    }
    for (const auto& t : terms_) {
      if (t.active) {
        for (int c = 0; c < 3; ++c) m = std::max(m, t.transport_ids[c]);
      }
    }
    return m + 1;
  }();

  for (int dk = -reach; dk <= reach; ++dk) {
    for (int dj = -reach; dj <= reach; ++dj) {
      for (int di = -reach; di <= reach; ++di) {
        if (di == 0 && dj == 0 && dk == 0) continue;
        const Vec3 l{di * h, dj * h, dk * h};
        const double r = norm(l);
        if (r >= epsilon) continue;
        const double mag = profile.deriv(r / epsilon) / (epsilon * epsilon * epsilon * epsilon);
        if (mag == 0.0) continue;
        const Vec3 zeta = scaled(l, 1.0 / r);

        Buffers buf;
        buf.sh.assign(total_ids, nullptr);
        buf.combo.assign(long_transports_.size(), nullptr);
        int slot = 0;
        for (const auto& t : terms_) {
          if (!t.active) continue;
          auto fill = [&](int id) {
            if (buf.sh[id]) return;
            auto& b = tl_buffer(slot++, npts);
            shifted_copy(grid_, engine_.base(id), {di, dj, dk}, b);
            buf.sh[id] = b.data();
          };
          for (int src : {t.fa, t.fb}) {
            for (int id : sources_[src].ids) fill(id);
          }
          for (int c = 0; c < 3; ++c) fill(t.transport_ids[c]);
        }

        for (std::size_t k = 0; k < terms_.size(); ++k) {
          if (!terms_[k].active) continue;
          // long_idx must be ignored here: combos are nullptr, full comps present
          ResolvedTerm t = terms_[k];
          t.long_idx = -1;
          const double w = terms_[k].c * cell * mag;
          par::parallel_for(npts, [&](std::size_t lo, std::size_t hi) {
            term_values(t, buf, zeta, lo, hi, scratch.data());
            for (std::size_t i = lo; i < hi; ++i) acc[i] += w * scratch[i];
          });
        }
      }
    }
  }
  return {std::move(out), epsilon, entry_.id, "lattice_sum"};
}

std::vector<std::pair<double, double>> EntryEvaluator::dissipation_sweep(
    std::span<const double> epsilons, int radial_count, const SphereQuadrature& sphere,
    const MollifierProfile& profile) const {
  const auto radial = radial_rule(radial_count);
  double peak = 0.0;
  for (const auto& rn : radial) {
    peak = std::max(peak, std::abs(rn.w * rn.r * rn.r * rn.r * profile.deriv(rn.r)));
  }
  std::vector<std::pair<double, double>> out;
  for (double eps : epsilons) {
    check_scale(eps);
    double mean = 0.0;
    for (const auto& rn : radial) {
      const double w = rn.w * rn.r * rn.r * rn.r * profile.deriv(rn.r);
      if (std::abs(w) < 1e-14 * peak) continue;
      const auto raw = term_sphere_density_means(rn.r * eps, sphere);
      double combo = 0.0;
      for (std::size_t k = 0; k < terms_.size(); ++k) combo += terms_[k].c * raw[k];
      mean += 4.0 * kPi * w * combo;
    }
    out.emplace_back(eps, mean);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mollified commutator identity
// ---------------------------------------------------------------------------

namespace {

// Multipliers of the mollified-derivative operators D_i(F) := d_i(F^eps),
// built from the exact kernel transform
//   phihat(kappa) = 4 pi int_0^1 r^2 phi(r) j0(kappa r) dr,
// so the commutator identity holds at the continuum level for band-limited
// fields (products up to triple stay below the grid Nyquist when the inputs
// respect the n/3 band).
struct GradMollifier {
  std::array<std::vector<std::complex<double>>, 3> mult;
};

GradMollifier grad_mollifier_multipliers(const PeriodicGrid& g, const MollifierProfile& p,
                                         double eps) {
  const int n = g.n;
  const double kb = 2.0 * kPi / g.length;

  // phihat per distinct integer |k|^2, adaptive radial quadrature.
  std::map<long, double> phihat;
  auto phihat_for = [&](long k2) {
    auto it = phihat.find(k2);
    if (it != phihat.end()) return it->second;
    double val;
    if (k2 == 0) {
      val = 1.0;  // unit mass
    } else {
      const double kappa = eps * kb * std::sqrt(static_cast<double>(k2));
      val = 4.0 * kPi *
            integrate_adaptive(
                [&](double r) {
                  const double z = kappa * r;
                  const double j0 = z < 1e-8 ? 1.0 - z * z / 6.0 : std::sin(z) / z;
                  return r * r * p.value(r) * j0;
                },
                0.0, 1.0, 1e-13);
    }
    phihat.emplace(k2, val);
    return val;
  };

  GradMollifier out;
  const std::size_t nxh = static_cast<std::size_t>(n / 2 + 1);
  for (auto& m : out.mult) m.resize(nxh * n * n);
  for (int iz = 0; iz < n; ++iz) {
    const int kz = fft::wavenumber(iz, n);
    for (int iy = 0; iy < n; ++iy) {
      const int ky = fft::wavenumber(iy, n);
      const std::size_t base = nxh * (iy + static_cast<std::size_t>(n) * iz);
      for (std::size_t ix = 0; ix < nxh; ++ix) {
        const int kx = static_cast<int>(ix);
        const long k2 = static_cast<long>(kx) * kx + static_cast<long>(ky) * ky +
                        static_cast<long>(kz) * kz;
        const double ph = phihat_for(k2);
        auto dfac = [&](int k) -> std::complex<double> {
          if (k == n / 2 || k == -n / 2) return {0.0, 0.0};
          return {0.0, kb * k};
        };
        out.mult[0][base + ix] = dfac(kx) * ph;
        out.mult[1][base + ix] = dfac(ky) * ph;
        out.mult[2][base + ix] = dfac(kz) * ph;
      }
    }
  }
  return out;
}

ScalarField pointwise_product(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.grid());
  auto o = out.data();
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] * y[i];
  return out;
}

}  // namespace

ScalarField EntryEvaluator::decomposition_residual(int term_index, const BallQuadrature& ball) const {
  if (term_index < 0 || term_index >= term_count()) {
    throw config_error("decomposition_residual: bad term index");
  }
  const TermSpec& spec = entry_.terms[term_index];
  const ResolvedTerm& rt = terms_[term_index];
  if (!rt.active) throw config_error("decomposition_residual: term vanishes at this alpha");
  if (rt.kind != TermKind::scalar_pair) {
    throw config_error("decomposition_residual: only scalar_pair terms have this identity");
  }
  check_scale(ball.epsilon);

  // Gather the concrete fields back from the engine bases.
  const Source& A = sources_[rt.fa];
  const Source& B = sources_[rt.fb];
  std::array<ScalarField, 3> a;
  for (int c = 0; c < 3; ++c) {
    a[c] = ScalarField(grid_, std::vector<double>(engine_.base(rt.transport_ids[c]).begin(),
                                                  engine_.base(rt.transport_ids[c]).end()));
  }
  {
    VectorField3 av(a[0], a[1], a[2]);
    if (max_abs_divergence(av) > 1e-10) {
      throw config_error("decomposition_residual: transport '" + spec.transport.slot +
                         "' is not solenoidal");
    }
  }
  auto comp_field = [&](const Source& s, int c) {
    return ScalarField(grid_, std::vector<double>(engine_.base(s.ids[c]).begin(),
                                                  engine_.base(s.ids[c]).end()));
  };

  const GradMollifier gm = grad_mollifier_multipliers(grid_, ball.profile, ball.epsilon);
  const std::size_t npts = grid_.size();

  // D applied to one field, one axis.
  auto D_axis = [&](const ScalarField& f, int axis) {
    fft::Spectrum s = fft::forward(f);
    for (std::size_t i = 0; i < s.c.size(); ++i) s.c[i] *= gm.mult[axis][i];
    return fft::inverse(s);
  };
  // sum_i D_i(f_i) for three fields.
  auto D_div = [&](const std::array<ScalarField, 3>& f) {
    fft::Spectrum acc(grid_);
    for (int axis = 0; axis < 3; ++axis) {
      fft::Spectrum s = fft::forward(f[axis]);
      for (std::size_t i = 0; i < s.c.size(); ++i) acc.c[i] += gm.mult[axis][i] * s.c[i];
    }
    return fft::inverse(acc);
  };

  // Exact rearrangement of the lattice-sum expansion of
  // int grad phi_eps . delta a <delta b . delta c> dl; the div-free residue
  // -D_i(a_i) P is kept so the algebra is exact:
  //   RHS = -D_i(a_i P) + sum_J w_J [D_i(a_i b_J) c_J + D_i(a_i c_J) b_J]
  //         - D_i(a_i) P + a_i D_i(P)
  //         - sum_J w_J [a_i c_J D_i(b_J) + a_i b_J D_i(c_J)]
  ScalarField P(grid_);
  {
    auto p = P.data();
    for (int c = 0; c < A.ncomp; ++c) {
      auto xb = engine_.base(A.ids[c]);
      auto yb = engine_.base(B.ids[c]);
      const double w = A.pw[c];
      for (std::size_t i = 0; i < npts; ++i) p[i] += w * xb[i] * yb[i];
    }
  }
  ScalarField rhs(grid_);
  {
    ScalarField t1 = D_div({pointwise_product(a[0], P), pointwise_product(a[1], P),
                            pointwise_product(a[2], P)});
    ScalarField t4 = D_div({a[0], a[1], a[2]});
    auto r = rhs.data();
    auto pd = P.data();
    for (std::size_t i = 0; i < npts; ++i) {
      r[i] += -t1.data()[i] - t4.data()[i] * pd[i];
    }
    for (int axis = 0; axis < 3; ++axis) {
      ScalarField dp = D_axis(P, axis);
      auto ad = a[axis].data();
      for (std::size_t i = 0; i < npts; ++i) r[i] += ad[i] * dp.data()[i];
    }
  }
  for (int c = 0; c < A.ncomp; ++c) {
    ScalarField bJ = comp_field(A, c);
    ScalarField cJ = comp_field(B, c);
    const double w = A.pw[c];
    ScalarField div_ab = D_div({pointwise_product(a[0], bJ), pointwise_product(a[1], bJ),
                                pointwise_product(a[2], bJ)});
    ScalarField div_ac = D_div({pointwise_product(a[0], cJ), pointwise_product(a[1], cJ),
                                pointwise_product(a[2], cJ)});
    auto r = rhs.data();
    for (std::size_t i = 0; i < npts; ++i) {
      r[i] += w * (div_ab.data()[i] * cJ.data()[i] + div_ac.data()[i] * bJ.data()[i]);
    }
    for (int axis = 0; axis < 3; ++axis) {
      ScalarField db = D_axis(bJ, axis);
      ScalarField dc = D_axis(cJ, axis);
      auto ad = a[axis].data();
      for (std::size_t i = 0; i < npts; ++i) {
        r[i] -= w * ad[i] * (cJ.data()[i] * db.data()[i] + bJ.data()[i] * dc.data()[i]);
      }
    }
  }

  // LHS: ball quadrature of the single term with coefficient one.
  ScalarField lhs(grid_);
  {
    auto acc = lhs.data();
    auto& scratch = tl_buffer(61, npts);
    const double eps = ball.epsilon;
    for (const auto& rn : ball.radial) {
      const double kernel = ball.profile.deriv(rn.r);
      if (kernel == 0.0) continue;
      const double node_w = 4.0 * kPi / eps * rn.w * rn.r * rn.r * kernel;
      for (std::size_t qd = 0; qd < ball.sphere.size(); ++qd) {
        const Vec3& zeta = ball.sphere.directions[qd];
        Buffers buf;
        fill_buffers(rn.r * eps, zeta, buf);
        const double w = node_w * ball.sphere.weights[qd];
        par::parallel_for(npts, [&](std::size_t lo, std::size_t hi) {
          term_values(rt, buf, zeta, lo, hi, scratch.data());
          for (std::size_t i = lo; i < hi; ++i) acc[i] += w * scratch[i];
        });
      }
    }
  }
  return lhs - rhs;
}

// ---------------------------------------------------------------------------
// Free functions
// ---------------------------------------------------------------------------

ScalarField structure_density(const FieldSet& fields, const CatalogEntry& entry, double lambda,
                              const SphereQuadrature& sphere, ShiftMethod method) {
  return EntryEvaluator(entry, fields, method).structure_density(lambda, sphere);
}

DissipationField dissipation_direct(const FieldSet& fields, const CatalogEntry& entry,
                                    const BallQuadrature& ball, ShiftMethod method) {
  return EntryEvaluator(entry, fields, method).dissipation_direct(ball);
}

DissipationField dissipation_radial(const FieldSet& fields, const CatalogEntry& entry,
                                    const BallQuadrature& ball, ShiftMethod method) {
  return EntryEvaluator(entry, fields, method).dissipation_radial(ball);
}

StructureCurve structure_curve(const FieldSet& fields, const CatalogEntry& entry,
                               std::span<const double> lambdas, const SphereQuadrature& sphere,
                               ShiftMethod method) {
  return EntryEvaluator(entry, fields, method).structure_curve(lambdas, sphere);
}

ScalarField decomposition_residual(const FieldSet& fields, const CatalogEntry& entry,
                                   int term_index, const BallQuadrature& ball, ShiftMethod method) {
  return EntryEvaluator(entry, fields, method).decomposition_residual(term_index, ball);
}

// ---------------------------------------------------------------------------
// Extrapolation and the verdict
// ---------------------------------------------------------------------------

Extrapolation extrapolate_sweep(std::span<const double> scales, std::span<const double> values,
                                const LawCheckOptions& opt) {
  const std::size_t m = values.size();
  if (m < 4 || scales.size() != m) {
    throw config_error("law_check: each sweep needs at least 4 scales");
  }
  Extrapolation ex;

  bool all_below = true;
  for (double v : values) all_below &= std::abs(v) <= opt.noise_floor;
  if (all_below) {
    ex.kind = Extrapolation::Kind::all_below_floor;
    ex.value = 0.0;
    return ex;
  }

  // Flattest 3-point window.
  double best_flat = std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (std::size_t i = 0; i + 3 <= m; ++i) {
    const double med = median3(values[i], values[i + 1], values[i + 2]);
    const double denom = std::max(std::abs(med), opt.noise_floor);
    double flat = 0.0;
    for (std::size_t j = i; j < i + 3; ++j) {
      flat = std::max(flat, std::abs(values[j] - med) / denom);
    }
    if (flat < best_flat) {
      best_flat = flat;
      best_i = static_cast<int>(i);
    }
  }
  ex.flatness = best_flat;
  ex.window_begin = best_i;

  if (best_flat <= opt.plateau_flatness_max) {
    ex.kind = Extrapolation::Kind::plateau;
    ex.value = median3(values[best_i], values[best_i + 1], values[best_i + 2]);
    return ex;
  }

  // Decaying sweep: fit log|v| against log(scale) on the above-floor points.
  std::vector<double> lx, ly;
  double vmax = 0.0, vmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const double av = std::abs(values[i]);
    if (av <= opt.noise_floor) continue;
    lx.push_back(std::log(scales[i]));
    ly.push_back(std::log(av));
    vmax = std::max(vmax, av);
    vmin = std::min(vmin, av);
  }
  if (lx.size() >= 3) {
    const std::size_t q = lx.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < q; ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    const double slope = (q * sxy - sx * sy) / (q * sxx - sx * sx);
    ex.slope = slope;
    const bool small_end_low = std::abs(values.front()) <= std::abs(values.back());
    if (slope >= opt.decay_min_slope && vmax / vmin >= opt.decay_min_range && small_end_low) {
      ex.kind = Extrapolation::Kind::decays_to_zero;
      ex.value = 0.0;
      return ex;
    }
  }

  ex.kind = Extrapolation::Kind::none;
  ex.value = median3(values[best_i], values[best_i + 1], values[best_i + 2]);
  return ex;
}

LawReport law_check(const StructureCurve& curve,
                    std::span<const std::pair<double, double>> d_sweep,
                    const LawCheckOptions& opt) {
  if (curve.lambdas.size() < 4 || d_sweep.size() < 4) {
    throw config_error("law_check: need at least 4 scales in each sweep");
  }
  LawReport rep;
  rep.entry = curve.entry;
  rep.options = opt;

  std::vector<double> de, dv;
  for (const auto& [e, v] : d_sweep) {
    de.push_back(e);
    dv.push_back(v);
  }
  rep.s_fit = extrapolate_sweep(curve.lambdas, curve.g, opt);
  rep.d_fit = extrapolate_sweep(de, dv, opt);
  rep.s_extrapolated = rep.s_fit.value;
  rep.d_extrapolated = rep.d_fit.value;

  auto near_zero = [&](const Extrapolation& ex) {
    return ex.kind == Extrapolation::Kind::all_below_floor ||
           ex.kind == Extrapolation::Kind::decays_to_zero ||
           (ex.kind == Extrapolation::Kind::plateau && std::abs(ex.value) <= opt.noise_floor);
  };

  if (rep.d_fit.kind == Extrapolation::Kind::none || rep.s_fit.kind == Extrapolation::Kind::none) {
    rep.verdict = Verdict::inconclusive;
    rep.notes.push_back("no plateau found in at least one sweep");
    return rep;
  }
  if (near_zero(rep.d_fit) && near_zero(rep.s_fit)) {
    rep.verdict = Verdict::conservative;
    rep.ratio = 0.0;
    return rep;
  }
  if (std::abs(rep.d_extrapolated) > opt.noise_floor) {
    rep.ratio = rep.s_extrapolated / rep.d_extrapolated;
    const double target = 4.0 / 3.0;
    if (std::abs(rep.ratio + target) <= opt.ratio_tolerance_frac * target) {
      rep.verdict = Verdict::consistent_4_3;
      return rep;
    }
  }
  rep.verdict = Verdict::inconclusive;
  return rep;
}

}  // namespace yaglom
