#include "uncert/bounds.hpp"

#include <array>
#include <cmath>
#include <numeric>

#include "uncert/error.hpp"

namespace uncert {

namespace {

OverlapBound make_bound(double value, std::pair<int, int> arg) {
  return {value, value > 0.0 ? -std::log2(value) : std::numeric_limits<double>::infinity(), arg};
}

// Strictly larger by more than round-off keeps the first (j, k) on ties.
constexpr double kTieBand = 1e-14;

std::vector<CMatrix> element_roots(const Povm& p) {
  std::vector<CMatrix> out;
  out.reserve(p.size());
  for (const auto& e : p.elements()) out.push_back(matrix_func(e, MatrixFunction::Sqrt));
  return out;
}

void require_projector(const CMatrix& pi, int d) {
  if (pi.rows() != d || pi.cols() != d) throw Error(ErrorCode::DimMismatch, "projector dimension");
  if (!is_hermitian(pi, tol::kHermitian) || max_abs(pi * pi - pi) > 1e-10)
    throw Error(ErrorCode::NotProjector, "Pi is not an orthogonal projector");
}

}  // namespace

OverlapBound overlap_r(const BasisSet& v, const BasisSet& w) {
  if (v.dim() != w.dim()) throw Error(ErrorCode::DimMismatch, "bases differ in dimension");
  const CMatrix overlaps = v.kets().adjoint() * w.kets();
  double best = -1.0;
  std::pair<int, int> arg{0, 0};
  for (int j = 0; j < v.dim(); ++j)
    for (int k = 0; k < w.dim(); ++k) {
      const double o = std::norm(overlaps(j, k));
      if (o > best + kTieBand) {
        best = o;
        arg = {j, k};
      }
    }
  return make_bound(best, arg);
}

OverlapBound r_povm(const Povm& p, const Povm& q) {
  if (p.dim() != q.dim()) throw Error(ErrorCode::DimMismatch, "POVMs differ in dimension");
  return r_projected(p, q, CMatrix::Identity(p.dim(), p.dim()));
}

OverlapBound r_projected(const Povm& p, const Povm& q, const CMatrix& pi) {
  if (p.dim() != q.dim()) throw Error(ErrorCode::DimMismatch, "POVMs differ in dimension");
  require_projector(pi, p.dim());
  const auto rp = element_roots(p);
  const auto rq = element_roots(q);
  double best = -1.0;
  std::pair<int, int> arg{0, 0};
  for (int j = 0; j < p.size(); ++j)
    for (int k = 0; k < q.size(); ++k) {
      const double n = sup_norm(rq[k] * pi * rp[j]);
      const double value = n * n;
      if (value > best + kTieBand) {
        best = value;
        arg = {j, k};
      }
    }
  return make_bound(best, arg);
}

OverlapBound single_povm_bound(const Povm& p, const CMatrix& pi) {
  require_projector(pi, p.dim());
  const auto rp = element_roots(p);
  double best = -1.0;
  std::pair<int, int> arg{0, 0};
  for (int j = 0; j < p.size(); ++j) {
    const double n = sup_norm(pi * rp[j]);
    if (n * n > best + kTieBand) {
      best = n * n;
      arg = {j, 0};
    }
  }
  return make_bound(best, arg);
}

namespace {

constexpr std::array<std::pair<Relation, std::string_view>, 15> kRelationNames{{
    {Relation::EQ3, "EQ3"},   {Relation::EQ10, "EQ10"}, {Relation::EQ11, "EQ11"},
    {Relation::EQ12, "EQ12"}, {Relation::EQ13, "EQ13"}, {Relation::EQ14, "EQ14"},
    {Relation::EQ15, "EQ15"}, {Relation::EQ16, "EQ16"}, {Relation::EQ20, "EQ20"},
    {Relation::EQ21, "EQ21"}, {Relation::EQ22, "EQ22"}, {Relation::EQ23, "EQ23"},
    {Relation::EQ24, "EQ24"}, {Relation::EQ26, "EQ26"}, {Relation::EQ27, "EQ27"},
}};

}  // namespace

std::string_view to_string(Relation r) {
  for (const auto& [rel, name] : kRelationNames)
    if (rel == r) return name;
  return "?";
}

std::optional<Relation> parse_relation(std::string_view name) {
  for (const auto& [rel, n] : kRelationNames)
    if (n == name) return rel;
  return std::nullopt;
}

std::vector<Relation> all_relations() {
  std::vector<Relation> out;
  for (const auto& [rel, name] : kRelationNames) out.push_back(rel);
  return out;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::Equality: return "equality";
  }
  return "?";
}

double UncertaintyReport::lhs_total() const {
  double s = 0.0;
  for (const auto& t : lhs_terms) s += t.value;
  return s;
}

Verdict classify_gap(double gap, double tol_eq) {
  if (std::abs(gap) <= tol_eq) return Verdict::Equality;
  return gap > 0.0 ? Verdict::Holds : Verdict::Violated;
}

bool mutually_unbiased(const BasisSet& v, const BasisSet& w, double tol) {
  if (v.dim() != w.dim()) return false;
  const CMatrix overlaps = v.kets().adjoint() * w.kets();
  const double target = 1.0 / v.dim();
  for (Eigen::Index i = 0; i < overlaps.size(); ++i)
    if (std::abs(std::norm(overlaps(i)) - target) > tol) return false;
  return true;
}

bool pairwise_coprime(const Dims& dims) {
  for (std::size_t i = 0; i < dims.size(); ++i)
    for (std::size_t j = i + 1; j < dims.size(); ++j)
      if (std::gcd(dims[i], dims[j]) != 1) return false;
  return true;
}

double witness_bound(double h_xb, double h_zb, int d) { return std::log2(static_cast<double>(d)) - h_xb - h_zb; }

namespace {

const QState& require_state(const RelationInputs& in, int min_subsystems, Relation r) {
  if (!in.state) throw Error(ErrorCode::ArityMismatch, std::string(to_string(r)) + " needs a state");
  if (in.state->num_subsystems() < min_subsystems)
    throw Error(ErrorCode::ArityMismatch, std::string(to_string(r)) + " needs at least " +
                                              std::to_string(min_subsystems) + " subsystems");
  return *in.state;
}

std::vector<BasisSet> bases_or(const RelationInputs& in, std::size_t n, const std::vector<BasisSet>& fallback,
                               Relation r) {
  if (in.bases.empty()) return fallback;
  if (in.bases.size() != n)
    throw Error(ErrorCode::ArityMismatch, std::string(to_string(r)) + " needs " + std::to_string(n) + " bases");
  return in.bases;
}

std::vector<BasisSet> fourier_xz(int d) {
  auto [z, x] = fourier_pair(d);
  return {x, z};
}

std::vector<Povm> povms_of(const RelationInputs& in, std::size_t n, Relation r) {
  std::vector<Povm> out = in.povms;
  if (out.empty())
    for (const auto& b : in.bases) out.push_back(Povm::from_basis(b));
  if (out.size() != n)
    throw Error(ErrorCode::ArityMismatch, std::string(to_string(r)) + " needs " + std::to_string(n) + " POVMs");
  return out;
}

CMatrix projector_for(const RelationInputs& in, const QState& rho) {
  const CMatrix rho_a = partial_trace(rho.matrix(), rho.dims(), {0});
  if (!in.projector) return support_projector(rho_a);
  const CMatrix& pi = *in.projector;
  require_projector(pi, static_cast<int>(rho_a.rows()));
  const CMatrix outside = (CMatrix::Identity(pi.rows(), pi.cols()) - pi) * rho_a;
  if (max_abs(outside) > tol::kEquality)
    throw Error(ErrorCode::NotProjector, "projector does not contain the support of rho_a");
  return pi;
}

void require_dim(int basis_dim, int d) {
  if (basis_dim != d) throw Error(ErrorCode::DimMismatch, "measurement does not act on a");
}

UncertaintyReport finish(Relation r, std::vector<Term> terms, double rhs, double tol_eq) {
  UncertaintyReport rep;
  rep.relation = r;
  rep.lhs_terms = std::move(terms);
  rep.rhs = rhs;
  rep.gap = rep.lhs_total() - rhs;
  rep.holds = classify_gap(rep.gap, tol_eq);
  return rep;
}

}  // namespace

UncertaintyReport eval_relation(Relation r, const RelationInputs& in, double tol_eq) {
  switch (r) {
    case Relation::EQ3:
    case Relation::EQ10: {
      const QState& rho = require_state(in, 3, r);
      const int d = rho.dims()[0];
      const auto b = bases_or(in, 2, fourier_xz(d), r);
      require_dim(b[0].dim(), d);
      require_dim(b[1].dim(), d);
      double rhs;
      if (r == Relation::EQ3) {
        if (!mutually_unbiased(b[0], b[1])) throw Error(ErrorCode::NotMub, "EQ3 needs mutually unbiased bases");
        rhs = std::log2(static_cast<double>(d));
      } else {
        rhs = overlap_r(b[0], b[1]).neg_log;
      }
      return finish(r,
                    {{"H(v|c)", cond_entropy_meas(b[0], rho, 0, 2).bits},
                     {"H(w|b)", cond_entropy_meas(b[1], rho, 0, 1).bits}},
                    rhs, tol_eq);
    }
    case Relation::EQ11: {
      const QState& rho = require_state(in, 1, r);
      const auto b = bases_or(in, 2, fourier_xz(rho.dims()[0]), r);
      require_dim(b[0].dim(), rho.dims()[0]);
      require_dim(b[1].dim(), rho.dims()[0]);
      return finish(r, {{"H(v)", measured_entropy(b[0], rho).bits}, {"H(w)", measured_entropy(b[1], rho).bits}},
                    overlap_r(b[0], b[1]).neg_log, tol_eq);
    }
    case Relation::EQ12:
    case Relation::EQ14: {
      const QState& rho = require_state(in, 3, r);
      const auto p = povms_of(in, 2, r);
      require_dim(p[0].dim(), rho.dims()[0]);
      require_dim(p[1].dim(), rho.dims()[0]);
      const double rhs = r == Relation::EQ12 ? r_povm(p[0], p[1]).neg_log
                                             : r_projected(p[0], p[1], projector_for(in, rho)).neg_log;
      return finish(r,
                    {{"H(P|b)", cond_entropy_meas(p[0], rho, 0, 1).bits},
                     {"H(Q|c)", cond_entropy_meas(p[1], rho, 0, 2).bits}},
                    rhs, tol_eq);
    }
    case Relation::EQ13:
    case Relation::EQ15: {
      const QState& rho = require_state(in, 2, r);
      const auto p = povms_of(in, 1, r);
      require_dim(p[0].dim(), rho.dims()[0]);
      const int d = p[0].dim();
      const CMatrix pi = r == Relation::EQ13 ? CMatrix::Identity(d, d) : projector_for(in, rho);
      return finish(r, {{"H(P|b)", cond_entropy_meas(p[0], rho, 0, 1).bits}}, single_povm_bound(p[0], pi).neg_log,
                    tol_eq);
    }
    case Relation::EQ16: {
      const QState& rho = require_state(in, 3, r);
      if (rho.num_subsystems() != 3) throw Error(ErrorCode::ArityMismatch, "EQ16 needs a tripartite state");
      if (!rho.is_pure()) throw Error(ErrorCode::NotPure, "EQ16 needs a pure tripartite state");
      const auto p = povms_of(in, 2, r);
      require_dim(p[0].dim(), rho.dims()[0]);
      require_dim(p[1].dim(), rho.dims()[0]);
      if (!p[1].is_rank_one()) throw Error(ErrorCode::ArityMismatch, "EQ16 needs a rank-one POVM N");
      const double rhs = r_projected(p[0], p[1], projector_for(in, rho)).neg_log + cond_entropy_vn(rho, 0, 1);
      return finish(r,
                    {{"H(P|b)", cond_entropy_meas(p[0], rho, 0, 1).bits},
                     {"H(N|b)", cond_entropy_meas(p[1], rho, 0, 1).bits}},
                    rhs, tol_eq);
    }
    case Relation::EQ20:
    case Relation::EQ21: {
      const QState& rho = require_state(in, 1, r);
      const int d = rho.dims()[0];
      const auto b = bases_or(in, 2, fourier_xz(d), r);
      require_dim(b[0].dim(), d);
      require_dim(b[1].dim(), d);
      double rhs = std::log2(static_cast<double>(d));
      if (r == Relation::EQ21) rhs += von_neumann(rho.num_subsystems() == 1 ? rho : rho.marginal({0})).bits;
      return finish(r, {{"H(x)", measured_entropy(b[0], rho).bits}, {"H(z)", measured_entropy(b[1], rho).bits}}, rhs,
                    tol_eq);
    }
    case Relation::EQ22:
    case Relation::EQ23: {
      const QState& rho = require_state(in, 2, r);
      const int d = rho.dims()[0];
      const auto b = bases_or(in, 2, fourier_xz(d), r);
      require_dim(b[0].dim(), d);
      require_dim(b[1].dim(), d);
      const double rhs = std::log2(static_cast<double>(d)) + cond_entropy_vn(rho, 0, 1);
      const Term first = r == Relation::EQ22 ? Term{"H(x)", measured_entropy(b[0], rho).bits}
                                             : Term{"H(x|b)", cond_entropy_meas(b[0], rho, 0, 1).bits};
      return finish(r, {first, {"H(z|b)", cond_entropy_meas(b[1], rho, 0, 1).bits}}, rhs, tol_eq);
    }
    case Relation::EQ24: {
      const QState& rho = require_state(in, 1, r);
      if (rho.dims()[0] != 2) throw Error(ErrorCode::DimMismatch, "EQ24 is a qubit relation");
      const MubTriple t = qubit_mub_triple();
      const auto b = bases_or(in, 3, {t.x, t.y, t.z}, r);
      const double s_a = von_neumann(rho.num_subsystems() == 1 ? rho : rho.marginal({0})).bits;
      return finish(r,
                    {{"H(x)", measured_entropy(b[0], rho).bits},
                     {"H(y)", measured_entropy(b[1], rho).bits},
                     {"H(z)", measured_entropy(b[2], rho).bits}},
                    2.0 + s_a, tol_eq);
    }
    case Relation::EQ26: {
      const QState& rho = require_state(in, 2, r);
      const int d = rho.dims()[0];
      const Dims parts = in.factor_dims.empty() ? Dims{d} : in.factor_dims;
      if (total_dim(parts) != d) throw Error(ErrorCode::DimMismatch, "factor dims must multiply to dim(a)");
      if (!pairwise_coprime(parts)) throw Error(ErrorCode::NotCoprime, "EQ26 needs pairwise coprime factors");
      const BasisSet x = tensor_fourier_basis(parts);
      const BasisSet z = computational_basis(d);
      const double rhs = std::log2(static_cast<double>(d)) + cond_entropy_vn(rho, 0, 1);
      return finish(r, {{"H(X)", measured_entropy(x, rho).bits}, {"H(Z|b)", cond_entropy_meas(z, rho, 0, 1).bits}},
                    rhs, tol_eq);
    }
    case Relation::EQ27: {
      const QState& rho = require_state(in, 3, r);
      if (!rho.is_pure()) throw Error(ErrorCode::NotPure, "EQ27 needs a pure tripartite state");
      const int d = rho.dims()[0];
      const auto b = bases_or(in, 2, fourier_xz(d), r);
      return finish(r,
                    {{"H(x|b)", cond_entropy_meas(b[0], rho, 0, 1).bits},
                     {"H(z|c)", cond_entropy_meas(b[1], rho, 0, 2).bits}},
                    std::log2(static_cast<double>(d)), tol_eq);
    }
  }
  throw Error(ErrorCode::UnsupportedRelation, "unknown relation");
}

bool DpTrace::chain_holds(double tol) const {
  return std::abs(h_vc - step5) <= tol && step5 >= step6 - tol && std::abs(step6 - step7) <= tol &&
         std::abs(step7 - step9_equiv) <= tol;
}

bool DpTrace::all_equal(double tol) const {
  const double v[] = {h_vc, step5, step6, step7, step9_equiv};
  for (double a : v)
    for (double b : v)
      if (std::abs(a - b) > tol) return false;
  return true;
}

DpTrace dp_trace(const QState& rho_abc, const BasisSet& v, const BasisSet& w) {
  if (rho_abc.num_subsystems() != 3) throw Error(ErrorCode::ArityMismatch, "dp_trace needs a tripartite state");
  if (!rho_abc.is_pure()) throw Error(ErrorCode::NotPure, "dp_trace needs a pure tripartite state");
  const int d = rho_abc.dims()[0];
  if (v.dim() != d || w.dim() != d) throw Error(ErrorCode::DimMismatch, "bases do not act on a");
  if (!mutually_unbiased(v, w)) throw Error(ErrorCode::NotMub, "dp_trace needs mutually unbiased bases");

  const int db = rho_abc.dims()[1];
  const CMatrix rho_ab = partial_trace(rho_abc.matrix(), rho_abc.dims(), {0, 1});
  const CMatrix rho_b = partial_trace(rho_abc.matrix(), rho_abc.dims(), {1});
  const MeasStats sv = measure_stats(rho_abc, Povm::from_basis(v), 0, 1);
  const MeasStats sw = measure_stats(rho_abc, Povm::from_basis(w), 0, 1);
  const CMatrix overlaps = v.kets().adjoint() * w.kets();

  CMatrix sigma5 = CMatrix::Zero(d * db, d * db);
  CMatrix x = sigma5, sigma6 = sigma5;
  for (int j = 0; j < d; ++j) sigma5 += kron(v.projector(j), sv.blocks[j]);
  for (int k = 0; k < d; ++k) {
    x += kron(w.projector(k), sw.blocks[k]);
    for (int j = 0; j < d; ++j) sigma6 += std::norm(overlaps(j, k)) * kron(w.projector(k), sv.blocks[j]);
  }
  const CMatrix id = CMatrix::Identity(d, d);

  DpTrace t;
  t.d = d;
  t.h_vc = cond_entropy_meas(v, rho_abc, 0, 2).bits;
  t.step5 = relative_entropy(rho_ab, sigma5).bits;
  t.step6 = relative_entropy(x, sigma6).bits;
  t.step7 = relative_entropy(x, kron(id / static_cast<double>(d), rho_b)).bits;
  t.step8_form = relative_entropy(x, kron(id, rho_b)).bits;
  t.step9_equiv = std::log2(static_cast<double>(d)) - cond_entropy_meas(w, rho_abc, 0, 1).bits;
  return t;
}

}  // namespace uncert
