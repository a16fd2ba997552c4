#include <cmath>
#include <random>

#include "uncert/error.hpp"
#include "uncert/mus.hpp"

namespace uncert {

std::string_view to_string(MusClass c) {
  switch (c) {
    case MusClass::Upsilon: return "Upsilon";
    case MusClass::Omega: return "Omega";
    case MusClass::Lambda: return "Lambda";
    case MusClass::NotMus: return "NotMus";
    case MusClass::Indeterminate: return "Indeterminate";
  }
  return "?";
}

double min_partial_transpose_eigenvalue(const QState& rho_xy) {
  if (rho_xy.num_subsystems() != 2) throw Error(ErrorCode::ArityMismatch, "needs a bipartite state");
  return hermitian_eig(partial_transpose(rho_xy.matrix(), rho_xy.dims(), 1)).values[0];
}

bool is_npt(const QState& rho_xy) { return min_partial_transpose_eigenvalue(rho_xy) < -1e-10; }

namespace {

CMatrix random_probe(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix g(d, d);
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = Complex(n(rng), n(rng));
  const CMatrix h = 0.5 * (g + g.adjoint());
  return CMatrix::Identity(d, d) + 0.5 * h / sup_norm(h);
}

bool omega_attempt(const QState& rho, const std::vector<Ket>& candidates, const CMatrix& probe, double tol) {
  const int da = rho.dims()[0], db = rho.dims()[1];
  const CMatrix ia = CMatrix::Identity(da, da);
  const CMatrix t = partial_trace(kron(probe, CMatrix::Identity(db, db)) * rho.matrix(), rho.dims(), {1});
  const HermEig e = hermitian_eig(0.5 * (t + t.adjoint()));
  const double top = e.values.cwiseAbs().maxCoeff();

  // Group side eigenvectors by the w ket their conditional state on x matches.
  std::vector<int> owner(candidates.size(), -1);
  std::vector<CMatrix> groups;
  std::vector<int> group_ket;
  for (int i = 0; i < db; ++i) {
    if (std::abs(e.values[i]) <= tol::kSupport * top) continue;
    const Ket v = e.vectors.col(i);
    const CMatrix side = kron(ia, v);
    const CMatrix cond = side.adjoint() * rho.matrix() * side;
    const double w = cond.trace().real();
    if (w <= 0.0) return false;
    int best = -1;
    double best_fid = -1.0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const double fid = (candidates[c].adjoint() * cond * candidates[c])(0, 0).real() / w;
      if (fid > best_fid + 1e-14) {
        best_fid = fid;
        best = static_cast<int>(c);
      }
    }
    if (best_fid < 1.0 - tol) return false;
    if (owner[best] < 0) {
      owner[best] = static_cast<int>(groups.size());
      groups.push_back(CMatrix::Zero(db, db));
      group_ket.push_back(best);
    }
    groups[owner[best]] += v * v.adjoint();
  }

  CMatrix rebuilt = CMatrix::Zero(rho.dim(), rho.dim());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const CMatrix p = kron(ia, groups[g]);
    const CMatrix block = p * rho.matrix() * p;
    const CMatrix tau = partial_trace(block, rho.dims(), {1});
    const Ket& w = candidates[group_ket[g]];
    if (trace_distance(block, kron(w * w.adjoint(), tau)) > tol) return false;
    rebuilt += block;
  }
  return trace_distance(rebuilt, rho.matrix()) <= tol;
}

}  // namespace

bool has_omega_form(const QState& rho_xy, std::uint64_t seed, double tol) {
  if (rho_xy.num_subsystems() != 2) throw Error(ErrorCode::ArityMismatch, "needs a bipartite state");
  const int d = rho_xy.dims()[0];
  std::vector<Ket> candidates;
  for (int s : factors(d).factors) {
    const BasisSet w = w_basis(d, s);
    for (int j = 0; j < d; ++j) candidates.push_back(w.ket(j));
  }
  constexpr int kAttempts = 5;
  for (int attempt = 0; attempt < kAttempts; ++attempt)
    if (omega_attempt(rho_xy, candidates, random_probe(d, derive_seed(seed, attempt)), tol)) return true;
  return false;
}

ClassLabel classify_mus(const QState& rho_abc, double tol_eq) {
  const auto [r1, r2] = check_mus_equality(rho_abc, tol_eq);
  ClassLabel out;
  ClassEvidence& ev = out.evidence;
  ev.gap_xb_zc = r1.gap;
  ev.gap_xc_zb = r2.gap;
  if (std::abs(r1.gap) > tol_eq || std::abs(r2.gap) > tol_eq)
    throw Error(ErrorCode::NotMus, "the state does not meet log2 d with equality");

  const int d = rho_abc.dims()[0];
  for (int s : factors(d).factors) {
    const BasisSet w = w_basis(d, s);
    WEntropy we{s, cond_entropy_meas(w, rho_abc, 0, 1).bits, cond_entropy_meas(w, rho_abc, 0, 2).bits};
    if (!ev.upsilon_factor && (we.h_b <= tol_eq || we.h_c <= tol_eq)) {
      ev.upsilon_factor = s;
      ev.upsilon_side = we.h_b <= tol_eq ? 'b' : 'c';
    }
    ev.w_entropies.push_back(we);
  }

  const QState rho_ab = rho_abc.marginal({0, 1});
  const QState rho_ac = rho_abc.marginal({0, 2});
  ev.min_pt_ab = min_partial_transpose_eigenvalue(rho_ab);
  ev.min_pt_ac = min_partial_transpose_eigenvalue(rho_ac);
  ev.npt_ab = ev.min_pt_ab < -1e-10;
  ev.npt_ac = ev.min_pt_ac < -1e-10;
  ev.omega_ab = has_omega_form(rho_ab);
  ev.omega_ac = has_omega_form(rho_ac);

  if (ev.upsilon_factor)
    out.label = MusClass::Upsilon;
  else if (ev.omega_ab && ev.omega_ac && !ev.npt_ab && !ev.npt_ac)
    out.label = MusClass::Omega;
  else if (ev.npt_ab && ev.npt_ac)
    out.label = MusClass::Lambda;
  else
    out.label = MusClass::Indeterminate;
  return out;
}

}  // namespace uncert
