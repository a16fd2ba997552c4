#include "uncert/entropy.hpp"

#include <cmath>

#include "uncert/error.hpp"

namespace uncert {

EntropyValue shannon(std::span<const double> p) {
  double sum = 0.0, h = 0.0;
  for (double v : p) {
    if (!(v >= -1e-12)) throw Error(ErrorCode::NotDistribution, "negative probability " + std::to_string(v));
    sum += v;
    if (v > 0.0) h -= v * std::log2(v);
  }
  if (std::abs(sum - 1.0) > 1e-8) throw Error(ErrorCode::NotDistribution, "probabilities sum to " + std::to_string(sum));
  return {h, true};
}

double operator_entropy(const CMatrix& psd) {
  if (psd.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (psd + psd.adjoint()), Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double l = solver.eigenvalues()[i];
    if (l > 0.0) h -= l * std::log2(l);
  }
  return h;
}

EntropyValue von_neumann(const QState& rho) { return {operator_entropy(rho.matrix()), true}; }

EntropyValue relative_entropy(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols() || rho.rows() != rho.cols())
    throw Error(ErrorCode::DimMismatch, "relative_entropy operands differ in size");
  const HermEig se = hermitian_eig(sigma);
  const double smax = se.values.size() ? se.values.cwiseAbs().maxCoeff() : 0.0;
  double cross = 0.0, kernel_weight = 0.0;
  for (Eigen::Index k = 0; k < se.values.size(); ++k) {
    const double mu = se.values[k];
    if (mu < -tol::kPsd * smax) throw Error(ErrorCode::NotPSD, "sigma is not PSD");
    const double weight = (se.vectors.col(k).adjoint() * rho * se.vectors.col(k))(0, 0).real();
    if (smax > 0.0 && mu > tol::kSupport * smax) cross += weight * std::log2(mu);
    else kernel_weight += weight;
  }
  if (kernel_weight > 1e-10) return EntropyValue::infinite();
  return {-operator_entropy(rho) - cross, true};
}

EntropyValue relative_entropy(const QState& rho, const CMatrix& sigma) { return relative_entropy(rho.matrix(), sigma); }

namespace {

// sum_j p_j S(rho_side,j) without dividing by p_j:
// p S(X / p) = -sum mu log mu + p log p for X with trace p.
double conditional_ensemble_entropy(const MeasStats& stats) {
  double total = 0.0;
  for (std::size_t j = 0; j < stats.blocks.size(); ++j) {
    const double p = stats.probs[j];
    if (p <= 0.0) continue;
    total += operator_entropy(stats.blocks[j]) + p * std::log2(p);
  }
  return total;
}

}  // namespace

EntropyValue holevo(const Povm& p, const QState& rho, int measured, int side) {
  const MeasStats stats = measure_stats(rho, p, measured, side);
  const double s_side = operator_entropy(partial_trace(rho.matrix(), rho.dims(), {side}));
  return {s_side - conditional_ensemble_entropy(stats), true};
}

EntropyValue measured_entropy(const Povm& p, const QState& rho, int measured) {
  if (measured < 0 || measured >= rho.num_subsystems() || p.dim() != rho.dims()[measured])
    throw Error(ErrorCode::DimMismatch, "POVM does not act on measured system");
  const CMatrix local = rho.num_subsystems() == 1 ? rho.matrix() : partial_trace(rho.matrix(), rho.dims(), {measured});
  std::vector<double> probs;
  for (const auto& e : p.elements()) probs.push_back((e * local).trace().real());
  return shannon(probs);
}

EntropyValue measured_entropy(const BasisSet& basis, const QState& rho, int measured) {
  return measured_entropy(Povm::from_basis(basis), rho, measured);
}

EntropyValue cond_entropy_meas(const Povm& p, const QState& rho, int measured, int side) {
  const MeasStats stats = measure_stats(rho, p, measured, side);
  const double h = shannon(stats.probs).bits;
  const double s_side = operator_entropy(partial_trace(rho.matrix(), rho.dims(), {side}));
  const double chi = s_side - conditional_ensemble_entropy(stats);
  return {h - chi, true};
}

EntropyValue cond_entropy_meas(const BasisSet& basis, const QState& rho, int measured, int side) {
  return cond_entropy_meas(Povm::from_basis(basis), rho, measured, side);
}

double cond_entropy_vn(const QState& rho, int a, int b) {
  const int n = rho.num_subsystems();
  if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw Error(ErrorCode::DimMismatch, "cond_entropy_vn indices");
  const CMatrix rho_ab = n == 2 ? rho.matrix() : partial_trace(rho.matrix(), rho.dims(), {a, b});
  const CMatrix rho_b = partial_trace(rho.matrix(), rho.dims(), {b});
  return operator_entropy(rho_ab) - operator_entropy(rho_b);
}

namespace {

void require_tripartite_pure(const QState& rho) {
  if (rho.num_subsystems() != 3) throw Error(ErrorCode::ArityMismatch, "needs a tripartite state");
  if (!rho.is_pure()) throw Error(ErrorCode::NotPure, "needs a pure tripartite state");
}

}  // namespace

IdentityCheck rel_entropy_identity(const BasisSet& v, const QState& rho_abc) {
  require_tripartite_pure(rho_abc);
  if (v.dim() != rho_abc.dims()[0]) throw Error(ErrorCode::DimMismatch, "basis does not act on a");
  const EntropyValue lhs = cond_entropy_meas(v, rho_abc, 0, 2);
  const Dims ab{rho_abc.dims()[0], rho_abc.dims()[1]};
  const CMatrix rho_ab = partial_trace(rho_abc.matrix(), rho_abc.dims(), {0, 1});
  CMatrix dephased = CMatrix::Zero(rho_ab.rows(), rho_ab.cols());
  for (int j = 0; j < v.dim(); ++j) {
    const CMatrix pj = embed(v.projector(j), ab, 0);
    dephased += pj * rho_ab * pj;
  }
  return {lhs, relative_entropy(rho_ab, dephased)};
}

IdentityCheck povm_relative_entropy_bound(const Povm& p, const QState& rho_abc) {
  if (rho_abc.num_subsystems() != 3) throw Error(ErrorCode::ArityMismatch, "needs a tripartite state");
  if (p.dim() != rho_abc.dims()[0]) throw Error(ErrorCode::DimMismatch, "POVM does not act on a");
  const EntropyValue lhs = cond_entropy_meas(p, rho_abc, 0, 1);
  const Dims ac{rho_abc.dims()[0], rho_abc.dims()[2]};
  const CMatrix rho_ac = partial_trace(rho_abc.matrix(), rho_abc.dims(), {0, 2});
  CMatrix pinched = CMatrix::Zero(rho_ac.rows(), rho_ac.cols());
  for (const auto& e : p.elements()) {
    const CMatrix pj = embed(e, ac, 0);
    pinched += pj * rho_ac * pj;
  }
  return {lhs, relative_entropy(rho_ac, pinched)};
}

}  // namespace uncert
