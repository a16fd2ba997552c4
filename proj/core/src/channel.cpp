#include <cmath>

#include "uncert/error.hpp"
#include "uncert/mus.hpp"

namespace uncert {

Channel::Channel(std::vector<CMatrix> kraus, Unchecked) : kraus_(std::move(kraus)) {
  out_dim_ = static_cast<int>(kraus_.front().rows());
  in_dim_ = static_cast<int>(kraus_.front().cols());
}

Channel::Channel(std::vector<CMatrix> kraus) {
  if (kraus.empty()) throw Error(ErrorCode::NotChannel, "no operator elements");
  const auto rows = kraus.front().rows(), cols = kraus.front().cols();
  CMatrix sum = CMatrix::Zero(cols, cols);
  for (const auto& k : kraus) {
    if (k.rows() != rows || k.cols() != cols) throw Error(ErrorCode::NotChannel, "operator elements differ in shape");
    if (!k.allFinite()) throw Error(ErrorCode::NotChannel, "non-finite operator element");
    sum += k.adjoint() * k;
  }
  if (max_abs(sum - CMatrix::Identity(cols, cols)) > 1e-10)
    throw Error(ErrorCode::NotChannel, "operator elements are not trace preserving");
  *this = Channel(std::move(kraus), Unchecked{});
}

Channel measurement_channel(const BasisSet& w) {
  std::vector<CMatrix> k;
  for (int j = 0; j < w.dim(); ++j) k.push_back(w.projector(j));
  return Channel(std::move(k));
}

Channel identity_channel(int d) { return Channel({CMatrix::Identity(d, d)}); }

Channel local_channel(const Channel& e, const Dims& dims, int index) {
  if (index < 0 || index >= static_cast<int>(dims.size()) || dims[index] != e.in_dim())
    throw Error(ErrorCode::DimMismatch, "channel does not fit the subsystem");
  if (e.in_dim() != e.out_dim()) throw Error(ErrorCode::DimMismatch, "local_channel needs a square channel");
  std::vector<CMatrix> k;
  for (const auto& op : e.kraus()) k.push_back(embed(op, dims, index));
  return Channel(std::move(k));
}

CMatrix apply_channel(const Channel& e, const CMatrix& rho) {
  if (rho.rows() != e.in_dim() || rho.cols() != e.in_dim())
    throw Error(ErrorCode::DimMismatch, "input does not match the channel");
  CMatrix out = CMatrix::Zero(e.out_dim(), e.out_dim());
  for (const auto& k : e.kraus()) out += k * rho * k.adjoint();
  return out;
}

QState apply_channel(const Channel& e, const QState& rho) {
  const CMatrix out = apply_channel(e, rho.matrix());
  if (e.out_dim() == e.in_dim()) return QState(out, rho.dims(), rho.labels());
  return QState(out, {e.out_dim()});
}

CMatrix adjoint_apply(const Channel& e, const CMatrix& x) {
  if (x.rows() != e.out_dim() || x.cols() != e.out_dim())
    throw Error(ErrorCode::DimMismatch, "operator does not match the channel output");
  CMatrix out = CMatrix::Zero(e.in_dim(), e.in_dim());
  for (const auto& k : e.kraus()) out += k.adjoint() * x * k;
  return out;
}

Channel petz_map(const Channel& e, const CMatrix& sigma) {
  if (sigma.rows() != e.in_dim() || sigma.cols() != e.in_dim())
    throw Error(ErrorCode::DimMismatch, "sigma does not match the channel input");
  const CMatrix root = matrix_func(sigma, MatrixFunction::Sqrt);
  const CMatrix image = apply_channel(e, sigma);
  const CMatrix inv_root = matrix_func(image, MatrixFunction::InvSqrt);

  std::vector<CMatrix> r;
  for (const auto& k : e.kraus()) r.push_back(root * k.adjoint() * inv_root);

  const CMatrix kernel = CMatrix::Identity(image.rows(), image.cols()) - support_projector(image);
  const double tr = sigma.trace().real();
  if (kernel.trace().real() > 0.5 && tr > 0.0) {
    const HermEig ks = hermitian_eig(kernel);
    const HermEig ss = hermitian_eig(sigma / tr);
    for (Eigen::Index m = 0; m < ss.values.size(); ++m) {
      if (ss.values[m] <= 0.0) continue;
      for (Eigen::Index n = 0; n < ks.values.size(); ++n) {
        if (ks.values[n] < 0.5) continue;
        r.push_back(std::sqrt(ss.values[m]) * ss.vectors.col(m) * ks.vectors.col(n).adjoint());
      }
    }
  }
  return Channel(std::move(r), Channel::Unchecked{});
}

RecoveryResidual recovery_check(const CMatrix& rho, const CMatrix& sigma, const Channel& e) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw Error(ErrorCode::DimMismatch, "rho and sigma differ in dimension");
  const Channel back = petz_map(e, sigma);
  return {trace_distance(apply_channel(back, apply_channel(e, rho)), rho),
          trace_distance(apply_channel(back, apply_channel(e, sigma)), sigma)};
}

RecoveryResidual relation_recovery(const QState& rho_ab, const BasisSet& z, const BasisSet& x) {
  if (rho_ab.num_subsystems() != 2) throw Error(ErrorCode::ArityMismatch, "needs a bipartite state");
  if (z.dim() != rho_ab.dims()[0] || x.dim() != rho_ab.dims()[0])
    throw Error(ErrorCode::DimMismatch, "bases do not act on a");
  const Channel ez = local_channel(measurement_channel(z), rho_ab.dims(), 0);
  const Channel ex = local_channel(measurement_channel(x), rho_ab.dims(), 0);
  return recovery_check(rho_ab.matrix(), apply_channel(ex, rho_ab.matrix()), ez);
}

}  // namespace uncert
