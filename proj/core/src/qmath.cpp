#include "uncert/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "uncert/error.hpp"

namespace uncert {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NotState: return "NotState";
    case ErrorCode::BadDim: return "BadDim";
    case ErrorCode::NotDivisor: return "NotDivisor";
    case ErrorCode::BadRank: return "BadRank";
    case ErrorCode::NotBasis: return "NotBasis";
    case ErrorCode::NotPovm: return "NotPovm";
    case ErrorCode::NotDistribution: return "NotDistribution";
    case ErrorCode::NotPure: return "NotPure";
    case ErrorCode::NotProjector: return "NotProjector";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::NotMub: return "NotMub";
    case ErrorCode::NotChannel: return "NotChannel";
    case ErrorCode::BadSpec: return "BadSpec";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::RealityViolated: return "RealityViolated";
    case ErrorCode::NotMus: return "NotMus";
    case ErrorCode::UnsupportedRelation: return "UnsupportedRelation";
    case ErrorCode::BadStep: return "BadStep";
  }
  return "Unknown";
}

double max_abs(const CMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol * (1.0 + max_abs(m));
}

HermEig hermitian_eig(const CMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimMismatch, "hermitian_eig needs a square matrix");
  if (!is_hermitian(m, tol::kHermitian)) throw Error(ErrorCode::NotHermitian, "matrix is not Hermitian");
  // Symmetrise so that round-off in the strictly lower triangle is not ignored.
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix matrix_func(const CMatrix& m, MatrixFunction f) {
  const HermEig eig = hermitian_eig(m);
  const double lmax = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
  const double psd_floor = -tol::kPsd * lmax;
  const double support = tol::kSupport * lmax;
  RVector mapped(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double l = eig.values[i];
    if (l < psd_floor) throw Error(ErrorCode::NotPSD, "eigenvalue " + std::to_string(l) + " below PSD floor");
    const bool on_support = lmax > 0.0 && l > support;
    switch (f) {
      case MatrixFunction::Sqrt: mapped[i] = std::sqrt(std::max(l, 0.0)); break;
      case MatrixFunction::Log: mapped[i] = on_support ? std::log(l) : 0.0; break;
      case MatrixFunction::Log2: mapped[i] = on_support ? std::log2(l) : 0.0; break;
      case MatrixFunction::InvSqrt: mapped[i] = on_support ? 1.0 / std::sqrt(l) : 0.0; break;
    }
  }
  CMatrix out = eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint();
  return 0.5 * (out + out.adjoint());
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix kron(std::span<const CMatrix> factors) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

Ket kron_ket(const Ket& a, const Ket& b) {
  Ket out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

int total_dim(const Dims& dims) {
  int d = 1;
  for (int k : dims) {
    if (k < 1) throw Error(ErrorCode::BadDim, "subsystem dimension must be positive");
    d *= k;
  }
  return d;
}

namespace {

void check_square(const CMatrix& m, const Dims& dims) {
  if (m.rows() != m.cols() || m.rows() != total_dim(dims))
    throw Error(ErrorCode::DimMismatch, "matrix size " + std::to_string(m.rows()) + "x" +
                                            std::to_string(m.cols()) + " does not match dims");
}

// Mixed-radix digits of a flat index, most significant subsystem first.
std::vector<int> digits(int index, const Dims& dims) {
  std::vector<int> out(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    out[k] = index % dims[k];
    index /= dims[k];
  }
  return out;
}

}  // namespace

CMatrix partial_trace(const CMatrix& m, const Dims& dims, std::vector<int> keep) {
  check_square(m, dims);
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw Error(ErrorCode::DimMismatch, "keep index out of range");
    kept[k] = true;
  }
  const int total = total_dim(dims);
  int keep_dim = 1;
  for (int k : keep) keep_dim *= dims[k];

  std::vector<int> kept_index(total), traced_index(total);
  for (int i = 0; i < total; ++i) {
    const auto dig = digits(i, dims);
    int ki = 0, ti = 0;
    for (int k = 0; k < n; ++k) {
      if (kept[k]) ki = ki * dims[k] + dig[k];
      else ti = ti * dims[k] + dig[k];
    }
    kept_index[i] = ki;
    traced_index[i] = ti;
  }
  CMatrix out = CMatrix::Zero(keep_dim, keep_dim);
  for (int j = 0; j < total; ++j)
    for (int i = 0; i < total; ++i)
      if (traced_index[i] == traced_index[j]) out(kept_index[i], kept_index[j]) += m(i, j);
  return out;
}

CMatrix partial_transpose(const CMatrix& m, const Dims& dims, int index) {
  check_square(m, dims);
  if (index < 0 || index >= static_cast<int>(dims.size()))
    throw Error(ErrorCode::DimMismatch, "partial_transpose index out of range");
  const int total = total_dim(dims);
  int stride = 1;
  for (int k = static_cast<int>(dims.size()) - 1; k > index; --k) stride *= dims[k];
  const int dk = dims[index];
  CMatrix out(total, total);
  for (int i = 0; i < total; ++i) {
    const int di = (i / stride) % dk;
    for (int j = 0; j < total; ++j) {
      const int dj = (j / stride) % dk;
      const int ni = i + (dj - di) * stride;
      const int nj = j + (di - dj) * stride;
      out(ni, nj) = m(i, j);
    }
  }
  return out;
}

CMatrix embed(const CMatrix& op, const Dims& dims, int index) {
  if (index < 0 || index >= static_cast<int>(dims.size()) || op.rows() != dims[index] || op.cols() != dims[index])
    throw Error(ErrorCode::DimMismatch, "embed: operator does not match subsystem");
  int before = 1, after = 1;
  for (int k = 0; k < index; ++k) before *= dims[k];
  for (int k = index + 1; k < static_cast<int>(dims.size()); ++k) after *= dims[k];
  return kron(kron(CMatrix::Identity(before, before), op), CMatrix::Identity(after, after));
}

namespace {

std::vector<int> permutation_map(const Dims& dims, const std::vector<int>& order) {
  const int n = static_cast<int>(dims.size());
  if (static_cast<int>(order.size()) != n) throw Error(ErrorCode::DimMismatch, "order must list every subsystem");
  std::vector<int> check(order);
  std::sort(check.begin(), check.end());
  for (int k = 0; k < n; ++k)
    if (check[k] != k) throw Error(ErrorCode::DimMismatch, "order is not a permutation");
  Dims new_dims(n);
  for (int k = 0; k < n; ++k) new_dims[k] = dims[order[k]];
  const int total = total_dim(dims);
  std::vector<int> map(total);
  for (int i = 0; i < total; ++i) {
    const auto dig = digits(i, dims);
    int ni = 0;
    for (int k = 0; k < n; ++k) ni = ni * new_dims[k] + dig[order[k]];
    map[i] = ni;
  }
  return map;
}

}  // namespace

CMatrix permute_subsystems(const CMatrix& m, const Dims& dims, const std::vector<int>& order) {
  check_square(m, dims);
  const auto map = permutation_map(dims, order);
  CMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(map[i], map[j]) = m(i, j);
  return out;
}

Ket permute_subsystems(const Ket& psi, const Dims& dims, const std::vector<int>& order) {
  if (psi.size() != total_dim(dims)) throw Error(ErrorCode::DimMismatch, "ket size does not match dims");
  const auto map = permutation_map(dims, order);
  Ket out(psi.size());
  for (Eigen::Index i = 0; i < psi.size(); ++i) out[map[i]] = psi[i];
  return out;
}

double sup_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

int support_rank(const CMatrix& rho) {
  const HermEig eig = hermitian_eig(rho);
  const double lmax = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
  if (lmax == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values[i] < -tol::kPsd * lmax) throw Error(ErrorCode::NotPSD, "support of a non-PSD operator");
    if (eig.values[i] > tol::kSupport * lmax) ++rank;
  }
  return rank;
}

CMatrix support_projector(const CMatrix& rho) {
  const HermEig eig = hermitian_eig(rho);
  const double lmax = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  if (lmax == 0.0) return out;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values[i] < -tol::kPsd * lmax) throw Error(ErrorCode::NotPSD, "support of a non-PSD operator");
    if (eig.values[i] > tol::kSupport * lmax) out += eig.vectors.col(i) * eig.vectors.col(i).adjoint();
  }
  return out;
}

void fix_global_phase(Eigen::Ref<Ket> v) {
  if (v.size() == 0) return;
  const double top = v.cwiseAbs().maxCoeff();
  if (top == 0.0) return;
  Eigen::Index pivot = 0;
  while (std::abs(v[pivot]) < top - 1e-12) ++pivot;
  const Complex phase = v[pivot] / std::abs(v[pivot]);
  v *= std::conj(phase);
  v[pivot] = Complex(std::abs(v[pivot]), 0.0);
}

CMatrix projector(const Ket& v) { return v * v.adjoint(); }

Purification purify(const CMatrix& rho) {
  const HermEig eig = hermitian_eig(rho);
  const Eigen::Index d = eig.values.size();
  const double lmax = d ? eig.values.cwiseAbs().maxCoeff() : 0.0;
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = d - 1; i >= 0; --i) {
    if (eig.values[i] < -tol::kPsd * lmax) throw Error(ErrorCode::NotPSD, "purify needs a PSD operator");
    if (eig.values[i] > tol::kSupport * lmax) support.push_back(i);
  }
  const int r = static_cast<int>(support.size());
  Ket psi = Ket::Zero(d * r);
  for (int k = 0; k < r; ++k) {
    Ket e = eig.vectors.col(support[k]);
    fix_global_phase(e);
    const double amp = std::sqrt(eig.values[support[k]]);
    for (Eigen::Index a = 0; a < d; ++a) psi[a * r + k] = amp * e[a];
  }
  return {psi, r};
}

double trace_distance(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw Error(ErrorCode::DimMismatch, "trace_distance operands differ in size");
  const CMatrix diff = rho - sigma;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace uncert
