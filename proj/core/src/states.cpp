#include "uncert/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "uncert/error.hpp"

namespace uncert {

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(std::string(1, static_cast<char>('a' + k % 26)));
  return out;
}

QState::QState(CMatrix matrix, Dims dims, std::vector<std::string> labels)
    : matrix_(std::move(matrix)), dims_(std::move(dims)), labels_(std::move(labels)) {
  if (dims_.empty()) dims_ = {static_cast<int>(matrix_.rows())};
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() != total_dim(dims_))
    throw Error(ErrorCode::DimMismatch, "state matrix does not match dims");
  if (labels_.empty()) labels_ = default_labels(dims_.size());
  if (labels_.size() != dims_.size()) throw Error(ErrorCode::DimMismatch, "one label per subsystem");
  if (!matrix_.allFinite()) throw Error(ErrorCode::NotState, "non-finite entries");
  if (!is_hermitian(matrix_, tol::kHermitian)) throw Error(ErrorCode::NotState, "state is not Hermitian");
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > tol::kTrace) throw Error(ErrorCode::NotState, "trace " + std::to_string(tr) + " != 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (matrix_ + matrix_.adjoint()), Eigen::EigenvaluesOnly);
  const double lmax = solver.eigenvalues().cwiseAbs().maxCoeff();
  if (solver.eigenvalues().minCoeff() < -tol::kPsd * lmax) throw Error(ErrorCode::NotState, "state is not PSD");
}

QState QState::from_ket(const Ket& psi, Dims dims, std::vector<std::string> labels) {
  const double n2 = psi.squaredNorm();
  if (!(n2 > 0.0)) throw Error(ErrorCode::NotState, "zero ket");
  return QState(psi * psi.adjoint() / n2, std::move(dims), std::move(labels));
}

QState QState::marginal(std::vector<int> keep) const {
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  Dims d;
  std::vector<std::string> l;
  for (int k : keep) {
    if (k < 0 || k >= num_subsystems()) throw Error(ErrorCode::DimMismatch, "marginal index out of range");
    d.push_back(dims_[k]);
    l.push_back(labels_[k]);
  }
  return QState(partial_trace(matrix_, dims_, keep), d, l);
}

double QState::largest_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

bool QState::is_pure(double tol) const { return largest_eigenvalue() > 1.0 - tol; }

BasisSet::BasisSet(CMatrix kets, std::string name) : kets_(std::move(kets)), name_(std::move(name)) {
  if (kets_.rows() != kets_.cols() || kets_.rows() == 0)
    throw Error(ErrorCode::NotBasis, "basis needs d kets of dimension d");
  const CMatrix gram = kets_.adjoint() * kets_;
  if (max_abs(gram - CMatrix::Identity(kets_.cols(), kets_.cols())) > tol::kOrthonormal)
    throw Error(ErrorCode::NotBasis, "kets are not orthonormal");
}

BasisSet BasisSet::canonical(CMatrix kets, std::string name) {
  for (Eigen::Index j = 0; j < kets.cols(); ++j) fix_global_phase(kets.col(j));
  return BasisSet(std::move(kets), std::move(name));
}

Povm::Povm(std::vector<CMatrix> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw Error(ErrorCode::NotPovm, "empty POVM");
  const Eigen::Index d = elements_.front().rows();
  CMatrix sum = CMatrix::Zero(d, d);
  for (const auto& e : elements_) {
    if (e.rows() != d || e.cols() != d) throw Error(ErrorCode::NotPovm, "elements differ in size");
    if (!is_hermitian(e, tol::kHermitian)) throw Error(ErrorCode::NotPovm, "element not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (e + e.adjoint()), Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -tol::kPsd) throw Error(ErrorCode::NotPovm, "element not PSD");
    sum += e;
  }
  if (max_abs(sum - CMatrix::Identity(d, d)) > tol::kOrthonormal)
    throw Error(ErrorCode::NotPovm, "elements do not sum to the identity");
}

Povm Povm::from_basis(const BasisSet& basis) {
  std::vector<CMatrix> el;
  for (int j = 0; j < basis.dim(); ++j) el.push_back(basis.projector(j));
  return Povm(std::move(el));
}

bool Povm::is_rank_one() const {
  for (const auto& e : elements_)
    if (support_rank(e) != 1) return false;
  return true;
}

BasisSet computational_basis(int d) {
  if (d < 1) throw Error(ErrorCode::BadDim, "dimension must be positive");
  return BasisSet(CMatrix::Identity(d, d), "z");
}

namespace {

Complex root_of_unity(long long power, int d) {
  const long long p = ((power % d) + d) % d;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(p) / d;
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

BasisSet fourier_basis(int d) {
  if (d < 2) throw Error(ErrorCode::BadDim, "Fourier basis needs d >= 2");
  CMatrix x(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j) x(k, j) = norm * root_of_unity(-static_cast<long long>(j) * k, d);
  return BasisSet::canonical(std::move(x), "x");
}

std::pair<BasisSet, BasisSet> fourier_pair(int d) {
  if (d < 2) throw Error(ErrorCode::BadDim, "Fourier pair needs d >= 2");
  return {computational_basis(d), fourier_basis(d)};
}

BasisSet w_basis(int d, int s) {
  if (d < 1 || s < 1 || d % s != 0)
    throw Error(ErrorCode::NotDivisor, std::to_string(s) + " does not divide " + std::to_string(d));
  const int t = d / s;
  CMatrix w = CMatrix::Zero(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(s));
  for (int beta = 0; beta < t; ++beta)
    for (int gamma = 0; gamma < s; ++gamma)
      for (int n = 0; n < s; ++n)
        w(beta + n * t, beta * s + gamma) = norm * root_of_unity(-static_cast<long long>(n) * gamma * t, d);
  return BasisSet::canonical(std::move(w), "w(s=" + std::to_string(s) + ")");
}

BasisSet tensor_basis(std::span<const BasisSet> parts) {
  if (parts.empty()) throw Error(ErrorCode::BadDim, "tensor_basis needs at least one part");
  CMatrix k = CMatrix::Identity(1, 1);
  std::string name;
  for (const auto& p : parts) {
    k = kron(k, p.kets());
    name += (name.empty() ? "" : "(x)") + p.name();
  }
  return BasisSet(std::move(k), name);
}

BasisSet tensor_fourier_basis(const Dims& parts) {
  std::vector<BasisSet> bs;
  for (int dn : parts) bs.push_back(dn == 1 ? computational_basis(1) : fourier_basis(dn));
  return tensor_basis(bs);
}

MubTriple qubit_mub_triple() {
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix y(2, 2);
  y << r, r, Complex(0, r), Complex(0, -r);
  return {fourier_basis(2), BasisSet::canonical(y, "y"), computational_basis(2)};
}

FactorSet factors(int d) {
  if (d < 1) throw Error(ErrorCode::BadDim, "factors needs d >= 1");
  FactorSet out{d, {}};
  for (int s = 1; s <= d; ++s)
    if (d % s == 0) out.factors.push_back(s);
  return out;
}

Ket fourier_unbiased_ket(int d) {
  if (d < 2) throw Error(ErrorCode::BadDim, "needs d >= 2");
  Ket psi(d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < d; ++k) {
    // Zadoff-Chu style chirp: omega^{k^2} for odd d, e^{i pi k^2 / d} for even d.
    const double angle = (d % 2 == 1) ? 2.0 * std::numbers::pi * ((static_cast<long long>(k) * k) % d) / d
                                      : std::numbers::pi * ((static_cast<long long>(k) * k) % (2 * d)) / d;
    psi[k] = norm * Complex(std::cos(angle), std::sin(angle));
  }
  return psi;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) { return master ^ splitmix64(index); }

namespace {

CMatrix gaussian_matrix(int rows, int cols, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(rows, cols);
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(gen);
      const double im = normal(gen);
      g(i, j) = Complex(s * re, s * im);
    }
  return g;
}

// Haar-distributed columns: QR of a Gaussian matrix with the R diagonal phases
// folded back into Q.
CMatrix haar_columns(int rows, int cols, std::mt19937_64& gen) {
  const CMatrix g = gaussian_matrix(rows, cols, gen);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(rows, cols);
  const CMatrix r = qr.matrixQR();
  for (int j = 0; j < cols; ++j) {
    const Complex rjj = r(j, j);
    if (std::abs(rjj) > 0.0) q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

}  // namespace

QState random_state(const Dims& dims, int rank, std::uint64_t seed) {
  const int d = total_dim(dims);
  if (rank < 1 || rank > d) throw Error(ErrorCode::BadRank, "rank must be in [1, dim]");
  std::mt19937_64 gen(seed);
  const CMatrix g = gaussian_matrix(d, rank, gen);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  return QState(std::move(rho), dims);
}

Ket random_ket(int d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Ket psi = gaussian_matrix(d, 1, gen).col(0);
  return psi / psi.norm();
}

QState random_pure_state(const Dims& dims, std::uint64_t seed) {
  return QState::from_ket(random_ket(total_dim(dims), seed), dims);
}

BasisSet random_basis(int d, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::BadDim, "dimension must be positive");
  std::mt19937_64 gen(seed);
  return BasisSet::canonical(haar_columns(d, d, gen), "random");
}

CMatrix random_isometry(int d_in, int d_out, std::uint64_t seed) {
  if (d_in < 1 || d_out < d_in) throw Error(ErrorCode::BadDim, "isometry needs 1 <= d_in <= d_out");
  std::mt19937_64 gen(seed);
  return haar_columns(d_out, d_in, gen);
}

Povm random_povm(int d, int n, std::uint64_t seed) {
  if (d < 1 || n < 1) throw Error(ErrorCode::BadDim, "random_povm needs d, n >= 1");
  std::mt19937_64 gen(seed);
  std::vector<CMatrix> a;
  CMatrix s = CMatrix::Zero(d, d);
  for (int j = 0; j < n; ++j) {
    a.push_back(gaussian_matrix(d, d, gen));
    s += a.back().adjoint() * a.back();
  }
  const CMatrix s_inv_sqrt = matrix_func(s, MatrixFunction::InvSqrt);
  std::vector<CMatrix> el;
  for (const auto& aj : a) {
    CMatrix e = s_inv_sqrt * aj.adjoint() * aj * s_inv_sqrt;
    el.push_back(0.5 * (e + e.adjoint()));
  }
  return Povm(std::move(el));
}

MeasStats measure_stats(const QState& rho, const Povm& povm, int measured, int side) {
  const int n = rho.num_subsystems();
  if (measured < 0 || measured >= n || side < 0 || side >= n || measured == side)
    throw Error(ErrorCode::DimMismatch, "measured/side subsystem indices invalid");
  if (povm.dim() != rho.dims()[measured]) throw Error(ErrorCode::DimMismatch, "POVM does not act on measured system");
  const CMatrix pair = partial_trace(rho.matrix(), rho.dims(), {measured, side});
  // Subsystem order inside `pair` follows tensor order.
  const bool measured_first = measured < side;
  const Dims pair_dims = measured_first ? Dims{rho.dims()[measured], rho.dims()[side]}
                                        : Dims{rho.dims()[side], rho.dims()[measured]};
  const int m_index = measured_first ? 0 : 1;
  const int s_index = 1 - m_index;
  MeasStats out;
  for (const auto& p : povm.elements()) {
    const CMatrix block = partial_trace(embed(p, pair_dims, m_index) * pair, pair_dims, {s_index});
    CMatrix herm = 0.5 * (block + block.adjoint());
    out.probs.push_back(herm.trace().real());
    out.blocks.push_back(std::move(herm));
  }
  return out;
}

}  // namespace uncert
