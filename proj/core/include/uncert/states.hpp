#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "uncert/error.hpp"
#include "uncert/qmath.hpp"

namespace uncert {

/// Density operator on an ordered tensor product of labelled subsystems.
/// Construction validates Hermiticity, positivity and unit trace.
class QState {
 public:
  QState(CMatrix matrix, Dims dims, std::vector<std::string> labels = {});

  /// |psi><psi| / <psi|psi>.
  static QState from_ket(const Ket& psi, Dims dims, std::vector<std::string> labels = {});

  const CMatrix& matrix() const { return matrix_; }
  const Dims& dims() const { return dims_; }
  const std::vector<std::string>& labels() const { return labels_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }
  int num_subsystems() const { return static_cast<int>(dims_.size()); }

  /// Reduced state on `keep`, labels carried along.
  QState marginal(std::vector<int> keep) const;

  double largest_eigenvalue() const;
  bool is_pure(double tol = tol::kPure) const;


 private:
  CMatrix matrix_;
  Dims dims_;
  std::vector<std::string> labels_;
};

std::vector<std::string> default_labels(std::size_t n);

/// Orthonormal basis stored as the columns of a unitary.
class BasisSet {
 public:
  BasisSet(CMatrix kets, std::string name = {});

  /// Same as the constructor but first fixes each column's global phase so the
  /// largest-magnitude entry is real positive.
  static BasisSet canonical(CMatrix kets, std::string name = {});

  int dim() const { return static_cast<int>(kets_.rows()); }
  const CMatrix& kets() const { return kets_; }
  Ket ket(int j) const { return kets_.col(j); }
  CMatrix projector(int j) const { return kets_.col(j) * kets_.col(j).adjoint(); }
  const std::string& name() const { return name_; }

 private:
  CMatrix kets_;
  std::string name_;
};

class Povm {
 public:
  explicit Povm(std::vector<CMatrix> elements);
  static Povm from_basis(const BasisSet& basis);

  int size() const { return static_cast<int>(elements_.size()); }
  int dim() const { return elements_.empty() ? 0 : static_cast<int>(elements_.front().rows()); }
  const std::vector<CMatrix>& elements() const { return elements_; }
  const CMatrix& operator[](int j) const { return elements_[j]; }

  /// True when every element has rank one.
  bool is_rank_one() const;

 private:
  std::vector<CMatrix> elements_;
};

struct FactorSet {
  int d = 1;
  std::vector<int> factors;  // ascending, every divisor of d once
  int eta() const { return static_cast<int>(factors.size()); }
};

/// Outcome probabilities and the unnormalised conditional operators
/// Tr_measured((P_j (x) I) rho) on the side system.
struct MeasStats {
  std::vector<double> probs;
  std::vector<CMatrix> blocks;
};

BasisSet computational_basis(int d);

/// z is computational; |x_j> = sum_k omega^{-jk} / sqrt(d) |z_k>, omega = e^{2 pi i / d}.
std::pair<BasisSet, BasisSet> fourier_pair(int d);
BasisSet fourier_basis(int d);

/// The w^alpha basis for divisor s of d. Column beta * s + gamma holds
/// |w_{beta,gamma}> = sum_n omega^{-n gamma d / s} / sqrt(s) |z_{beta + n d / s}>.
BasisSet w_basis(int d, int s);

/// Kronecker product of the parts; column index follows tensor order.
BasisSet tensor_basis(std::span<const BasisSet> parts);

/// (x)_nu x_nu over the listed factor dimensions; a factor of 1 contributes the trivial basis.
BasisSet tensor_fourier_basis(const Dims& parts);

struct MubTriple {
  BasisSet x;
  BasisSet y;
  BasisSet z;
};
MubTriple qubit_mub_triple();

FactorSet factors(int d);

/// A pure state unbiased with respect to both bases of fourier_pair(d):
/// a quadratic chirp (omega^{k^2} for odd d, e^{i pi k^2 / d} for even d).
Ket fourier_unbiased_ket(int d);

// Seeded samplers. Each call owns its generator, so equal seeds give
// bitwise-equal output.
QState random_state(const Dims& dims, int rank, std::uint64_t seed);
QState random_pure_state(const Dims& dims, std::uint64_t seed);
Ket random_ket(int d, std::uint64_t seed);
BasisSet random_basis(int d, std::uint64_t seed);
Povm random_povm(int d, int n, std::uint64_t seed);
/// d_out x d_in matrix with orthonormal columns.
CMatrix random_isometry(int d_in, int d_out, std::uint64_t seed);

MeasStats measure_stats(const QState& rho, const Povm& povm, int measured, int side);

/// Splitmix64 step, used to derive independent per-trial seeds.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace uncert
