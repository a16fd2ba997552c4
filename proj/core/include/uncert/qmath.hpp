#pragma once

// Dense complex linear algebra used by every other module. All functions are
// pure; inputs are never modified.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace uncert {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using Ket = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Dims = std::vector<int>;

/// Eigenvalues in ascending order with the matching eigenvectors as columns.
struct HermEig {
  RVector values;
  CMatrix vectors;
};

enum class MatrixFunction { Log, Log2, Sqrt, InvSqrt };

/// Requires ||M - M^dag|| <= 1e-10 (1 + ||M||), max-abs-entry norm.
HermEig hermitian_eig(const CMatrix& m);

/// Applies f eigenvalue-wise. Log, Log2 and InvSqrt act on the support only
/// (eigenvalues above 1e-12 * lambda_max) and give zero on the kernel.
/// Throws NotPSD if an eigenvalue is below -1e-10 * lambda_max.
CMatrix matrix_func(const CMatrix& m, MatrixFunction f);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix kron(std::span<const CMatrix> factors);
Ket kron_ket(const Ket& a, const Ket& b);

int total_dim(const Dims& dims);

/// Traces out every subsystem not listed in `keep`. Kept subsystems stay in
/// tensor order regardless of the order of `keep`.
CMatrix partial_trace(const CMatrix& m, const Dims& dims, std::vector<int> keep);

/// Transposes subsystem `index` in place of the tensor product.
CMatrix partial_transpose(const CMatrix& m, const Dims& dims, int index);

/// op acting on subsystem `index`, identity elsewhere.
CMatrix embed(const CMatrix& op, const Dims& dims, int index);

/// Moves subsystems into the order given by `order` (a permutation).
CMatrix permute_subsystems(const CMatrix& m, const Dims& dims, const std::vector<int>& order);
Ket permute_subsystems(const Ket& psi, const Dims& dims, const std::vector<int>& order);

/// Largest singular value.
double sup_norm(const CMatrix& a);

/// Largest absolute entry; used for the cheap hermiticity and residual checks.
double max_abs(const CMatrix& a);

bool is_hermitian(const CMatrix& m, double tol = 1e-10);

CMatrix support_projector(const CMatrix& rho);
int support_rank(const CMatrix& rho);

struct Purification {
  Ket ket;           // on system (x) ancilla, system index major
  int ancilla_dim;   // rank of rho
};

/// Canonical purification sum_i sqrt(lambda_i) |e_i>|i> with eigenvalues in
/// descending order and each eigenvector phase-fixed so that its
/// largest-magnitude entry is real positive.
Purification purify(const CMatrix& rho);

/// 0.5 * ||rho - sigma||_1.
double trace_distance(const CMatrix& rho, const CMatrix& sigma);

/// Rescales v so that its largest-magnitude entry (first one on ties within
/// 1e-12) is real and positive.
void fix_global_phase(Eigen::Ref<Ket> v);

CMatrix projector(const Ket& v);

}  // namespace uncert
