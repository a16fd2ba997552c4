#pragma once

// Entropy functionals. Every value is in bits.

#include <limits>
#include <span>

#include "uncert/states.hpp"

namespace uncert {

struct EntropyValue {
  double bits = 0.0;
  bool finite = true;

  static EntropyValue infinite() { return {std::numeric_limits<double>::infinity(), false}; }
};

/// -sum p log2 p with 0 log 0 = 0. Entries down to -1e-12 are clamped to zero;
/// the sum must be 1 within 1e-8.
EntropyValue shannon(std::span<const double> p);

/// -sum lambda log2 lambda over the eigenvalues of a PSD operator, trace not
/// required to be one. Used for unnormalised conditional blocks.
double operator_entropy(const CMatrix& psd);

EntropyValue von_neumann(const QState& rho);

/// Tr(rho log2 rho) - Tr(rho log2 sigma). sigma need not have unit trace.
/// Infinite when rho has weight above 1e-10 on the kernel of sigma.
EntropyValue relative_entropy(const CMatrix& rho, const CMatrix& sigma);
EntropyValue relative_entropy(const QState& rho, const CMatrix& sigma);

/// chi(P, side) = S(rho_side) - sum_j p_j S(rho_side,j) for P measured on
/// subsystem `measured`.
EntropyValue holevo(const Povm& p, const QState& rho, int measured = 0, int side = 1);

/// H(P|side) = H(P) - chi(P, side).
EntropyValue cond_entropy_meas(const Povm& p, const QState& rho, int measured = 0, int side = 1);
EntropyValue cond_entropy_meas(const BasisSet& basis, const QState& rho, int measured = 0, int side = 1);

/// Entropy of the outcome distribution alone, H(P).
EntropyValue measured_entropy(const Povm& p, const QState& rho, int measured = 0);
EntropyValue measured_entropy(const BasisSet& basis, const QState& rho, int measured = 0);

/// S(a|b) = S(rho_ab) - S(rho_b) on the marginal of subsystems a and b.
double cond_entropy_vn(const QState& rho, int a = 0, int b = 1);

struct IdentityCheck {
  EntropyValue lhs;
  EntropyValue rhs;
};

/// For pure rho_abc: lhs = H(v|c), rhs = S(rho_ab || sum_j [v_j] rho_ab [v_j]).
/// The two agree exactly in exact arithmetic. Throws NotPure.
IdentityCheck rel_entropy_identity(const BasisSet& v, const QState& rho_abc);

/// For any rho_abc: lhs = H(P|b), rhs = S(rho_ac || sum_j P_j rho_ac P_j),
/// with lhs >= rhs.
IdentityCheck povm_relative_entropy_bound(const Povm& p, const QState& rho_abc);

}  // namespace uncert
