#pragma once

// Channels, the Petz recovery map, minimum-uncertainty families and their
// classification.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uncert/bounds.hpp"
#include "uncert/states.hpp"

namespace uncert {

/// Completely positive map given by operator elements K_i (out x in).
class Channel {
 public:
  /// Throws NotChannel unless sum_i K_i^dag K_i = I within 1e-10.
  explicit Channel(std::vector<CMatrix> kraus);

  const std::vector<CMatrix>& kraus() const { return kraus_; }
  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }

 private:
  struct Unchecked {};
  Channel(std::vector<CMatrix> kraus, Unchecked);
  friend Channel petz_map(const Channel& e, const CMatrix& sigma);

  std::vector<CMatrix> kraus_;
  int in_dim_ = 0;
  int out_dim_ = 0;
};

/// rho -> sum_k [w_k] rho [w_k].
Channel measurement_channel(const BasisSet& w);
Channel identity_channel(int d);

/// The channel acting as `e` on subsystem `index` and as the identity elsewhere.
Channel local_channel(const Channel& e, const Dims& dims, int index);

CMatrix apply_channel(const Channel& e, const CMatrix& rho);
QState apply_channel(const Channel& e, const QState& rho);
/// sum_i K_i^dag x K_i.
CMatrix adjoint_apply(const Channel& e, const CMatrix& x);

/// sqrt(sigma) E^dag(E(sigma)^{-1/2} . E(sigma)^{-1/2}) sqrt(sigma), inverses on supports.
/// Inputs outside the support of E(sigma) are sent to sigma / tr(sigma), which
/// keeps the map trace preserving.
Channel petz_map(const Channel& e, const CMatrix& sigma);

struct RecoveryResidual {
  double res_rho = 0.0;    // trace distance between Petz(E(rho)) and rho
  double res_sigma = 0.0;  // same for sigma
};

RecoveryResidual recovery_check(const CMatrix& rho, const CMatrix& sigma, const Channel& e);

/// Recovery of rho_ab from the z measurement with reference sigma = sum_j [x_j] rho_ab [x_j].
/// Zero exactly when H(x|b) + H(z|b) meets its lower bound.
RecoveryResidual relation_recovery(const QState& rho_ab, const BasisSet& z, const BasisSet& x);

enum class MusFamily { Thm2, Thm4ii, Thm4iii, Thm5, Omega };

std::string_view to_string(MusFamily f);
std::optional<MusFamily> parse_family(std::string_view name);

struct OmegaTerm {
  int factor = 1;  // s of the w basis
  int beta = 0;
  int gamma = 0;
  double g = 0.0;
  CMatrix side;    // density operator on b
};

/// Parameters of an analytic family.
///
/// Thm2/Thm4iii: rho_ab = d sum p_gamma [w_{beta,gamma}] (x) side_blocks[beta].
/// Thm4ii: rho_a = d sum p_gamma q_beta [w_{beta,gamma}].
/// Thm5: `dims` are the coprime d_nu and `factors` the s_nu; p and side_blocks
/// are indexed by the row-major flattening of gamma-vectors and beta-vectors.
/// Omega: sum_t g_t [w^{s_t}_{beta_t,gamma_t}] (x) side_t.
struct MusFamilySpec {
  MusFamily family = MusFamily::Thm4iii;
  int d = 2;
  int side_dim = 1;
  int factor = 1;
  Dims dims;
  Dims factors;
  std::vector<double> p;
  std::vector<double> q;
  std::vector<CMatrix> side_blocks;
  std::vector<OmegaTerm> omega;
};

/// Throw BadSpec on malformed input.
QState construct_thm2(const MusFamilySpec& spec);
QState construct_thm4_ii(const MusFamilySpec& spec);
QState construct_thm4_iii(const MusFamilySpec& spec);
/// Also throws NotCoprime.
QState construct_thm5(const MusFamilySpec& spec);
/// Also throws NotOrthogonal when side states overlap.
QState construct_omega(const MusFamilySpec& spec);
/// Dispatch on spec.family.
QState construct_family(const MusFamilySpec& spec);

/// The same Thm4ii/Thm4iii operator assembled as a product over a1 (x) a2,
/// with |z_beta>_{a1} |n>_{a2} identified with |z_{beta + n d/s}>.
CMatrix thm4_tensor_form(const MusFamilySpec& spec);

/// Random valid specs. Side blocks are full rank on a side_dim space.
MusFamilySpec random_family_spec(MusFamily family, int d, int factor, int side_dim, std::uint64_t seed);
MusFamilySpec random_thm5_spec(const Dims& dims, const Dims& factors, int side_dim, std::uint64_t seed);

enum class LambdaKind { S31, S32, S33 };

/// Tripartite pure states whose bipartite marginals are both entangled.
/// S31/S32 take {phi_b, phi_c, varphi_b, varphi_c}; S33 ignores `kets`.
/// Throws RealityViolated when <phi_b|varphi_b><phi_c|varphi_c> is not real.
QState construct_lambda(LambdaKind kind, const std::vector<Ket>& kets = {});

/// Pure state on a (x) b (x) r whose marginal on ab is rho_ab.
QState purify_to_tripartite(const QState& rho_ab);

struct FgSystem {
  std::vector<Dims> mu;          // one index vector per equation
  std::vector<CMatrix> f_ops;    // Tr_a(Z^mu rho_ab)
  std::vector<double> g_vals;    // 1 - sum_j sqrt(p_j p_{j+mu})
  std::vector<double> residuals; // ||f_mu|| |g_mu|

  double max_residual() const;
};

/// mu = 1..d-1 with Z = sum_k omega^k [z_k] and p taken in x. Throws DimMismatch.
FgSystem fg_system(const QState& rho_ab, const BasisSet& z, const BasisSet& x);
/// Vector-indexed form for a = (x)_nu a_nu, all nonzero mu-vectors.
FgSystem fg_system_tensor(const QState& rho_ab, const Dims& factor_dims);

/// sum_{j,j'} sqrt(p_j p_j') |x_j><x_j'| (x) Tr_a(Z^{j-j'} rho_ab).
CMatrix s17_reconstruction(const QState& rho_ab, const BasisSet& z, const BasisSet& x);

/// H(x|b) + H(z|c) and H(x|c) + H(z|b) against log2 d. Throws NotPure.
std::pair<UncertaintyReport, UncertaintyReport> check_mus_equality(const QState& rho_abc,
                                                                   double tol_eq = tol::kEquality);

double min_partial_transpose_eigenvalue(const QState& rho_xy);
/// Minimum eigenvalue of the partial transpose below -1e-10.
bool is_npt(const QState& rho_xy);

enum class MusClass { Upsilon, Omega, Lambda, NotMus, Indeterminate };
std::string_view to_string(MusClass c);

struct WEntropy {
  int factor = 1;
  double h_b = 0.0;
  double h_c = 0.0;
};

struct ClassEvidence {
  double gap_xb_zc = 0.0;
  double gap_xc_zb = 0.0;
  std::vector<WEntropy> w_entropies;
  std::optional<int> upsilon_factor;
  char upsilon_side = ' ';
  bool omega_ab = false;
  bool omega_ac = false;
  double min_pt_ab = 0.0;
  double min_pt_ac = 0.0;
  bool npt_ab = false;
  bool npt_ac = false;
};

struct ClassLabel {
  MusClass label = MusClass::Indeterminate;
  ClassEvidence evidence;
};

/// True when rho_xy = sum_t [w_t] (x) tau_t with w_t kets from the w bases of
/// dim(x) and mutually orthogonal tau_t, found by block diagonalising the
/// side system. `seed` drives the random probe operator.
bool has_omega_form(const QState& rho_xy, std::uint64_t seed = 1, double tol = tol::kEquality);

/// Throws NotPure, or NotMus when either sum misses log2 d by more than tol_eq.
ClassLabel classify_mus(const QState& rho_abc, double tol_eq = tol::kEquality);

}  // namespace uncert
