#pragma once

// Overlap bounds and evaluation of the uncertainty relations.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uncert/entropy.hpp"
#include "uncert/states.hpp"

namespace uncert {

struct OverlapBound {
  double value = 1.0;                 // r in (0, 1]
  double neg_log = 0.0;               // -log2 r
  std::pair<int, int> arg_max{0, 0};  // informational, smallest (j, k) on ties
};

/// max_{j,k} |<v_j|w_k>|^2.
OverlapBound overlap_r(const BasisSet& v, const BasisSet& w);

/// max_{j,k} ||sqrt(Q_k) sqrt(P_j)||^2.
OverlapBound r_povm(const Povm& p, const Povm& q);

/// max_{j,k} ||sqrt(Q_k) Pi sqrt(P_j)||^2. Pi must be an orthogonal projector.
OverlapBound r_projected(const Povm& p, const Povm& q, const CMatrix& pi);

/// max_j ||Pi sqrt(P_j)||^2; arg_max = (j, 0).
OverlapBound single_povm_bound(const Povm& p, const CMatrix& pi);

enum class Relation {
  EQ3,   // H(v|c) + H(w|b) >= log d, v and w mutually unbiased
  EQ10,  // H(v|c) + H(w|b) >= -log r(v,w)
  EQ11,  // H(v) + H(w) >= -log r(v,w)
  EQ12,  // H(P|b) + H(Q|c) >= -log r(P,Q)
  EQ13,  // H(P|b) >= -log max_j ||P_j||
  EQ14,  // H(P|b) + H(Q|c) >= -log r(P,Q;Pi)
  EQ15,  // H(P|b) >= -log max_j ||Pi sqrt(P_j)||^2
  EQ16,  // H(P|b) + H(N|b) >= -log r(P,N;Pi) + S(a|b), N rank one, rho_abc pure
  EQ20,  // H(x) + H(z) >= log d
  EQ21,  // H(x) + H(z) >= log d + S(rho_a)
  EQ22,  // H(x) + H(z|b) >= log d + S(a|b)
  EQ23,  // H(x|b) + H(z|b) >= log d + S(a|b)
  EQ24,  // H(x) + H(y) + H(z) >= 2 + S(rho_a), qubit
  EQ26,  // H((x)x_nu) + H((x)z_nu|b) >= log d + S(a|b), coprime factors
  EQ27,  // H(x|b) + H(z|c) = log d for MUS of EQ23 (rho_abc pure)
};

std::string_view to_string(Relation r);
std::optional<Relation> parse_relation(std::string_view name);
std::vector<Relation> all_relations();

enum class Verdict { Holds, Violated, Equality };
std::string_view to_string(Verdict v);

struct Term {
  std::string name;
  double value = 0.0;
};

struct UncertaintyReport {
  Relation relation = Relation::EQ10;
  std::vector<Term> lhs_terms;
  double rhs = 0.0;
  double gap = 0.0;  // sum(lhs_terms) - rhs
  Verdict holds = Verdict::Holds;

  double lhs_total() const;
};

/// Inputs for eval_relation. Subsystem 0 of `state` is always a; 1 is b, 2 is c.
///
/// - EQ3, EQ10: tripartite state, bases {v, w} (EQ3 defaults to the Fourier pair).
/// - EQ11, EQ20, EQ21, EQ24: any state, the marginal on a is used. EQ20/21 take
///   bases {x, z} (default Fourier pair); EQ24 takes {x, y, z} (default qubit triple).
/// - EQ12, EQ14: tripartite state, POVMs {P, Q}. EQ13, EQ15: at least bipartite, {P}.
/// - EQ16: pure tripartite state, POVMs {P, N} with N rank one.
/// - EQ14, EQ15, EQ16: `projector` defaults to the support projector of rho_a.
/// - EQ22, EQ23: at least bipartite, bases {x, z} (default Fourier pair).
/// - EQ26: at least bipartite with `factor_dims` listing pairwise coprime d_nu
///   whose product is the dimension of a.
/// - EQ27: pure tripartite, bases {x, z} (default Fourier pair).
/// POVM slots accept bases too: when `povms` is empty, `bases` are converted.
struct RelationInputs {
  std::optional<QState> state;
  std::vector<BasisSet> bases;
  std::vector<Povm> povms;
  std::optional<CMatrix> projector;
  Dims factor_dims;
};

UncertaintyReport eval_relation(Relation relation, const RelationInputs& inputs,
                                double tol_eq = tol::kEquality);

/// Verdict for a gap under the equality band.
Verdict classify_gap(double gap, double tol_eq = tol::kEquality);

/// log2 d - H(x|b) - H(z|b); a positive value certifies that rho_ab is entangled,
/// since it lower-bounds -S(a|b).
double witness_bound(double h_xb, double h_zb, int d);

/// Literal relative-entropy values along the data-processing chain for a pure
/// rho_abc and mutually unbiased v, w on a. X = sum_k [w_k] (x) Tr_a([w_k] rho_ab).
struct DpTrace {
  double h_vc = 0.0;         // H(v|c), the quantity the chain starts from
  double step5 = 0.0;        // S(rho_ab || sum_j [v_j] (x) Tr_a([v_j] rho_ab))
  double step6 = 0.0;        // S(X || sum_{j,k} |<v_j|w_k>|^2 [w_k] (x) Tr_a([v_j] rho_ab))
  double step7 = 0.0;        // S(X || I_a/d (x) rho_b)
  double step8_form = 0.0;   // S(X || I_a (x) rho_b), so step7 = log2 d + step8_form
  double step9_equiv = 0.0;  // log2 d - H(w|b)
  int d = 2;

  /// h_vc = step5 >= step6 = step7 = step9_equiv, each within tol.
  bool chain_holds(double tol = tol::kViolation) const;
  /// Every stage equal within tol (the minimum-uncertainty case).
  bool all_equal(double tol = tol::kEquality) const;
};

/// Throws NotPure, NotMub, DimMismatch.
DpTrace dp_trace(const QState& rho_abc, const BasisSet& v, const BasisSet& w);

/// True when all |<v_j|w_k>|^2 = 1/d within tol.
bool mutually_unbiased(const BasisSet& v, const BasisSet& w, double tol = 1e-10);

/// Greatest common divisor check used by EQ26 and the coprime tensor families.
bool pairwise_coprime(const Dims& dims);

}  // namespace uncert
