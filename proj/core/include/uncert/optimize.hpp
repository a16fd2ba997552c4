#pragma once

// Gap minimisation over state manifolds and the qubit Bloch-ball scan.

#include <cstdint>
#include <string>
#include <vector>

#include "uncert/bounds.hpp"

namespace uncert {

/// Relation gap as a function of a free state. EQ20, EQ21 and EQ24 optimise a
/// state on a alone; EQ22 and EQ23 optimise rho_ab with b of dimension side_dim.
struct GapObjective {
  Relation relation = Relation::EQ20;
  int d = 2;
  int side_dim = 2;
  int rank = 0;  // 0 picks the default: 1 for EQ20, the full dimension otherwise
};

/// Dimension of the optimised state and the rank actually used.
int state_dim(const GapObjective& obj);
int effective_rank(const GapObjective& obj);
/// Real parameters: re and im of a state_dim x rank purification matrix.
int parameter_count(const GapObjective& obj);

/// rho = M M^dag / tr(M M^dag) with M read column-major from params.
QState objective_state(const GapObjective& obj, const std::vector<double>& params);
double objective_value(const GapObjective& obj, const std::vector<double>& params);

struct SearchResult {
  QState best_state;
  double best_gap = 0.0;
  int iterations = 0;     // summed over restarts
  int restarts_used = 0;
  bool converged = false; // the best restart stopped on the simplex diameter
};

/// Nelder-Mead (1, 2, 0.5, 0.5) from `restarts` seeded starting points, each
/// stopped when the simplex diameter drops below 1e-9 or after max_iter steps.
/// Throws UnsupportedRelation outside EQ20-EQ24.
SearchResult minimize_gap(const GapObjective& obj, std::uint64_t seed, int restarts = 20, int max_iter = 5000);

struct BlochPoint {
  double rx = 0.0, ry = 0.0, rz = 0.0;
  double zeta = 0.0;  // H(x) + H(y) + H(z) - 2 - S(rho)
};

/// Cubic grid of spacing `step` clipped to the closed unit ball. Throws BadStep
/// unless 0 < step <= 0.1.
std::vector<BlochPoint> bloch_grid_scan(double step);
double bloch_zeta(double rx, double ry, double rz);

enum class FamilyKind { Thm2, Thm4, Corollary3 };

struct FamilyDistance {
  double distance = 0.0;
  std::string member;
};

/// Minimum trace distance from the marginal on a to the family. Thm2 and Thm4
/// enumerate basis projectors (z and x, or every w basis); Corollary3 measures
/// the qubit in x, y and z and keeps the closest dephased state.
FamilyDistance nearest_family(const QState& state, FamilyKind family);

}  // namespace uncert
