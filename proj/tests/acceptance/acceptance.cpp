// Acceptance harness: one PASS/FAIL line per criterion.
//
//   uncert_acceptance            run everything
//   uncert_acceptance --only 8   run a single criterion

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uncert/bounds.hpp"
#include "uncert/entropy.hpp"
#include "uncert/error.hpp"
#include "uncert/mus.hpp"
#include "uncert/optimize.hpp"

using namespace uncert;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

QState bell_zero() {
  Ket psi = Ket::Zero(8);
  psi[0] = psi[6] = 1.0 / std::sqrt(2.0);
  return QState::from_ket(psi, {2, 2, 2});
}

// Rank-one POVM n_k = V^dag [k] V from a random isometry V : C^d -> C^n.
Povm random_rank_one_povm(int d, int n, std::uint64_t seed) {
  const CMatrix v = random_isometry(d, n, seed);
  std::vector<CMatrix> e;
  for (int k = 0; k < n; ++k) e.push_back(v.row(k).adjoint() * v.row(k));
  return Povm(std::move(e));
}

Outcome c1() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int d = 2; d <= 8; ++d) {
    const auto [z, x] = fourier_pair(d);
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) worst = std::max(worst, std::abs(std::norm(x.ket(j).dot(z.ket(k))) - 1.0 / d));
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-12 && t < 1.0, fmt("max overlap error %.3g", worst) + fmt(", %.2f s", t)};
}

Outcome c2() {
  const auto t0 = Clock::now();
  int violations = 0, n = 0;
  double min_gap = 1e300;
  for (int d : {2, 3}) {
    for (std::uint64_t i = 0; i < 1000; ++i) {
      const std::uint64_t s = derive_seed(0xC2 + d, i);
      RelationInputs in{random_pure_state({d, d, d}, s),
                        {random_basis(d, derive_seed(s, 1)), random_basis(d, derive_seed(s, 2))}, {}, {}, {}};
      const double gap = eval_relation(Relation::EQ10, in).gap;
      min_gap = std::min(min_gap, gap);
      violations += gap < -1e-9;
      ++n;
    }
  }
  const double t = seconds_since(t0);
  return {violations == 0 && t < 60.0, std::to_string(n) + " trials, " + std::to_string(violations) +
                                           " violations" + fmt(", min gap %.3g", min_gap) + fmt(", %.2f s", t)};
}

Outcome c3() {
  const auto t0 = Clock::now();
  int violations = 0, weaker = 0;
  double min_gap = 1e300;
  for (std::uint64_t i = 0; i < 500; ++i) {
    const std::uint64_t s = derive_seed(0xC3, i);
    const CMatrix rho_a = random_state({4}, 2, s).matrix();
    const Purification pur = purify(rho_a);
    // Spread the two-dimensional purifying system over b (x) c.
    const CMatrix iso = random_isometry(pur.ancilla_dim, 4, derive_seed(s, 1));
    const Ket psi = kron(CMatrix::Identity(4, 4), iso) * pur.ket;
    const QState rho = QState::from_ket(psi, {4, 2, 2});
    const Povm p = random_povm(4, 3, derive_seed(s, 2)), q = random_povm(4, 4, derive_seed(s, 3));
    const double gap = eval_relation(Relation::EQ14, {rho, {}, {p, q}, {}, {}}).gap;
    min_gap = std::min(min_gap, gap);
    violations += gap < -1e-9;
    const CMatrix pi = support_projector(rho_a);
    if (single_povm_bound(p, pi).neg_log < single_povm_bound(p, CMatrix::Identity(4, 4)).neg_log - 1e-12) ++weaker;
  }
  const double t = seconds_since(t0);
  return {violations == 0 && weaker == 0 && t < 60.0,
          std::to_string(violations) + " violations, " + std::to_string(weaker) + " projected bounds weaker" +
              fmt(", min gap %.3g", min_gap) + fmt(", %.2f s", t)};
}

Outcome c4() {
  CMatrix wk = CMatrix::Zero(3, 3);
  const double h = 1.0 / std::sqrt(2.0);
  wk(0, 0) = 1.0;
  wk(1, 1) = wk(2, 1) = wk(1, 2) = h;
  wk(2, 2) = -h;
  const BasisSet v = computational_basis(3), w(wk, "w");
  CMatrix pi = CMatrix::Zero(3, 3);
  pi(1, 1) = pi(2, 2) = 1.0;
  const double r = overlap_r(v, w).value;
  const OverlapBound rp = r_projected(Povm::from_basis(v), Povm::from_basis(w), pi);

  CMatrix embed12 = CMatrix::Zero(3, 2);
  embed12(1, 0) = embed12(2, 1) = 1.0;
  const CMatrix u = kron(kron(embed12, CMatrix::Identity(2, 2)), CMatrix::Identity(2, 2));
  double min_sum = 1e300;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const std::uint64_t s = derive_seed(0xC4, i);
    const QState small = i % 2 == 0 ? random_pure_state({2, 2, 2}, s) : random_state({2, 2, 2}, 3, s);
    const QState rho(u * small.matrix() * u.adjoint(), {3, 2, 2});
    min_sum = std::min(min_sum, cond_entropy_meas(v, rho, 0, 1).bits + cond_entropy_meas(w, rho, 0, 2).bits);
  }
  const bool ok = std::abs(r - 1.0) <= 1e-12 && std::abs(rp.value - 0.5) <= 1e-12 &&
                  std::abs(rp.neg_log - 1.0) <= 1e-12 && min_sum >= 1.0 - 1e-9;
  return {ok, fmt("r = %.15g", r) + fmt(", r_pi = %.15g", rp.value) + fmt(", min H(v|b)+H(w|c) = %.12g", min_sum)};
}

Outcome c5() {
  double worst_r = 0.0, worst_single = 0.0;
  for (int d : {2, 3, 5}) {
    const auto [z, x] = fourier_pair(d);
    const CMatrix pi = projector(fourier_unbiased_ket(d));
    const OverlapBound b = r_projected(Povm::from_basis(z), Povm::from_basis(x), pi);
    worst_r = std::max(worst_r, std::abs(b.value - 1.0 / (d * d)));
    worst_single = std::max(worst_single, std::abs(single_povm_bound(Povm::from_basis(z), pi).neg_log - std::log2(d)));
  }
  return {worst_r <= 1e-12 && worst_single <= 1e-12,
          fmt("max |r - 1/d^2| %.3g", worst_r) + fmt(", max single-bound error %.3g bits", worst_single)};
}

struct FamilyCase {
  QState rho;
  Relation relation;
  Dims factor_dims;
};

std::vector<FamilyCase> criterion6_states() {
  std::vector<FamilyCase> out;
  for (int d : {2, 3})
    for (std::uint64_t i = 0; i < 50; ++i) {
      const int s = i % 2 == 0 ? 1 : d;
      out.push_back({construct_family(random_family_spec(MusFamily::Thm2, d, s, 2, derive_seed(0xC6 + d, i))),
                     Relation::EQ22, {}});
    }
  for (int s : {1, 2, 4})
    for (std::uint64_t i = 0; i < 50; ++i)
      out.push_back({construct_family(random_family_spec(MusFamily::Thm4iii, 4, s, 2, derive_seed(0xC64 + s, i))),
                     Relation::EQ22, {}});
  const int combos[4][2] = {{1, 1}, {1, 3}, {2, 1}, {2, 3}};
  for (std::uint64_t i = 0; i < 50; ++i) {
    const Dims f = {combos[i % 4][0], combos[i % 4][1]};
    out.push_back({construct_family(random_thm5_spec({2, 3}, f, 2, derive_seed(0xC65, i))), Relation::EQ26, {2, 3}});
  }
  return out;
}

Outcome c6() {
  double worst = 0.0;
  const auto cases = criterion6_states();
  for (const auto& c : cases)
    worst = std::max(worst, std::abs(eval_relation(c.relation, {c.rho, {}, {}, {}, c.factor_dims}).gap));
  return {worst <= 1e-8, std::to_string(cases.size()) + " states" + fmt(", max |gap| %.3g", worst)};
}

Outcome c7() {
  double worst_mus = 0.0;
  for (const auto& c : criterion6_states()) {
    const int d = c.rho.dims()[0];
    const BasisSet x = c.factor_dims.empty() ? fourier_basis(d) : tensor_fourier_basis(c.factor_dims);
    worst_mus = std::max(worst_mus, relation_recovery(c.rho, computational_basis(d), x).res_rho);
  }
  const auto [z, x] = fourier_pair(3);
  int kept = 0;
  double min_res = 1e300;
  for (std::uint64_t i = 0; kept < 200; ++i) {
    const QState rho = random_state({3, 2}, 1 + static_cast<int>(i % 6), derive_seed(0xC7, i));
    if (eval_relation(Relation::EQ23, {rho, {}, {}, {}, {}}).gap < 1e-3) continue;
    ++kept;
    min_res = std::min(min_res, relation_recovery(rho, z, x).res_rho);
  }
  return {worst_mus <= 1e-8 && min_res >= 1e-6,
          fmt("max MUS residual %.3g", worst_mus) + fmt(", min non-MUS residual %.3g", min_res)};
}

Outcome c8() {
  const auto t0 = Clock::now();
  const auto grid = bloch_grid_scan(0.02);
  double min_zeta = 1e300, worst_off_axis = 0.0;
  for (const auto& p : grid) {
    min_zeta = std::min(min_zeta, p.zeta);
    if (p.zeta < 1e-3) {
      const double r2 = p.rx * p.rx + p.ry * p.ry + p.rz * p.rz;
      const double top = std::max({p.rx * p.rx, p.ry * p.ry, p.rz * p.rz});
      worst_off_axis = std::max(worst_off_axis, std::sqrt(std::max(r2 - top, 0.0)));
    }
  }
  const double t = seconds_since(t0);
  return {min_zeta >= -1e-9 && worst_off_axis <= 0.05 && t < 120.0,
          std::to_string(grid.size()) + " points" + fmt(", min zeta %.3g", min_zeta) +
              fmt(", max distance to an axis where zeta < 1e-3: %.4f", worst_off_axis) + fmt(", %.2f s", t)};
}

Outcome c9() {
  const QState s33 = construct_lambda(LambdaKind::S33);
  const auto [z3, x3] = fourier_pair(3);
  const double sb = von_neumann(s33.marginal({1})).bits;
  double err = std::abs(cond_entropy_meas(z3, s33, 0, 1).bits - (std::log2(3.0) - sb));
  err = std::max(err, std::abs(cond_entropy_meas(x3, s33, 0, 1).bits - sb));
  const auto [e1, e2] = check_mus_equality(s33);
  const double eq27 = std::max(std::abs(e1.gap), std::abs(e2.gap));

  double err31 = 0.0;
  const BasisSet z2 = computational_basis(2);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const std::uint64_t s = derive_seed(0xC9, i);
    const int db = 2 + static_cast<int>(i % 2), dc = 2 + static_cast<int>((i / 2) % 2);
    std::vector<Ket> k = {random_ket(db, derive_seed(s, 0)), random_ket(dc, derive_seed(s, 1)),
                          random_ket(db, derive_seed(s, 2)), random_ket(dc, derive_seed(s, 3))};
    const Complex ov = k[0].normalized().dot(k[2].normalized()) * k[1].normalized().dot(k[3].normalized());
    k[2] *= std::polar(1.0, -std::arg(ov));
    const QState st = construct_lambda(LambdaKind::S31, k);
    err31 = std::max(err31, std::abs(cond_entropy_meas(z2, st, 0, 1).bits - (1.0 - von_neumann(st.marginal({1})).bits)));
  }
  return {err <= 1e-9 && eq27 <= 1e-8 && err31 <= 1e-9,
          fmt("S33 entropy error %.3g", err) + fmt(", S33 equality gap %.3g", eq27) + fmt(", S31 error %.3g", err31)};
}

Outcome c10() {
  const auto [z, x] = fourier_pair(2);
  CMatrix p0 = CMatrix::Zero(2, 2), p1 = CMatrix::Zero(2, 2);
  p0(0, 0) = p1(1, 1) = 1.0;
  double worst = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double g = 0.1 * i;
    MusFamilySpec s;
    s.family = MusFamily::Omega;
    s.d = 2;
    s.side_dim = 2;
    s.omega = {{2, 0, 0, g, p0}, {1, 0, 0, 1.0 - g, p1}};
    const QState rho = construct_family(s);
    worst = std::max(worst, std::abs(cond_entropy_meas(x, rho).bits - (1.0 - g)));
    worst = std::max(worst, std::abs(cond_entropy_meas(z, rho).bits - g));
  }
  return {worst <= 1e-9, fmt("max entropy error %.3g", worst)};
}

Outcome c11() {
  bool ok = true;
  std::string detail;
  for (int d : {2, 3, 4}) {
    const auto t0 = Clock::now();
    GapObjective obj;
    obj.d = d;
    const SearchResult res = minimize_gap(obj, derive_seed(0xC11, d), 20);
    const FamilyDistance f = nearest_family(res.best_state, d == 4 ? FamilyKind::Thm4 : FamilyKind::Thm2);
    const double t = seconds_since(t0);
    ok = ok && res.best_gap <= 1e-6 && f.distance <= 1e-3 && t < 60.0;
    detail += "d=" + std::to_string(d) + fmt(": gap %.3g", res.best_gap) + fmt(", distance %.3g to ", f.distance) +
              f.member + fmt(", %.2f s; ", t);
  }
  return {ok, detail};
}

Outcome c12() {
  const auto [z, x] = fourier_pair(2);
  double worst_mono = 0.0, worst_step7 = 0.0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    const QState s = random_pure_state({2, 2, 2}, derive_seed(0xC12, i));
    const DpTrace t = dp_trace(s, z, x);
    worst_mono = std::max(worst_mono, t.step6 - t.step5);
    worst_step7 = std::max(worst_step7, std::abs(t.step7 - (1.0 - cond_entropy_meas(x, s, 0, 1).bits)));
  }
  const bool bell = dp_trace(bell_zero(), z, x).all_equal(1e-8);
  return {worst_mono <= 1e-9 && worst_step7 <= 1e-8 && bell,
          fmt("max step6 - step5 %.3g", worst_mono) + fmt(", max step7 error %.3g", worst_step7) +
              (bell ? ", Bell chain equal" : ", Bell chain NOT equal")};
}

Outcome c13() {
  const int shapes[3][3] = {{2, 2, 2}, {3, 2, 3}, {2, 3, 4}};
  double worst_s1 = 0.0, worst_n = 0.0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    const Dims dims(shapes[i % 3], shapes[i % 3] + 3);
    const std::uint64_t s = derive_seed(0xC13, i);
    const QState rho = random_pure_state(dims, s);
    const IdentityCheck c = rel_entropy_identity(random_basis(dims[0], derive_seed(s, 1)), rho);
    worst_s1 = std::max(worst_s1, std::abs(c.lhs.bits - c.rhs.bits));
    const Povm n = random_rank_one_povm(dims[0], dims[0] + 2, derive_seed(s, 2));
    const double diff = cond_entropy_meas(n, rho, 0, 1).bits - cond_entropy_meas(n, rho, 0, 2).bits;
    worst_n = std::max(worst_n, std::abs(diff - cond_entropy_vn(rho, 0, 1)));
  }
  return {worst_s1 <= 1e-8 && worst_n <= 1e-8,
          fmt("max identity error %.3g", worst_s1) + fmt(", max rank-one error %.3g", worst_n)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "Run a single criterion (1-13)")->check(CLI::Range(1, 13));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12, c13};
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("C%-2zu %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
