#include "uncert/mus.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "uncert/error.hpp"

namespace uncert {

namespace {

constexpr std::array<std::pair<MusFamily, std::string_view>, 5> kFamilyNames{{
    {MusFamily::Thm2, "thm2"},
    {MusFamily::Thm4ii, "thm4ii"},
    {MusFamily::Thm4iii, "thm4iii"},
    {MusFamily::Thm5, "thm5"},
    {MusFamily::Omega, "omega"},
}};

Complex root_of_unity(long long power, int d) {
  const long long p = ((power % d) + d) % d;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(p) / d;
  return {std::cos(angle), std::sin(angle)};
}

[[noreturn]] void bad_spec(const std::string& what) { throw Error(ErrorCode::BadSpec, what); }

bool is_prime(int n) {
  if (n < 2) return false;
  for (int k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

void check_weights(const std::vector<double>& w, std::size_t n, const char* name) {
  if (w.size() != n) bad_spec(std::string(name) + " needs " + std::to_string(n) + " entries");
  for (double v : w)
    if (!std::isfinite(v) || v < -1e-12) bad_spec(std::string(name) + " must be non-negative");
}

double sum(const std::vector<double>& w) {
  double s = 0.0;
  for (double v : w) s += v;
  return s;
}

void check_psd(const CMatrix& m, int dim, const char* name) {
  if (m.rows() != dim || m.cols() != dim) bad_spec(std::string(name) + " has the wrong dimension");
  if (!m.allFinite() || !is_hermitian(m, tol::kHermitian)) bad_spec(std::string(name) + " is not Hermitian");
  const HermEig e = hermitian_eig(m);
  const double top = std::max(e.values[e.values.size() - 1], 0.0);
  if (e.values[0] < -tol::kPsd * std::max(top, 1.0)) bad_spec(std::string(name) + " is not positive semidefinite");
}

double block_trace_sum(const MusFamilySpec& spec, std::size_t n) {
  if (spec.side_dim < 1) bad_spec("side_dim must be positive");
  if (spec.side_blocks.size() != n) bad_spec("side_blocks needs " + std::to_string(n) + " entries");
  double t = 0.0;
  for (const auto& b : spec.side_blocks) {
    check_psd(b, spec.side_dim, "side block");
    t += b.trace().real();
  }
  return t;
}

void check_normalisation(double value) {
  if (std::abs(value - 1.0) > 1e-10) bad_spec("weights do not give a unit-trace state");
}

int checked_factor(const MusFamilySpec& spec) {
  if (spec.d < 2) bad_spec("d must be at least 2");
  if (spec.factor < 1 || spec.d % spec.factor != 0)
    bad_spec(std::to_string(spec.factor) + " does not divide " + std::to_string(spec.d));
  return spec.factor;
}

// Decodes a row-major flattened index over `ranges`.
Dims unflatten(int index, const Dims& ranges) {
  Dims out(ranges.size());
  for (int nu = static_cast<int>(ranges.size()) - 1; nu >= 0; --nu) {
    out[nu] = index % ranges[nu];
    index /= ranges[nu];
  }
  return out;
}

int product(const Dims& v) {
  int p = 1;
  for (int x : v) p *= x;
  return p;
}

std::vector<double> random_weights(std::mt19937_64& rng, std::size_t n, double total) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(n);
  double s = 0.0;
  for (auto& v : w) s += (v = u(rng));
  for (auto& v : w) v *= total / s;
  return w;
}

std::vector<CMatrix> random_blocks(std::mt19937_64& rng, std::size_t n, int side_dim, double total,
                                   std::uint64_t seed) {
  const auto weights = random_weights(rng, n, total);
  std::vector<CMatrix> blocks;
  for (std::size_t i = 0; i < n; ++i)
    blocks.push_back(weights[i] * random_state({side_dim}, side_dim, derive_seed(seed, i + 1)).matrix());
  return blocks;
}

}  // namespace

std::string_view to_string(MusFamily f) {
  for (const auto& [fam, name] : kFamilyNames)
    if (fam == f) return name;
  return "?";
}

std::optional<MusFamily> parse_family(std::string_view name) {
  for (const auto& [fam, n] : kFamilyNames)
    if (n == name) return fam;
  return std::nullopt;
}

QState construct_thm4_iii(const MusFamilySpec& spec) {
  const int s = checked_factor(spec);
  const int t = spec.d / s;
  check_weights(spec.p, s, "p");
  check_normalisation(spec.d * sum(spec.p) * block_trace_sum(spec, t));

  const BasisSet w = w_basis(spec.d, s);
  CMatrix rho = CMatrix::Zero(spec.d * spec.side_dim, spec.d * spec.side_dim);
  for (int beta = 0; beta < t; ++beta)
    for (int gamma = 0; gamma < s; ++gamma)
      rho += (spec.d * spec.p[gamma]) * kron(w.projector(beta * s + gamma), spec.side_blocks[beta]);
  return QState(rho, {spec.d, spec.side_dim});
}

QState construct_thm2(const MusFamilySpec& spec) {
  if (!is_prime(spec.d)) bad_spec("the prime-dimension family needs prime d");
  if (spec.factor != 1 && spec.factor != spec.d) bad_spec("prime d admits only s = 1 or s = d");
  return construct_thm4_iii(spec);
}

QState construct_thm4_ii(const MusFamilySpec& spec) {
  const int s = checked_factor(spec);
  const int t = spec.d / s;
  check_weights(spec.p, s, "p");
  check_weights(spec.q, t, "q");
  check_normalisation(spec.d * sum(spec.p) * sum(spec.q));

  const BasisSet w = w_basis(spec.d, s);
  CMatrix rho = CMatrix::Zero(spec.d, spec.d);
  for (int beta = 0; beta < t; ++beta)
    for (int gamma = 0; gamma < s; ++gamma)
      rho += (spec.d * spec.p[gamma] * spec.q[beta]) * w.projector(beta * s + gamma);
  return QState(rho, {spec.d});
}

QState construct_thm5(const MusFamilySpec& spec) {
  if (spec.dims.empty() || spec.dims.size() != spec.factors.size())
    bad_spec("dims and factors must be non-empty and of equal length");
  for (std::size_t nu = 0; nu < spec.dims.size(); ++nu)
    if (spec.dims[nu] < 1 || spec.factors[nu] < 1 || spec.dims[nu] % spec.factors[nu] != 0)
      bad_spec("each factor must divide its dimension");
  if (product(spec.dims) != spec.d) bad_spec("dims must multiply to d");
  if (!pairwise_coprime(spec.dims)) throw Error(ErrorCode::NotCoprime, "dimensions must be pairwise coprime");

  Dims t_ranges;
  for (std::size_t nu = 0; nu < spec.dims.size(); ++nu) t_ranges.push_back(spec.dims[nu] / spec.factors[nu]);
  const int n_gamma = product(spec.factors);
  const int n_beta = product(t_ranges);
  check_weights(spec.p, n_gamma, "p");
  check_normalisation(spec.d * sum(spec.p) * block_trace_sum(spec, n_beta));

  std::vector<BasisSet> ws;
  for (std::size_t nu = 0; nu < spec.dims.size(); ++nu) ws.push_back(w_basis(spec.dims[nu], spec.factors[nu]));

  CMatrix rho = CMatrix::Zero(spec.d * spec.side_dim, spec.d * spec.side_dim);
  for (int bi = 0; bi < n_beta; ++bi) {
    const Dims beta = unflatten(bi, t_ranges);
    for (int gi = 0; gi < n_gamma; ++gi) {
      const Dims gamma = unflatten(gi, spec.factors);
      CMatrix proj = CMatrix::Identity(1, 1);
      for (std::size_t nu = 0; nu < ws.size(); ++nu)
        proj = kron(proj, ws[nu].projector(beta[nu] * spec.factors[nu] + gamma[nu]));
      rho += (spec.d * spec.p[gi]) * kron(proj, spec.side_blocks[bi]);
    }
  }
  return QState(rho, {spec.d, spec.side_dim});
}

QState construct_omega(const MusFamilySpec& spec) {
  if (spec.d < 2) bad_spec("d must be at least 2");
  if (spec.side_dim < 1) bad_spec("side_dim must be positive");
  if (spec.omega.empty()) bad_spec("omega needs at least one term");
  double total = 0.0;
  for (const auto& t : spec.omega) {
    if (t.factor < 1 || spec.d % t.factor != 0) bad_spec("omega term factor must divide d");
    if (t.beta < 0 || t.beta >= spec.d / t.factor || t.gamma < 0 || t.gamma >= t.factor)
      bad_spec("omega term index out of range");
    if (!std::isfinite(t.g) || t.g < 0.0 || t.g > 1.0) bad_spec("omega weight outside [0, 1]");
    check_psd(t.side, spec.side_dim, "omega side state");
    if (std::abs(t.side.trace().real() - 1.0) > tol::kTrace) bad_spec("omega side state must have unit trace");
    total += t.g;
  }
  check_normalisation(total);
  for (std::size_t i = 0; i < spec.omega.size(); ++i)
    for (std::size_t j = i + 1; j < spec.omega.size(); ++j)
      if (std::abs((spec.omega[i].side * spec.omega[j].side).trace()) > 1e-10)
        throw Error(ErrorCode::NotOrthogonal, "omega side states must be mutually orthogonal");

  CMatrix rho = CMatrix::Zero(spec.d * spec.side_dim, spec.d * spec.side_dim);
  for (const auto& t : spec.omega) {
    const BasisSet w = w_basis(spec.d, t.factor);
    rho += t.g * kron(w.projector(t.beta * t.factor + t.gamma), t.side);
  }
  return QState(rho, {spec.d, spec.side_dim});
}

QState construct_family(const MusFamilySpec& spec) {
  switch (spec.family) {
    case MusFamily::Thm2: return construct_thm2(spec);
    case MusFamily::Thm4ii: return construct_thm4_ii(spec);
    case MusFamily::Thm4iii: return construct_thm4_iii(spec);
    case MusFamily::Thm5: return construct_thm5(spec);
    case MusFamily::Omega: return construct_omega(spec);
  }
  bad_spec("unknown family");
}

CMatrix thm4_tensor_form(const MusFamilySpec& spec) {
  if (spec.family != MusFamily::Thm4ii && spec.family != MusFamily::Thm4iii && spec.family != MusFamily::Thm2)
    bad_spec("tensor form exists only for the single-factor families");
  const int s = checked_factor(spec);
  const int t = spec.d / s;
  const BasisSet xs = s == 1 ? computational_basis(1) : fourier_basis(s);
  const BasisSet zt = computational_basis(t);
  const bool mixed_a = spec.family == MusFamily::Thm4ii;
  const int db = mixed_a ? 1 : spec.side_dim;
  if (mixed_a) {
    check_weights(spec.q, t, "q");
  } else if (spec.side_blocks.size() != static_cast<std::size_t>(t)) {
    bad_spec("side_blocks needs " + std::to_string(t) + " entries");
  }
  check_weights(spec.p, s, "p");

  // Operator on a1 (x) a2 (x) b.
  CMatrix px = CMatrix::Zero(s, s);
  for (int gamma = 0; gamma < s; ++gamma) px += spec.p[gamma] * xs.projector(gamma);
  CMatrix zb = CMatrix::Zero(t * db, t * db);
  for (int beta = 0; beta < t; ++beta)
    zb += kron(zt.projector(beta), mixed_a ? CMatrix::Constant(1, 1, Complex(spec.q[beta], 0.0))
                                            : spec.side_blocks[beta]);
  // (a1 b) (x) a2 -> a1 (x) a2 (x) b.
  const CMatrix a1_b_a2 = static_cast<double>(spec.d) * kron(zb, px);
  const CMatrix a1_a2_b = permute_subsystems(a1_b_a2, {t, db, s}, {0, 2, 1});

  // |beta>_{a1} |n>_{a2} -> |z_{beta + n t}>.
  CMatrix u = CMatrix::Zero(spec.d, spec.d);
  for (int beta = 0; beta < t; ++beta)
    for (int n = 0; n < s; ++n) u(beta + n * t, beta * s + n) = 1.0;
  const CMatrix ub = kron(u, CMatrix::Identity(db, db));
  return ub * a1_a2_b * ub.adjoint();
}

MusFamilySpec random_family_spec(MusFamily family, int d, int factor, int side_dim, std::uint64_t seed) {
  if (family == MusFamily::Thm5 || family == MusFamily::Omega)
    bad_spec("use random_thm5_spec or an explicit spec for this family");
  if (d < 2 || factor < 1 || d % factor != 0) bad_spec("factor must divide d");
  std::mt19937_64 rng(seed);
  MusFamilySpec spec;
  spec.family = family;
  spec.d = d;
  spec.factor = factor;
  spec.side_dim = family == MusFamily::Thm4ii ? 1 : side_dim;
  spec.p = random_weights(rng, factor, static_cast<double>(factor) / d);
  if (family == MusFamily::Thm4ii)
    spec.q = random_weights(rng, d / factor, 1.0 / factor);
  else
    spec.side_blocks = random_blocks(rng, d / factor, side_dim, 1.0 / factor, seed);
  return spec;
}

MusFamilySpec random_thm5_spec(const Dims& dims, const Dims& factors, int side_dim, std::uint64_t seed) {
  if (dims.empty() || dims.size() != factors.size()) bad_spec("dims and factors must match");
  MusFamilySpec spec;
  spec.family = MusFamily::Thm5;
  spec.dims = dims;
  spec.factors = factors;
  spec.d = product(dims);
  spec.side_dim = side_dim;
  int n_beta = 1;
  for (std::size_t nu = 0; nu < dims.size(); ++nu) {
    if (factors[nu] < 1 || dims[nu] % factors[nu] != 0) bad_spec("each factor must divide its dimension");
    n_beta *= dims[nu] / factors[nu];
  }
  const int s = product(factors);
  std::mt19937_64 rng(seed);
  spec.p = random_weights(rng, s, static_cast<double>(s) / spec.d);
  spec.side_blocks = random_blocks(rng, n_beta, side_dim, 1.0 / s, seed);
  return spec;
}

QState construct_lambda(LambdaKind kind, const std::vector<Ket>& kets) {
  const double r = 1.0 / std::sqrt(2.0);
  if (kind == LambdaKind::S33) {
    Ket zero(2), plus(2), yp(2), ym(2);
    zero << 1.0, 0.0;
    plus << r, r;
    yp << r, Complex(0.0, r);
    ym << r, Complex(0.0, -r);
    const BasisSet z = computational_basis(3);
    const Ket psi = (kron_ket(z.ket(0), kron_ket(zero, zero)) + kron_ket(z.ket(1), kron_ket(plus, plus)) +
                     kron_ket(z.ket(2), kron_ket(yp, ym))) /
                    std::sqrt(3.0);
    return QState::from_ket(psi, {3, 2, 2});
  }
  if (kets.size() != 4) bad_spec("needs four kets: phi_b, phi_c, varphi_b, varphi_c");
  std::vector<Ket> k;
  for (const auto& v : kets) {
    const double n = v.norm();
    if (!(n > 1e-12)) bad_spec("kets must be non-zero");
    k.push_back(v / n);
  }
  if (k[0].size() != k[2].size() || k[1].size() != k[3].size()) bad_spec("paired kets must share a dimension");
  const Complex overlap = k[0].dot(k[2]) * k[1].dot(k[3]);
  if (std::abs(overlap.imag()) > 1e-10)
    throw Error(ErrorCode::RealityViolated, "<phi_b|varphi_b><phi_c|varphi_c> must be real");

  Ket a0(2), a1(2);
  if (kind == LambdaKind::S31) {
    a0 << 1.0, 0.0;
    a1 << 0.0, 1.0;
  } else {
    a0 << r, r;
    a1 << r, -r;
  }
  const Ket psi = (kron_ket(a0, kron_ket(k[0], k[1])) + kron_ket(a1, kron_ket(k[2], k[3]))) * r;
  return QState::from_ket(psi / psi.norm(), {2, static_cast<int>(k[0].size()), static_cast<int>(k[1].size())});
}

QState purify_to_tripartite(const QState& rho_ab) {
  if (rho_ab.num_subsystems() != 2) throw Error(ErrorCode::ArityMismatch, "needs a bipartite state");
  const Purification p = purify(rho_ab.matrix());
  return QState::from_ket(p.ket, {rho_ab.dims()[0], rho_ab.dims()[1], p.ancilla_dim});
}

double FgSystem::max_residual() const {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, r);
  return m;
}

namespace {

FgSystem fg_general(const QState& rho_ab, const Dims& parts, const BasisSet& z, const BasisSet& x) {
  if (rho_ab.num_subsystems() != 2) throw Error(ErrorCode::ArityMismatch, "needs a bipartite state");
  const int d = rho_ab.dims()[0];
  if (z.dim() != d || x.dim() != d) throw Error(ErrorCode::DimMismatch, "bases do not act on a");
  const std::vector<double> p = measure_stats(rho_ab, Povm::from_basis(x), 0, 1).probs;

  FgSystem out;
  for (int mi = 1; mi < d; ++mi) {
    const Dims mu = unflatten(mi, parts);
    // Z^mu = (x)_nu Z_nu^{mu_nu}, diagonal in z.
    CMatrix zmu = CMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
      const Dims kv = unflatten(k, parts);
      Complex phase(1.0, 0.0);
      for (std::size_t nu = 0; nu < parts.size(); ++nu)
        phase *= root_of_unity(static_cast<long long>(mu[nu]) * kv[nu], parts[nu]);
      zmu += phase * z.projector(k);
    }
    CMatrix f = partial_trace(embed(zmu, rho_ab.dims(), 0) * rho_ab.matrix(), rho_ab.dims(), {1});

    double overlap = 0.0;
    for (int j = 0; j < d; ++j) {
      const Dims jv = unflatten(j, parts);
      int shifted = 0;
      for (std::size_t nu = 0; nu < parts.size(); ++nu) shifted = shifted * parts[nu] + (jv[nu] + mu[nu]) % parts[nu];
      overlap += std::sqrt(std::max(p[j], 0.0) * std::max(p[shifted], 0.0));
    }
    const double g = 1.0 - overlap;
    out.mu.push_back(mu);
    out.residuals.push_back(sup_norm(f) * std::abs(g));
    out.f_ops.push_back(std::move(f));
    out.g_vals.push_back(g);
  }
  return out;
}

}  // namespace

FgSystem fg_system(const QState& rho_ab, const BasisSet& z, const BasisSet& x) {
  if (rho_ab.num_subsystems() != 2) throw Error(ErrorCode::ArityMismatch, "needs a bipartite state");
  return fg_general(rho_ab, {rho_ab.dims()[0]}, z, x);
}

FgSystem fg_system_tensor(const QState& rho_ab, const Dims& factor_dims) {
  if (rho_ab.num_subsystems() != 2) throw Error(ErrorCode::ArityMismatch, "needs a bipartite state");
  if (factor_dims.empty() || product(factor_dims) != rho_ab.dims()[0])
    throw Error(ErrorCode::DimMismatch, "factor dims must multiply to dim(a)");
  return fg_general(rho_ab, factor_dims, computational_basis(rho_ab.dims()[0]), tensor_fourier_basis(factor_dims));
}

CMatrix s17_reconstruction(const QState& rho_ab, const BasisSet& z, const BasisSet& x) {
  const FgSystem fg = fg_system(rho_ab, z, x);
  const int d = rho_ab.dims()[0];
  const CMatrix rho_b = partial_trace(rho_ab.matrix(), rho_ab.dims(), {1});
  const std::vector<double> p = measure_stats(rho_ab, Povm::from_basis(x), 0, 1).probs;
  const int db = rho_ab.dims()[1];
  CMatrix out = CMatrix::Zero(d * db, d * db);
  for (int j = 0; j < d; ++j)
    for (int jp = 0; jp < d; ++jp) {
      const int mu = ((j - jp) % d + d) % d;
      const CMatrix& f = mu == 0 ? rho_b : fg.f_ops[mu - 1];
      const CMatrix xx = x.ket(j) * x.ket(jp).adjoint();
      out += std::sqrt(std::max(p[j], 0.0) * std::max(p[jp], 0.0)) * kron(xx, f);
    }
  return out;
}

std::pair<UncertaintyReport, UncertaintyReport> check_mus_equality(const QState& rho_abc, double tol_eq) {
  if (rho_abc.num_subsystems() != 3) throw Error(ErrorCode::ArityMismatch, "needs a tripartite state");
  if (!rho_abc.is_pure()) throw Error(ErrorCode::NotPure, "needs a pure tripartite state");
  const int d = rho_abc.dims()[0];
  const auto [z, x] = fourier_pair(d);
  const double log_d = std::log2(static_cast<double>(d));

  auto report = [&](const char* n1, int side1, const char* n2, int side2, const BasisSet& b1, const BasisSet& b2) {
    UncertaintyReport r;
    r.relation = Relation::EQ27;
    r.lhs_terms = {{n1, cond_entropy_meas(b1, rho_abc, 0, side1).bits},
                   {n2, cond_entropy_meas(b2, rho_abc, 0, side2).bits}};
    r.rhs = log_d;
    r.gap = r.lhs_total() - log_d;
    r.holds = classify_gap(r.gap, tol_eq);
    return r;
  };
  return {report("H(x|b)", 1, "H(z|c)", 2, x, z), report("H(x|c)", 2, "H(z|b)", 1, x, z)};
}

}  // namespace uncert
