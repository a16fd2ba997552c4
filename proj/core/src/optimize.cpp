#include "uncert/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

#include "uncert/error.hpp"

namespace uncert {

namespace {

bool bipartite(Relation r) { return r == Relation::EQ22 || r == Relation::EQ23; }

void check_supported(const GapObjective& obj) {
  switch (obj.relation) {
    case Relation::EQ20:
    case Relation::EQ21:
    case Relation::EQ22:
    case Relation::EQ23:
      break;
    case Relation::EQ24:
      if (obj.d != 2) throw Error(ErrorCode::BadDim, "EQ24 is a qubit relation");
      break;
    default:
      throw Error(ErrorCode::UnsupportedRelation,
                  "search supports EQ20-EQ24, not " + std::string(to_string(obj.relation)));
  }
  if (obj.d < 2) throw Error(ErrorCode::BadDim, "d must be at least 2");
  if (bipartite(obj.relation) && obj.side_dim < 1) throw Error(ErrorCode::BadDim, "side_dim must be positive");
  if (obj.rank < 0 || obj.rank > state_dim(obj)) throw Error(ErrorCode::BadRank, "rank out of range");
}

using Point = std::vector<double>;

double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double diameter(const std::vector<Point>& simplex) {
  double m = 0.0;
  for (std::size_t i = 0; i < simplex.size(); ++i)
    for (std::size_t j = i + 1; j < simplex.size(); ++j) m = std::max(m, distance(simplex[i], simplex[j]));
  return m;
}

struct Run {
  Point best;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

template <class F>
Run nelder_mead(const F& f, Point start, double step, int max_iter) {
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
  constexpr double kDiameter = 1e-9;
  const std::size_t n = start.size();
  std::vector<Point> x(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) x[i + 1][i] += step;
  std::vector<double> fx(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fx[i] = f(x[i]);

  std::vector<std::size_t> order(n + 1);
  auto combine = [n](const Point& c, const Point& p, double t) {
    Point out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = c[i] + t * (p[i] - c[i]);
    return out;
  };

  Run run;
  for (; run.iterations < max_iter; ++run.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    {
      std::vector<Point> xs;
      std::vector<double> fs;
      for (auto i : order) {
        xs.push_back(std::move(x[i]));
        fs.push_back(fx[i]);
      }
      x = std::move(xs);
      fx = std::move(fs);
    }
    if (diameter(x) < kDiameter) {
      run.converged = true;
      break;
    }

    Point c(n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t i = 0; i < n; ++i) c[i] += x[v][i] / static_cast<double>(n);

    const Point xr = combine(c, x[n], -kReflect);
    const double fr = f(xr);
    if (fr < fx[0]) {
      const Point xe = combine(c, xr, kExpand);
      const double fe = f(xe);
      if (fe < fr) {
        x[n] = xe;
        fx[n] = fe;
      } else {
        x[n] = xr;
        fx[n] = fr;
      }
      continue;
    }
    if (fr < fx[n - 1]) {
      x[n] = xr;
      fx[n] = fr;
      continue;
    }
    const bool outside = fr < fx[n];
    const Point xc = outside ? combine(c, xr, kContract) : combine(c, x[n], kContract);
    const double fc = f(xc);
    if (fc < (outside ? fr : fx[n])) {
      x[n] = xc;
      fx[n] = fc;
      continue;
    }
    for (std::size_t v = 1; v <= n; ++v) {
      x[v] = combine(x[0], x[v], kShrink);
      fx[v] = f(x[v]);
    }
  }
  const auto best = std::min_element(fx.begin(), fx.end()) - fx.begin();
  run.best = x[best];
  run.value = fx[best];
  return run;
}

}  // namespace

int state_dim(const GapObjective& obj) { return bipartite(obj.relation) ? obj.d * obj.side_dim : obj.d; }

int effective_rank(const GapObjective& obj) {
  if (obj.rank > 0) return obj.rank;
  return obj.relation == Relation::EQ20 ? 1 : state_dim(obj);
}

int parameter_count(const GapObjective& obj) { return 2 * state_dim(obj) * effective_rank(obj); }

QState objective_state(const GapObjective& obj, const std::vector<double>& params) {
  check_supported(obj);
  const int dim = state_dim(obj), rank = effective_rank(obj);
  if (static_cast<int>(params.size()) != 2 * dim * rank)
    throw Error(ErrorCode::DimMismatch, "parameter vector has the wrong length");
  CMatrix m(dim, rank);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = Complex(params[2 * i], params[2 * i + 1]);
  CMatrix rho = m * m.adjoint();
  const double tr = rho.trace().real();
  if (!(tr > 1e-300) || !std::isfinite(tr))
    rho = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
  else
    rho /= tr;
  rho = 0.5 * (rho + rho.adjoint()).eval();
  Dims dims = bipartite(obj.relation) ? Dims{obj.d, obj.side_dim} : Dims{obj.d};
  return QState(rho, std::move(dims));
}

double objective_value(const GapObjective& obj, const std::vector<double>& params) {
  RelationInputs in;
  in.state = objective_state(obj, params);
  return eval_relation(obj.relation, in).gap;
}

SearchResult minimize_gap(const GapObjective& obj, std::uint64_t seed, int restarts, int max_iter) {
  check_supported(obj);
  if (restarts < 1) throw Error(ErrorCode::BadSpec, "restarts must be at least 1");
  if (max_iter < 1) throw Error(ErrorCode::BadSpec, "max_iter must be at least 1");
  const int n = parameter_count(obj);
  auto f = [&obj](const Point& p) { return objective_value(obj, p); };

  std::optional<Run> best;
  int total = 0;
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    std::normal_distribution<double> g(0.0, 1.0);
    Point start(n);
    for (auto& v : start) v = g(rng);
    Run run = nelder_mead(f, std::move(start), 0.25, max_iter);
    total += run.iterations;
    // Strict improvement keeps the earliest restart on ties.
    if (!best || run.value < best->value) best = std::move(run);
  }
  return {objective_state(obj, best->best), best->value, total, restarts, best->converged};
}

double bloch_zeta(double rx, double ry, double rz) {
  CMatrix rho(2, 2);
  rho << Complex(1.0 + rz, 0.0), Complex(rx, -ry), Complex(rx, ry), Complex(1.0 - rz, 0.0);
  RelationInputs in;
  in.state = QState(0.5 * rho, {2});
  return eval_relation(Relation::EQ24, in).gap;
}

std::vector<BlochPoint> bloch_grid_scan(double step) {
  if (!(step > 0.0) || step > 0.1) throw Error(ErrorCode::BadStep, "step must lie in (0, 0.1]");
  const int n = static_cast<int>(std::floor(1.0 / step + 1e-9));
  std::vector<BlochPoint> out;
  for (int i = -n; i <= n; ++i)
    for (int j = -n; j <= n; ++j)
      for (int k = -n; k <= n; ++k) {
        const double rx = i * step, ry = j * step, rz = k * step;
        const double r2 = rx * rx + ry * ry + rz * rz;
        if (r2 > 1.0 + 1e-12) continue;
        // Points on the sphere are rescaled so the state stays positive.
        const double scale = r2 > 1.0 ? 1.0 / std::sqrt(r2) : 1.0;
        out.push_back({rx, ry, rz, bloch_zeta(rx * scale, ry * scale, rz * scale)});
      }
  return out;
}

FamilyDistance nearest_family(const QState& state, FamilyKind family) {
  const QState a = state.num_subsystems() == 1 ? state : state.marginal({0});
  const int d = a.dim();
  FamilyDistance best{std::numeric_limits<double>::infinity(), ""};
  auto consider = [&best](double dist, std::string member) {
    if (dist < best.distance - 1e-15) best = {dist, std::move(member)};
  };

  if (family == FamilyKind::Corollary3) {
    if (d != 2) throw Error(ErrorCode::BadDim, "the three-basis family is defined for a qubit");
    const MubTriple t = qubit_mub_triple();
    const std::pair<const BasisSet*, const char*> bases[] = {{&t.x, "x"}, {&t.y, "y"}, {&t.z, "z"}};
    for (const auto& [b, name] : bases) {
      CMatrix dephased = CMatrix::Zero(2, 2);
      for (int j = 0; j < 2; ++j) dephased += b->projector(j) * a.matrix() * b->projector(j);
      consider(trace_distance(a.matrix(), dephased), std::string("diagonal in ") + name);
    }
    return best;
  }

  std::vector<int> divisors = family == FamilyKind::Thm2 ? std::vector<int>{1, d} : factors(d).factors;
  for (int s : divisors) {
    const BasisSet w = w_basis(d, s);
    const std::string label = s == 1 ? "z" : (s == d ? "x" : "w(s=" + std::to_string(s) + ")");
    for (int j = 0; j < d; ++j) consider(trace_distance(a.matrix(), w.projector(j)), label + "[" + std::to_string(j) + "]");
  }
  return best;
}

}  // namespace uncert
