#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json_io.hpp"
#include "uncert/error.hpp"

#ifndef UNCERT_VERSION
#define UNCERT_VERSION "0.0.0"
#endif

namespace uncert::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json config_echo(const RunConfig& c) {
  json j = {{"command", c.command}, {"trials", c.trials}, {"tol_eq", c.tol_eq}, {"format", c.format}};
  if (!c.action.empty()) j["action"] = c.action;
  if (!c.relation.empty()) j["relation"] = c.relation;
  if (!c.dims.empty()) j["dims"] = c.dims;
  if (!c.factors.empty()) j["factors"] = c.factors;
  if (c.has_seed) j["seed"] = c.seed;
  if (!c.state_path.empty()) j["state"] = c.state_path;
  if (!c.basis_paths.empty()) j["basis"] = c.basis_paths;
  if (!c.povm_paths.empty()) j["povm"] = c.povm_paths;
  if (!c.projector_path.empty()) j["projector"] = c.projector_path;
  if (!c.spec_path.empty()) j["spec"] = c.spec_path;
  if (!c.family.empty()) j["family"] = c.family;
  if (c.command == "mus" && c.action == "construct") j["factor"] = c.factor;
  if (c.command == "search") {
    j["restarts"] = c.restarts;
    j["max_iter"] = c.max_iter;
    j["rank"] = c.rank;
    if (c.grid_step > 0.0) j["grid_step"] = c.grid_step;
  }
  return j;
}

json new_document(const RunConfig& c) {
  return {{"tool", "uncert"}, {"version", UNCERT_VERSION}, {"config", config_echo(c)}};
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out_path.empty())
    out << text;
  else
    write_file_atomic(c.out_path, text);
}

void emit_json(const RunConfig& c, const json& doc, std::ostream& out) { emit(c, doc.dump(2) + "\n", out); }

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Relation require_relation(const RunConfig& c) {
  if (c.relation.empty()) throw UsageError("--relation is required");
  const auto r = parse_relation(c.relation);
  if (!r) throw UsageError("unknown relation " + c.relation);
  return *r;
}

void require_seed(const RunConfig& c) {
  if (!c.has_seed) throw UsageError("--seed is required for randomized runs");
}

void require_json_format(const RunConfig& c) {
  if (c.format != "json") throw UsageError("csv output is only available for verify and grid scans");
}

Dims dims_or(const RunConfig& c, Dims fallback) { return c.dims.empty() ? fallback : Dims(c.dims.begin(), c.dims.end()); }

Dims default_dims(Relation r) {
  switch (r) {
    case Relation::EQ3:
    case Relation::EQ10:
    case Relation::EQ12:
    case Relation::EQ16:
    case Relation::EQ27:
      return {2, 2, 2};
    case Relation::EQ14:
    case Relation::EQ15:
      return {4, 2, 2};
    case Relation::EQ11:
    case Relation::EQ20:
    case Relation::EQ21:
    case Relation::EQ24:
      return {2};
    default:
      return {2, 2};
  }
}

// Pure state on a (x) b (x) c whose marginal on a has rank about d/2.
QState rank_deficient_tripartite(const Dims& dims, std::uint64_t seed) {
  if (dims.size() != 3) throw Error(ErrorCode::ArityMismatch, "needs three subsystem dimensions");
  const int d = dims[0];
  const int rank = std::max(1, d / 2);
  const Purification p = purify(random_state({d}, rank, derive_seed(seed, 10)).matrix());
  if (dims[1] * dims[2] < p.ancilla_dim) throw Error(ErrorCode::BadDim, "b (x) c is too small for the purification");
  const CMatrix v = random_isometry(p.ancilla_dim, dims[1] * dims[2], derive_seed(seed, 11));
  const Ket psi = kron(CMatrix::Identity(d, d), v) * p.ket;
  return QState::from_ket(psi, dims);
}

RelationInputs random_instance(Relation r, const Dims& dims, const Dims& factor_dims, std::uint64_t seed) {
  RelationInputs in;
  const int d = dims.at(0);
  switch (r) {
    case Relation::EQ3:
    case Relation::EQ10:
    case Relation::EQ12:
    case Relation::EQ16:
    case Relation::EQ27:
    case Relation::EQ20:
      in.state = random_pure_state(dims, derive_seed(seed, 0));
      break;
    case Relation::EQ14:
    case Relation::EQ15:
      in.state = rank_deficient_tripartite(dims, seed);
      break;
    default:
      in.state = random_state(dims, total_dim(dims), derive_seed(seed, 0));
  }
  switch (r) {
    case Relation::EQ10:
    case Relation::EQ11:
      in.bases = {random_basis(d, derive_seed(seed, 1)), random_basis(d, derive_seed(seed, 2))};
      break;
    case Relation::EQ12:
    case Relation::EQ14:
      in.povms = {random_povm(d, d, derive_seed(seed, 1)), random_povm(d, d + 1, derive_seed(seed, 2))};
      break;
    case Relation::EQ13:
    case Relation::EQ15:
      in.povms = {random_povm(d, d, derive_seed(seed, 1))};
      break;
    case Relation::EQ16:
      in.povms = {random_povm(d, d, derive_seed(seed, 1)), Povm::from_basis(random_basis(d, derive_seed(seed, 2)))};
      break;
    case Relation::EQ26:
      in.factor_dims = factor_dims.empty() ? Dims{d} : factor_dims;
      break;
    default:
      break;
  }
  return in;
}

void apply_files(const RunConfig& c, RelationInputs& in) {
  if (!c.basis_paths.empty()) {
    in.bases.clear();
    for (const auto& p : c.basis_paths) in.bases.push_back(basis_from_json(read_json_file(p)));
  }
  if (!c.povm_paths.empty()) {
    in.povms.clear();
    for (const auto& p : c.povm_paths) in.povms.push_back(povm_from_json(read_json_file(p)));
  } else if (!c.basis_paths.empty()) {
    in.povms.clear();
  }
  if (!c.projector_path.empty()) in.projector = projector_from_json(read_json_file(c.projector_path));
  if (!c.factors.empty()) in.factor_dims = Dims(c.factors.begin(), c.factors.end());
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const Relation rel = require_relation(c);
  if (c.format != "json" && c.format != "csv") throw UsageError("--format must be json or csv");
  if (c.trials < 1) throw UsageError("--trials must be at least 1");

  struct Trial {
    int index;
    std::uint64_t seed;
    UncertaintyReport report;
  };
  std::vector<Trial> trials;
  if (!c.state_path.empty()) {
    RelationInputs in;
    in.state = state_from_json(read_json_file(c.state_path));
    apply_files(c, in);
    trials.push_back({0, c.seed, eval_relation(rel, in, c.tol_eq)});
  } else {
    require_seed(c);
    const Dims dims = dims_or(c, default_dims(rel));
    for (int i = 0; i < c.trials; ++i) {
      const std::uint64_t s = derive_seed(c.seed, static_cast<std::uint64_t>(i));
      RelationInputs in = random_instance(rel, dims, Dims(c.factors.begin(), c.factors.end()), s);
      apply_files(c, in);
      trials.push_back({i, s, eval_relation(rel, in, c.tol_eq)});
    }
  }

  int violations = 0;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    if (trials[i].report.holds == Verdict::Violated) ++violations;
    if (trials[i].report.gap < trials[worst].report.gap) worst = i;
  }

  if (c.format == "csv") {
    std::ostringstream csv;
    csv << "trial,relation";
    for (const auto& t : trials.front().report.lhs_terms) csv << "," << t.name;
    csv << ",rhs,gap,holds\n";
    for (const auto& t : trials) {
      csv << t.index << "," << to_string(t.report.relation);
      for (const auto& term : t.report.lhs_terms) csv << "," << fmt_double(term.value);
      csv << "," << fmt_double(t.report.rhs) << "," << fmt_double(t.report.gap) << "," << to_string(t.report.holds)
          << "\n";
    }
    emit(c, csv.str(), out);
  } else {
    json doc = new_document(c);
    json reports = json::array();
    for (const auto& t : trials) {
      json r = to_json(t.report);
      r["trial"] = t.index;
      if (c.state_path.empty()) r["seed"] = t.seed;
      reports.push_back(std::move(r));
    }
    doc["reports"] = std::move(reports);
    json summary = {{"min_gap", trials[worst].report.gap}, {"violations", violations}};
    if (c.state_path.empty()) summary["worst_seed"] = trials[worst].seed;
    doc["summary"] = std::move(summary);
    emit_json(c, doc, out);
  }
  return violations > 0 ? kFailure : kOk;
}

QState load_tripartite(const RunConfig& c) {
  if (c.state_path.empty()) throw UsageError("--state is required");
  QState s = state_from_json(read_json_file(c.state_path));
  if (s.num_subsystems() == 2) return purify_to_tripartite(s);
  return s;
}

MusFamilySpec spec_from_flags(const RunConfig& c) {
  if (c.family.empty()) throw UsageError("mus construct needs --spec or --family");
  const auto fam = parse_family(c.family);
  if (!fam) throw UsageError("unknown family " + c.family);
  require_seed(c);
  if (*fam == MusFamily::Thm5) {
    if (c.dims.empty() || c.factors.size() != c.dims.size())
      throw UsageError("thm5 needs --dims d1,d2,... and matching --factors");
    return random_thm5_spec(Dims(c.dims.begin(), c.dims.end()), Dims(c.factors.begin(), c.factors.end()), 2, c.seed);
  }
  if (*fam == MusFamily::Omega) throw UsageError("omega families are read from --spec");
  const Dims dims = dims_or(c, {2, 2});
  return random_family_spec(*fam, dims[0], c.factor, dims.size() > 1 ? dims[1] : 2, c.seed);
}

int mus_construct(const RunConfig& c, std::ostream& out) {
  json doc = new_document(c);
  std::optional<QState> state;
  std::optional<UncertaintyReport> report;
  std::optional<RecoveryResidual> recovery;

  json spec_json;
  if (!c.spec_path.empty()) spec_json = read_json_file(c.spec_path);
  const std::string fam_name = spec_json.is_object() ? spec_json.value("family", std::string{}) : c.family;

  if (fam_name == "s31" || fam_name == "s32" || fam_name == "s33") {
    std::vector<Ket> kets;
    if (spec_json.is_object() && spec_json.contains("kets"))
      for (const auto& k : spec_json.at("kets")) kets.push_back(ket_from_json(k));
    const LambdaKind kind = fam_name == "s31" ? LambdaKind::S31 : fam_name == "s32" ? LambdaKind::S32 : LambdaKind::S33;
    state = construct_lambda(kind, kets);
    doc["spec"] = {{"family", fam_name}};
    report = check_mus_equality(*state, c.tol_eq).first;
  } else {
    const MusFamilySpec spec = spec_json.is_object() ? spec_from_json(spec_json) : spec_from_flags(c);
    doc["spec"] = to_json(spec);
    state = construct_family(spec);
    RelationInputs in;
    in.state = *state;
    switch (spec.family) {
      case MusFamily::Thm2:
      case MusFamily::Thm4iii: {
        report = eval_relation(Relation::EQ22, in, c.tol_eq);
        const auto [z, x] = fourier_pair(spec.d);
        recovery = relation_recovery(*state, z, x);
        break;
      }
      case MusFamily::Thm4ii:
        report = eval_relation(Relation::EQ21, in, c.tol_eq);
        break;
      case MusFamily::Thm5:
        in.factor_dims = spec.dims;
        report = eval_relation(Relation::EQ26, in, c.tol_eq);
        recovery = relation_recovery(*state, computational_basis(spec.d), tensor_fourier_basis(spec.dims));
        break;
      case MusFamily::Omega: {
        report = eval_relation(Relation::EQ23, in, c.tol_eq);
        const auto [z, x] = fourier_pair(spec.d);
        recovery = relation_recovery(*state, z, x);
        break;
      }
    }
  }
  doc["state"] = to_json(*state);
  doc["reports"] = json::array({to_json(*report)});
  if (recovery) doc["recovery"] = to_json(*recovery);
  const bool equal = report->holds == Verdict::Equality;
  doc["summary"] = {{"min_gap", report->gap}, {"violations", report->holds == Verdict::Violated ? 1 : 0},
                    {"equality", equal}};
  emit_json(c, doc, out);
  return equal ? kOk : kFailure;
}

int mus_check(const RunConfig& c, std::ostream& out) {
  const QState s = load_tripartite(c);
  const auto [r1, r2] = check_mus_equality(s, c.tol_eq);
  const bool mus = r1.holds == Verdict::Equality && r2.holds == Verdict::Equality;
  json doc = new_document(c);
  doc["reports"] = json::array({to_json(r1), to_json(r2)});
  doc["mus"] = mus;
  doc["summary"] = {{"min_gap", std::min(r1.gap, r2.gap)},
                    {"violations", (r1.holds == Verdict::Violated) + (r2.holds == Verdict::Violated)}};
  emit_json(c, doc, out);
  return mus ? kOk : kFailure;
}

int mus_classify(const RunConfig& c, std::ostream& out) {
  const QState s = load_tripartite(c);
  json doc = new_document(c);
  int code = kOk;
  try {
    doc["classification"] = to_json(classify_mus(s, c.tol_eq));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotMus) throw;
    const auto [r1, r2] = check_mus_equality(s, c.tol_eq);
    doc["classification"] = {{"label", to_string(MusClass::NotMus)},
                             {"evidence", {{"gap_xb_zc", r1.gap}, {"gap_xc_zb", r2.gap}}}};
    code = kFailure;
  }
  emit_json(c, doc, out);
  return code;
}

int cmd_mus(const RunConfig& c, std::ostream& out) {
  require_json_format(c);
  if (c.action == "construct") return mus_construct(c, out);
  if (c.action == "check") return mus_check(c, out);
  if (c.action == "classify") return mus_classify(c, out);
  throw UsageError("mus needs one of construct, check, classify");
}

int cmd_bound(const RunConfig& c, std::ostream& out) {
  require_json_format(c);
  json doc = new_document(c);
  std::vector<Povm> povms;
  std::optional<OverlapBound> r;
  if (!c.povm_paths.empty()) {
    for (const auto& p : c.povm_paths) povms.push_back(povm_from_json(read_json_file(p)));
    if (povms.size() != 2) throw UsageError("bound needs exactly two --povm files");
    r = r_povm(povms[0], povms[1]);
  } else {
    std::vector<BasisSet> bases;
    if (c.basis_paths.empty()) {
      const Dims dims = dims_or(c, {2});
      auto [z, x] = fourier_pair(dims[0]);
      bases = {z, x};
    } else {
      for (const auto& p : c.basis_paths) bases.push_back(basis_from_json(read_json_file(p)));
    }
    if (bases.size() != 2) throw UsageError("bound needs exactly two --basis files");
    r = overlap_r(bases[0], bases[1]);
    for (const auto& b : bases) povms.push_back(Povm::from_basis(b));
  }
  const int d = povms[0].dim();
  doc["r"] = to_json(*r);
  CMatrix pi = CMatrix::Identity(d, d);
  if (!c.projector_path.empty()) {
    pi = projector_from_json(read_json_file(c.projector_path));
    doc["r_projected"] = to_json(r_projected(povms[0], povms[1], pi));
  }
  doc["single_povm"] = to_json(single_povm_bound(povms[0], pi));
  emit_json(c, doc, out);
  return kOk;
}

int cmd_search(const RunConfig& c, std::ostream& out) {
  if (c.grid_step > 0.0) {
    const auto grid = bloch_grid_scan(c.grid_step);
    double min_zeta = std::numeric_limits<double>::infinity();
    for (const auto& p : grid) min_zeta = std::min(min_zeta, p.zeta);
    const bool bad = min_zeta < -tol::kViolation;
    if (c.format == "csv") {
      std::ostringstream csv;
      csv << "r_x,r_y,r_z,zeta\n";
      for (const auto& p : grid)
        csv << fmt_double(p.rx) << "," << fmt_double(p.ry) << "," << fmt_double(p.rz) << "," << fmt_double(p.zeta) << "\n";
      emit(c, csv.str(), out);
    } else if (c.format == "json") {
      json doc = new_document(c);
      json pts = json::array();
      for (const auto& p : grid) pts.push_back({p.rx, p.ry, p.rz, p.zeta});
      doc["grid"] = {{"columns", {"r_x", "r_y", "r_z", "zeta"}}, {"points", std::move(pts)}};
      doc["summary"] = {{"min_gap", min_zeta}, {"violations", bad ? 1 : 0}, {"points", grid.size()}};
      emit_json(c, doc, out);
    } else {
      throw UsageError("--format must be json or csv");
    }
    return bad ? kFailure : kOk;
  }

  require_json_format(c);
  require_seed(c);
  GapObjective obj;
  obj.relation = c.relation.empty() ? Relation::EQ20 : require_relation(c);
  const Dims dims = dims_or(c, {2});
  obj.d = dims[0];
  if (dims.size() > 1) obj.side_dim = dims[1];
  obj.rank = c.rank;
  const SearchResult res = minimize_gap(obj, c.seed, c.restarts, c.max_iter);

  json doc = new_document(c);
  doc["search"] = {{"relation", to_string(obj.relation)}, {"best_gap", res.best_gap},
                   {"iterations", res.iterations},       {"restarts_used", res.restarts_used},
                   {"converged", res.converged},         {"best_state", to_json(res.best_state)}};
  if (obj.relation == Relation::EQ24 || obj.relation == Relation::EQ20 || obj.relation == Relation::EQ21) {
    const FamilyKind kind = obj.relation == Relation::EQ24 ? FamilyKind::Corollary3 : FamilyKind::Thm4;
    const FamilyDistance nf = nearest_family(res.best_state, kind);
    doc["search"]["nearest_family"] = {{"distance", nf.distance}, {"member", nf.member}};
  }
  const bool bad = res.best_gap < -tol::kViolation;
  doc["summary"] = {{"min_gap", res.best_gap}, {"violations", bad ? 1 : 0}};
  emit_json(c, doc, out);
  return bad ? kFailure : kOk;
}

int cmd_trace(const RunConfig& c, std::ostream& out) {
  require_json_format(c);
  if (c.trials < 1) throw UsageError("--trials must be at least 1");
  std::vector<std::pair<std::optional<std::uint64_t>, QState>> inputs;
  if (!c.state_path.empty()) {
    inputs.emplace_back(std::nullopt, load_tripartite(c));
  } else {
    require_seed(c);
    const Dims dims = dims_or(c, {2, 2, 2});
    for (int i = 0; i < c.trials; ++i) {
      const std::uint64_t s = derive_seed(c.seed, static_cast<std::uint64_t>(i));
      inputs.emplace_back(s, random_pure_state(dims, s));
    }
  }
  json doc = new_document(c);
  json traces = json::array();
  bool all_hold = true;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const QState& s = inputs[i].second;
    std::vector<BasisSet> bases;
    for (const auto& p : c.basis_paths) bases.push_back(basis_from_json(read_json_file(p)));
    if (bases.empty()) {
      auto [z, x] = fourier_pair(s.dims()[0]);
      bases = {z, x};
    }
    if (bases.size() != 2) throw UsageError("trace needs exactly two --basis files");
    const DpTrace t = dp_trace(s, bases[0], bases[1]);
    all_hold = all_hold && t.chain_holds();
    json tj = to_json(t);
    tj["trial"] = static_cast<int>(i);
    if (inputs[i].first) tj["seed"] = *inputs[i].first;
    traces.push_back(std::move(tj));
  }
  doc["traces"] = std::move(traces);
  doc["summary"] = {{"chain_holds", all_hold}};
  emit_json(c, doc, out);
  return all_hold ? kOk : kFailure;
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--dims", c.dims, "Subsystem dimensions, e.g. 2,2,2")->delimiter(',');
  sub->add_option("--seed", c.seed, "Master seed (64-bit)")->each([&c](const std::string&) { c.has_seed = true; });
  sub->add_option("--trials", c.trials, "Number of seeded trials");
  sub->add_option("--tol-eq", c.tol_eq, "Equality band in bits");
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", c.out_path, "Write the report here instead of stdout");
  sub->add_option("--state", c.state_path, "State JSON file");
  sub->add_option("--basis", c.basis_paths, "Basis JSON file (repeatable)");
  sub->add_option("--povm", c.povm_paths, "POVM JSON file (repeatable)");
  sub->add_option("--projector", c.projector_path, "Projector JSON file");
  sub->add_option("--factors", c.factors, "Factor list, e.g. coprime dimensions of a")->delimiter(',');
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Entropic uncertainty relations with quantum side information", "uncert"};
  app.set_version_flag("--version", std::string(UNCERT_VERSION));
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "Evaluate a relation on seeded random or supplied instances");
  add_common(verify, c);
  verify->add_option("--relation", c.relation, "Relation id, e.g. EQ10");

  auto* mus = app.add_subcommand("mus", "Construct, check or classify minimum-uncertainty states");
  add_common(mus, c);
  mus->add_option("action", c.action, "construct | check | classify")
      ->required()
      ->check(CLI::IsMember({"construct", "check", "classify"}));
  mus->add_option("--spec", c.spec_path, "Family spec JSON file");
  mus->add_option("--family", c.family, "thm2 | thm4ii | thm4iii | thm5 | s33");
  mus->add_option("--factor", c.factor, "Divisor s of d selecting the w basis");

  auto* bound = app.add_subcommand("bound", "Overlap bounds for a pair of bases or POVMs");
  add_common(bound, c);

  auto* search = app.add_subcommand("search", "Minimise a relation gap, or scan the qubit Bloch ball");
  add_common(search, c);
  search->add_option("--relation", c.relation, "EQ20 to EQ24");
  search->add_option("--restarts", c.restarts, "Multistart count");
  search->add_option("--max-iter", c.max_iter, "Iterations per restart");
  search->add_option("--rank", c.rank, "Rank of the searched state (0 = default)");
  search->add_option("--grid-step", c.grid_step, "Bloch-ball grid spacing; switches to the grid scan");

  auto* trace = app.add_subcommand("trace", "Relative entropies along the data-processing chain");
  add_common(trace, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (verify->parsed()) c.command = "verify";
    if (mus->parsed()) c.command = "mus";
    if (bound->parsed()) c.command = "bound";
    if (search->parsed()) c.command = "search";
    if (trace->parsed()) c.command = "trace";
    if (c.command == "verify") return cmd_verify(c, out);
    if (c.command == "mus") return cmd_mus(c, out);
    if (c.command == "bound") return cmd_bound(c, out);
    if (c.command == "search") return cmd_search(c, out);
    return cmd_trace(c, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const json::exception& e) {
    err << "error: invalid JSON: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kUsage;
}

}  // namespace uncert::cli
