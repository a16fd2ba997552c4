#include "json_io.hpp"

#include <fstream>
#include <sstream>

#include "uncert/error.hpp"

namespace uncert::cli {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::BadSpec, what); }

Dims dims_from_json(const json& j) {
  if (!j.is_array()) bad("dims must be an array");
  Dims d;
  for (const auto& v : j) d.push_back(v.get<int>());
  return d;
}

}  // namespace

json to_json(Complex c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    bad("complex entries are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) bad("matrices are non-empty arrays of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols) bad("ragged matrix");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(j[i][k]);
  }
  return m;
}

json ket_to_json(const Ket& k) {
  json out = json::array();
  for (Eigen::Index i = 0; i < k.size(); ++i) out.push_back(to_json(k[i]));
  return out;
}

Ket ket_from_json(const json& j) {
  if (!j.is_array() || j.empty()) bad("kets are non-empty arrays");
  Ket k(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) k[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
  return k;
}

json to_json(const QState& s) {
  return {{"dims", s.dims()}, {"labels", s.labels()}, {"matrix", to_json(s.matrix())}};
}

QState state_from_json(const json& j) {
  if (!j.is_object()) bad("a state is a JSON object");
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  if (j.contains("ket")) {
    const Ket k = ket_from_json(j.at("ket"));
    const Dims dims = j.contains("dims") ? dims_from_json(j.at("dims")) : Dims{static_cast<int>(k.size())};
    return QState::from_ket(k, dims, labels);
  }
  if (!j.contains("matrix")) bad("a state needs \"matrix\" or \"ket\"");
  const CMatrix m = matrix_from_json(j.at("matrix"));
  const Dims dims = j.contains("dims") ? dims_from_json(j.at("dims")) : Dims{static_cast<int>(m.rows())};
  return QState(m, dims, labels);
}

json to_json(const BasisSet& b) {
  json kets = json::array();
  for (int i = 0; i < b.dim(); ++i) kets.push_back(ket_to_json(b.ket(i)));
  return {{"name", b.name()}, {"kets", std::move(kets)}};
}

BasisSet basis_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kets") || !j.at("kets").is_array() || j.at("kets").empty())
    bad("a basis needs a non-empty \"kets\" array");
  const auto& kets = j.at("kets");
  const auto d = static_cast<Eigen::Index>(kets.size());
  CMatrix m(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    const Ket k = ket_from_json(kets[static_cast<std::size_t>(c)]);
    if (k.size() != d) bad("basis kets must have length equal to their count");
    m.col(c) = k;
  }
  return BasisSet(m, j.value("name", std::string{}));
}

json to_json(const Povm& p) {
  json e = json::array();
  for (const auto& m : p.elements()) e.push_back(to_json(m));
  return {{"elements", std::move(e)}};
}

Povm povm_from_json(const json& j) {
  if (j.is_object() && j.contains("kets")) return Povm::from_basis(basis_from_json(j));
  if (!j.is_object() || !j.contains("elements") || !j.at("elements").is_array())
    bad("a POVM needs an \"elements\" array");
  std::vector<CMatrix> e;
  for (const auto& m : j.at("elements")) e.push_back(matrix_from_json(m));
  return Povm(std::move(e));
}

CMatrix projector_from_json(const json& j) {
  if (j.is_object()) {
    if (!j.contains("matrix")) bad("a projector needs \"matrix\"");
    return matrix_from_json(j.at("matrix"));
  }
  return matrix_from_json(j);
}

json to_json(const UncertaintyReport& r) {
  json terms = json::array();
  for (const auto& t : r.lhs_terms) terms.push_back({{"name", t.name}, {"value", t.value}});
  return {{"relation", to_string(r.relation)}, {"lhs_terms", std::move(terms)}, {"lhs", r.lhs_total()},
          {"rhs", r.rhs},   {"gap", r.gap},   {"holds", to_string(r.holds)}};
}

json to_json(const OverlapBound& b) {
  return {{"value", b.value}, {"neg_log2", b.neg_log}, {"arg_max", {b.arg_max.first, b.arg_max.second}}};
}

json to_json(const DpTrace& t) {
  return {{"d", t.d},
          {"h_vc", t.h_vc},
          {"step5", t.step5},
          {"step6", t.step6},
          {"step7", t.step7},
          {"step8_form", t.step8_form},
          {"step9_equiv", t.step9_equiv},
          {"chain_holds", t.chain_holds()},
          {"all_equal", t.all_equal()}};
}

json to_json(const RecoveryResidual& r) { return {{"res_rho", r.res_rho}, {"res_sigma", r.res_sigma}}; }

json to_json(const ClassLabel& c) {
  const ClassEvidence& e = c.evidence;
  json w = json::array();
  for (const auto& we : e.w_entropies) w.push_back({{"s", we.factor}, {"h_b", we.h_b}, {"h_c", we.h_c}});
  json ev = {{"gap_xb_zc", e.gap_xb_zc}, {"gap_xc_zb", e.gap_xc_zb}, {"w_entropies", std::move(w)},
             {"omega_ab", e.omega_ab},   {"omega_ac", e.omega_ac},   {"min_pt_ab", e.min_pt_ab},
             {"min_pt_ac", e.min_pt_ac}, {"npt_ab", e.npt_ab},       {"npt_ac", e.npt_ac}};
  if (e.upsilon_factor) ev["upsilon"] = {{"s", *e.upsilon_factor}, {"side", std::string(1, e.upsilon_side)}};
  return {{"label", to_string(c.label)}, {"evidence", std::move(ev)}};
}

json to_json(const FgSystem& f) {
  json eqs = json::array();
  for (std::size_t i = 0; i < f.mu.size(); ++i)
    eqs.push_back({{"mu", f.mu[i]}, {"f_norm", sup_norm(f.f_ops[i])}, {"g", f.g_vals[i]}, {"residual", f.residuals[i]}});
  return {{"equations", std::move(eqs)}, {"max_residual", f.max_residual()}};
}

json to_json(const MusFamilySpec& s) {
  json j = {{"family", to_string(s.family)}, {"d", s.d}, {"side_dim", s.side_dim}};
  if (s.family == MusFamily::Thm5) {
    j["dims"] = s.dims;
    j["factors"] = s.factors;
  } else if (s.family != MusFamily::Omega) {
    j["factor"] = s.factor;
  }
  if (!s.p.empty()) j["p"] = s.p;
  if (!s.q.empty()) j["q"] = s.q;
  if (!s.side_blocks.empty()) {
    json blocks = json::array();
    for (const auto& b : s.side_blocks) blocks.push_back(to_json(b));
    j["side_blocks"] = std::move(blocks);
  }
  if (!s.omega.empty()) {
    json terms = json::array();
    for (const auto& t : s.omega)
      terms.push_back({{"factor", t.factor}, {"beta", t.beta}, {"gamma", t.gamma}, {"g", t.g}, {"side", to_json(t.side)}});
    j["omega_terms"] = std::move(terms);
  }
  return j;
}

MusFamilySpec spec_from_json(const json& j) {
  if (!j.is_object()) bad("a family spec is a JSON object");
  MusFamilySpec s;
  const auto fam = parse_family(j.value("family", std::string{}));
  if (!fam) bad("unknown family; expected thm2, thm4ii, thm4iii, thm5 or omega");
  s.family = *fam;
  s.d = j.value("d", 0);
  s.side_dim = j.value("side_dim", 1);
  if (j.contains("factor")) {
    s.factor = j.at("factor").get<int>();
  } else if (j.contains("alpha")) {
    // 1-based position in the ascending divisor list.
    const auto fs = factors(s.d).factors;
    const int alpha = j.at("alpha").get<int>();
    if (alpha < 1 || alpha > static_cast<int>(fs.size())) bad("alpha out of range");
    s.factor = fs[static_cast<std::size_t>(alpha - 1)];
  }
  if (j.contains("dims")) s.dims = dims_from_json(j.at("dims"));
  if (j.contains("factors")) s.factors = dims_from_json(j.at("factors"));
  if (s.family == MusFamily::Thm5 && s.d == 0) {
    s.d = 1;
    for (int x : s.dims) s.d *= x;
  }
  if (j.contains("p")) s.p = j.at("p").get<std::vector<double>>();
  if (j.contains("q")) s.q = j.at("q").get<std::vector<double>>();
  if (j.contains("side_blocks"))
    for (const auto& b : j.at("side_blocks")) s.side_blocks.push_back(matrix_from_json(b));
  if (j.contains("omega_terms"))
    for (const auto& t : j.at("omega_terms"))
      s.omega.push_back({t.at("factor").get<int>(), t.at("beta").get<int>(), t.at("gamma").get<int>(),
                         t.at("g").get<double>(), matrix_from_json(t.at("side"))});
  return s;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return json::parse(buf.str());
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace uncert::cli
