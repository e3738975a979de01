#include "isac/conic.hpp"

#include <stdexcept>

#include "json.hpp"

namespace isac::conic {

using nlohmann::json;

LinearExpr& LinearExpr::add_scalar(int var, double c) {
  scalar_coeffs[var] += c;
  return *this;
}

LinearExpr& LinearExpr::add_psd_trace(int var, const Eigen::MatrixXcd& c) {
  auto it = psd_coeffs.find(var);
  if (it == psd_coeffs.end())
    psd_coeffs.emplace(var, c);
  else
    it->second += c;
  return *this;
}

int ConicProblem::add_scalar(const std::string& name) {
  scalar_names_.push_back(name);
  return static_cast<int>(scalar_names_.size()) - 1;
}

int ConicProblem::add_psd(const std::string& name, int side) {
  if (side < 1) throw std::invalid_argument("ConicProblem::add_psd: side must be >= 1");
  psd_names_.push_back(name);
  psd_sides_.push_back(side);
  return static_cast<int>(psd_names_.size()) - 1;
}

namespace {

void check_var_refs(const ConicProblem& p, const LinearExpr& e, const std::string& where) {
  for (const auto& [v, c] : e.scalar_coeffs)
    if (v < 0 || v >= p.n_scalars())
      throw std::invalid_argument(where + ": undeclared scalar variable");
  for (const auto& [v, c] : e.psd_coeffs) {
    if (v < 0 || v >= p.n_psd())
      throw std::invalid_argument(where + ": undeclared psd variable");
    if (c.rows() != p.psd_side(v) || c.cols() != p.psd_side(v))
      throw std::invalid_argument(where + ": psd coefficient shape mismatch");
  }
}

}  // namespace

void ConicProblem::add_lmi(Lmi lmi) {
  if (lmi.side < 1) throw std::invalid_argument("add_lmi: side must be >= 1");
  if (lmi.constant.rows() != lmi.side || lmi.constant.cols() != lmi.side)
    throw std::invalid_argument("add_lmi: constant shape mismatch");
  if ((lmi.constant - lmi.constant.adjoint()).cwiseAbs().maxCoeff() >
      1e-12 * (1.0 + lmi.constant.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("add_lmi: constant not Hermitian");
  for (const auto& [v, m] : lmi.scalar_terms) {
    if (v < 0 || v >= n_scalars()) throw std::invalid_argument("add_lmi: undeclared scalar");
    if (m.rows() != lmi.side || m.cols() != lmi.side)
      throw std::invalid_argument("add_lmi: scalar coefficient shape mismatch");
  }
  for (const auto& t : lmi.trace_terms) {
    if (t.var < 0 || t.var >= n_psd()) throw std::invalid_argument("add_lmi: undeclared psd var");
    if (t.row < 0 || t.col < 0 || t.row >= lmi.side || t.col >= lmi.side)
      throw std::invalid_argument("add_lmi: trace term entry out of range");
    if (t.g.rows() != psd_side(t.var) || t.g.cols() != psd_side(t.var))
      throw std::invalid_argument("add_lmi: trace term g shape mismatch");
  }
  lmis_.push_back(std::move(lmi));
}

void ConicProblem::add_linear(LinearExpr e, Relation rel, const std::string& tag) {
  check_var_refs(*this, e, "add_linear");
  linear_.push_back(LinearConstraint{std::move(e), rel, tag});
}

// ---------------------------------------------------------------------------
// serialization

namespace {

json matrix_to_json(const Eigen::MatrixXcd& m) {
  json arr = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      arr.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
  return arr;
}

Eigen::MatrixXcd matrix_from_json(const json& arr, int side) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != side * side)
    throw std::invalid_argument("conic deserialize: bad matrix length");
  Eigen::MatrixXcd m(side, side);
  int k = 0;
  for (Eigen::Index r = 0; r < side; ++r)
    for (Eigen::Index c = 0; c < side; ++c, ++k)
      m(r, c) = std::complex<double>(arr[k][0].get<double>(), arr[k][1].get<double>());
  return m;
}

json expr_to_json(const ConicProblem& p, const LinearExpr& e) {
  json j;
  j["constant"] = e.constant;
  json sc = json::object();
  for (const auto& [v, c] : e.scalar_coeffs) sc[p.scalar_name(v)] = c;
  j["scalar"] = sc;
  json ps = json::object();
  for (const auto& [v, c] : e.psd_coeffs) ps[p.psd_name(v)] = matrix_to_json(c);
  j["psd"] = ps;
  return j;
}

LinearExpr expr_from_json(const json& j, const std::map<std::string, int>& scalars,
                          const std::map<std::string, int>& psds,
                          const std::vector<int>& sides) {
  LinearExpr e;
  e.constant = j.at("constant").get<double>();
  for (const auto& [name, val] : j.at("scalar").items())
    e.scalar_coeffs[scalars.at(name)] = val.get<double>();
  for (const auto& [name, val] : j.at("psd").items()) {
    const int v = psds.at(name);
    e.psd_coeffs[v] = matrix_from_json(val, sides[v]);
  }
  return e;
}

const char* rel_name(Relation r) {
  switch (r) {
    case Relation::kEq: return "eq";
    case Relation::kGe: return "ge";
    case Relation::kLe: return "le";
  }
  return "ge";
}

Relation rel_from_name(const std::string& s) {
  if (s == "eq") return Relation::kEq;
  if (s == "ge") return Relation::kGe;
  if (s == "le") return Relation::kLe;
  throw std::invalid_argument("conic deserialize: unknown relation " + s);
}

}  // namespace

std::string serialize(const ConicProblem& p) {
  json j;
  json pv = json::array();
  for (int i = 0; i < p.n_psd(); ++i)
    pv.push_back(json{{"name", p.psd_name(i)}, {"side", p.psd_side(i)}});
  j["psd_vars"] = pv;
  json sc = json::array();
  for (int i = 0; i < p.n_scalars(); ++i) sc.push_back(p.scalar_name(i));
  j["scalars"] = sc;
  j["objective"] = expr_to_json(p, p.objective());

  json lm = json::array();
  for (const auto& l : p.lmis()) {
    json e;
    e["tag"] = l.tag;
    e["side"] = l.side;
    e["constant"] = matrix_to_json(l.constant);
    json st = json::object();
    for (const auto& [v, m] : l.scalar_terms) st[p.scalar_name(v)] = matrix_to_json(m);
    e["scalar_terms"] = st;
    json tt = json::array();
    for (const auto& t : l.trace_terms)
      tt.push_back(json{{"var", p.psd_name(t.var)},
                        {"row", t.row},
                        {"col", t.col},
                        {"g", matrix_to_json(t.g)}});
    e["trace_terms"] = tt;
    lm.push_back(e);
  }
  j["lmis"] = lm;

  json lin = json::array();
  for (const auto& c : p.linear()) {
    json e = expr_to_json(p, c.expr);
    e["rel"] = rel_name(c.rel);
    e["tag"] = c.tag;
    lin.push_back(e);
  }
  j["linear"] = lin;
  return j.dump(2);
}

ConicProblem deserialize(const std::string& text) {
  const json j = json::parse(text);
  ConicProblem p;
  std::map<std::string, int> scalars, psds;
  std::vector<int> sides;
  for (const auto& pv : j.at("psd_vars")) {
    const std::string name = pv.at("name").get<std::string>();
    const int side = pv.at("side").get<int>();
    psds[name] = p.add_psd(name, side);
    sides.push_back(side);
  }
  for (const auto& s : j.at("scalars")) {
    const std::string name = s.get<std::string>();
    scalars[name] = p.add_scalar(name);
  }
  p.set_objective(expr_from_json(j.at("objective"), scalars, psds, sides));
  for (const auto& e : j.at("lmis")) {
    Lmi l;
    l.tag = e.at("tag").get<std::string>();
    l.side = e.at("side").get<int>();
    l.constant = matrix_from_json(e.at("constant"), l.side);
    for (const auto& [name, m] : e.at("scalar_terms").items())
      l.scalar_terms[scalars.at(name)] = matrix_from_json(m, l.side);
    for (const auto& t : e.at("trace_terms")) {
      TraceTerm tt;
      tt.var = psds.at(t.at("var").get<std::string>());
      tt.row = t.at("row").get<int>();
      tt.col = t.at("col").get<int>();
      tt.g = matrix_from_json(t.at("g"), sides[tt.var]);
      l.trace_terms.push_back(std::move(tt));
    }
    p.add_lmi(std::move(l));
  }
  for (const auto& e : j.at("linear")) {
    LinearExpr ex = expr_from_json(e, scalars, psds, sides);
    p.add_linear(std::move(ex), rel_from_name(e.at("rel").get<std::string>()),
                 e.at("tag").get<std::string>());
  }
  return p;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kInaccurate: return "inaccurate";
    case SolveStatus::kFailed: return "failed";
  }
  return "failed";
}

RankOneResult extract_rank_one(const Eigen::MatrixXcd& cov) {
  if (cov.rows() == 0 || cov.cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("extract_rank_one: zero matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(cov);
  const int n = static_cast<int>(cov.rows());
  const double rho1 = std::max(0.0, eig.eigenvalues()(n - 1));
  const double rho2 = n > 1 ? std::max(0.0, eig.eigenvalues()(n - 2)) : 0.0;
  RankOneResult r;
  r.f = eig.eigenvectors().col(n - 1) * std::sqrt(rho1);
  r.defect = rho1 > 0.0 ? rho2 / rho1 : 0.0;
  return r;
}

std::vector<Lmi> build_peb_epigraph_lmis(const SymExpr6& fim,
                                         const std::array<int, 6>& t_vars,
                                         const std::string& tag_prefix,
                                         const std::array<double, 6>& corner_scales) {
  std::vector<Lmi> out;
  out.reserve(6);
  for (int a = 0; a < 6; ++a) {
    if (!(corner_scales[a] > 0.0))
      throw std::invalid_argument("build_peb_epigraph_lmis: corner scale must be > 0");
    Lmi l;
    l.side = 7;
    l.tag = tag_prefix + ".t" + std::to_string(a + 1);
    l.constant = Eigen::MatrixXcd::Zero(7, 7);
    l.constant(a, 6) = 1.0 / std::sqrt(corner_scales[a]);
    l.constant(6, a) = l.constant(a, 6);
    Eigen::MatrixXcd t_coeff = Eigen::MatrixXcd::Zero(7, 7);
    t_coeff(6, 6) = 1.0;
    l.scalar_terms[t_vars[a]] = t_coeff;
    for (int r = 0; r < 6; ++r) {
      for (int c = r; c < 6; ++c) {
        const LinearExpr& e = fim.entry[r][c];
        if (e.constant != 0.0) {
          l.constant(r, c) += e.constant;
          if (r != c) l.constant(c, r) += e.constant;
        }
        for (const auto& [v, coeff] : e.scalar_coeffs) {
          auto it = l.scalar_terms.find(v);
          if (it == l.scalar_terms.end())
            it = l.scalar_terms.emplace(v, Eigen::MatrixXcd::Zero(7, 7)).first;
          it->second(r, c) += coeff;
          if (r != c) it->second(c, r) += coeff;
        }
        for (const auto& [v, cmat] : e.psd_coeffs) {
          // value = Re Tr{C^H X} = Tr{Herm(C)^H X}; pass the Hermitian part so
          // the LMI entry stays real.
          TraceTerm t;
          t.var = v;
          t.row = r;
          t.col = c;
          t.g = 0.5 * (cmat + cmat.adjoint());
          l.trace_terms.push_back(std::move(t));
        }
      }
    }
    out.push_back(std::move(l));
  }
  return out;
}

}  // namespace isac::conic
