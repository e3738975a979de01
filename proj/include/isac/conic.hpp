#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>
#include <Eigen/Dense>

namespace isac::conic {

/// Real-linear functional over the declared variables:
///   value = constant + sum_s c_s * s + sum_X Re Tr{C_X^H X}.
struct LinearExpr {
  double constant = 0.0;
  std::map<int, double> scalar_coeffs;
  std::map<int, Eigen::MatrixXcd> psd_coeffs;

  LinearExpr& add_scalar(int var, double c);
  LinearExpr& add_psd_trace(int var, const Eigen::MatrixXcd& c);
};

enum class Relation { kEq, kGe, kLe };

/// One psd-variable term of an LMI entry: M(row,col) += Tr{g^H X}, with the
/// conjugate mirrored to (col,row). For row == col only the real part enters;
/// pass a Hermitian g to keep the value real.
struct TraceTerm {
  int var = -1;
  int row = 0;
  int col = 0;
  Eigen::MatrixXcd g;
};

/// Affine-in-variables Hermitian matrix expression, required PSD.
struct Lmi {
  int side = 0;
  Eigen::MatrixXcd constant;
  std::map<int, Eigen::MatrixXcd> scalar_terms;  // scalar var -> Hermitian coefficient
  std::vector<TraceTerm> trace_terms;
  std::string tag;
};

struct LinearConstraint {
  LinearExpr expr;  // expr REL 0
  Relation rel = Relation::kGe;
  std::string tag;
};

/// Solver-agnostic SDP description: PSD variable blocks, scalars, a linear
/// objective (minimized), LMIs, and affine equalities/inequalities.
class ConicProblem {
 public:
  int add_scalar(const std::string& name);
  int add_psd(const std::string& name, int side);  // complex Hermitian PSD variable

  void set_objective(LinearExpr e) { objective_ = std::move(e); }
  void add_lmi(Lmi lmi);
  void add_linear(LinearExpr e, Relation rel, const std::string& tag);

  int n_scalars() const { return static_cast<int>(scalar_names_.size()); }
  int n_psd() const { return static_cast<int>(psd_names_.size()); }
  const std::string& scalar_name(int i) const { return scalar_names_[i]; }
  const std::string& psd_name(int i) const { return psd_names_[i]; }
  int psd_side(int i) const { return psd_sides_[i]; }
  const LinearExpr& objective() const { return objective_; }
  const std::vector<Lmi>& lmis() const { return lmis_; }
  const std::vector<LinearConstraint>& linear() const { return linear_; }

 private:
  std::vector<std::string> scalar_names_;
  std::vector<std::string> psd_names_;
  std::vector<int> psd_sides_;
  LinearExpr objective_;
  std::vector<Lmi> lmis_;
  std::vector<LinearConstraint> linear_;
};

/// JSON-compatible self-describing serialization; round-trips bit-exactly.
std::string serialize(const ConicProblem& p);
ConicProblem deserialize(const std::string& text);

enum class SolveStatus { kOptimal, kInfeasible, kInaccurate, kFailed };
std::string to_string(SolveStatus s);

struct SolveSettings {
  double tol_feas = 1e-8;
  double tol_gap = 1e-8;
  int max_iters = 200;
};

struct ConicSolution {
  SolveStatus status = SolveStatus::kFailed;
  std::map<std::string, double> scalars;
  std::map<std::string, Eigen::MatrixXcd> psd;
  double objective = 0.0;
  double max_primal_residual = 0.0;
  double max_dual_residual = 0.0;
  double solve_time_s = 0.0;
  int iterations = 0;
  std::string message;
};

/// Dense homogeneous self-dual interior-point solve (NT scaling, Mehrotra
/// predictor-corrector). Deterministic for identical inputs and settings.
ConicSolution solve(const ConicProblem& p, const SolveSettings& settings = {});

/// Principal eigenpair extraction: f = u1 sqrt(rho1), defect = rho2/rho1.
struct RankOneResult {
  Eigen::VectorXcd f;
  double defect = 0.0;
};
RankOneResult extract_rank_one(const Eigen::MatrixXcd& cov);

/// 6x6 symmetric affine matrix expression (only the upper triangle is read).
struct SymExpr6 {
  std::array<std::array<LinearExpr, 6>, 6> entry;
};

/// The six Schur-complement LMIs [[Jt, e_a],[e_a^T, t_a]] >= 0. A corner
/// scale beta_a > 0 substitutes t_a = beta_a * t^_a through the exact
/// congruence [[Jt, e_a/sqrt(beta_a)],[., t^_a]], keeping the auxiliary
/// variables O(1) when the diagonal of Jt^{-1} spans many decades.
std::vector<Lmi> build_peb_epigraph_lmis(
    const SymExpr6& fim, const std::array<int, 6>& t_vars,
    const std::string& tag_prefix,
    const std::array<double, 6>& corner_scales = {1, 1, 1, 1, 1, 1});

}  // namespace isac::conic
