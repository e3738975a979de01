#pragma once

#include <string>
#include <vector>

#include "isac/channel.hpp"
#include "isac/conic.hpp"
#include "isac/geometry.hpp"
#include "isac/metrics.hpp"
#include "isac/rng.hpp"

namespace isac {

/// Raised when a robust instance would exceed the problem-size guard.
class ProblemSizeError : public std::runtime_error {
 public:
  explicit ProblemSizeError(const std::string& what) : std::runtime_error(what) {}
};

/// Immutable description of one system instance plus solver knobs.
struct Scenario {
  Position3 p_hris;
  ArrayLayout layout;
  RfConstants rf;
  ChannelOptions chan;

  double rho = 0.5;
  double r_th = 0.0;  // bps/Hz
  Mat6 j_prior = Mat6::Zero();
  PebDomain peb_domain = PebDomain::kTransformed;

  double phase_lo = -M_PI / 2.0;  // OP4 box
  double phase_hi = M_PI / 2.0;
  int reflect_max_iters = 500;
  double reflect_grad_tol = 1e-6;

  double conv_tol = 1e-3;  // relative PEB change
  int max_alt_iters = 20;
  conic::SolveSettings sdp;

  int region_k = 7;
  double region_half_extent = 4.0;
  int k_guard = 10;
};

struct UncertaintyRegion {
  Position3 center;
  double half_extent_xy = 0.0;
  int k_points = 1;
  std::vector<Position3> points;
};

/// ceil(sqrt(K)) x ceil(sqrt(K)) lattice over the square, truncated row-major
/// to exactly K points; K = 1 yields the center.
UncertaintyRegion discretize_region(const Position3& center, double half_extent, int k);

enum class RunStatus { kConverged, kMaxIters, kInfeasibleSecrecy, kFailed };
std::string to_string(RunStatus s);

struct IterationRecord {
  double objective = 0.0;  // incumbent surrogate PEB after this iteration
  double secrecy_rate = 0.0;
  double secrecy_margin = 0.0;  // reformulated-constraint slack, worst pair
  double rank1_defect_f = 0.0;
  double rank1_defect_w = 0.0;
  conic::SolveStatus precoder_status = conic::SolveStatus::kFailed;
  conic::SolveStatus combiner_status = conic::SolveStatus::kFailed;
};

struct AlternatingReport {
  std::vector<IterationRecord> iters;
  bool converged = false;
  RunStatus status = RunStatus::kFailed;
  int infeasible_at_iter = -1;
  std::string message;

  Eigen::VectorXcd f;
  Eigen::MatrixXcd f_cov;
  Eigen::MatrixXcd combiner;
  Eigen::VectorXd upsilon;

  double objective = 0.0;  // final surrogate (genie: PEB at eta)
  double peb_total = 0.0, peb_ue = 0.0, peb_eve = 0.0;
  double rate_ue = 0.0, rate_eve = 0.0, secrecy_rate = 0.0;
  double worst_case_peb = 0.0;  // robust: true max over grid pairs
  double rank1_defect = 0.0;
};

/// Internal sensing/communication data for one design problem; genie mode is
/// the 1x1 grid special case.
struct TargetGeom {
  Position3 pos;
  std::array<Eigen::MatrixXcd, 3> derivs;
  Eigen::Matrix3d t_jac;
};

struct DesignProblem {
  const Scenario* scenario = nullptr;
  bool robust = false;
  std::vector<TargetGeom> ue_points, eve_points;
  Eigen::MatrixXcd h_bh;
  std::vector<Eigen::VectorXcd> h_dl_ue, h_dl_eve;
  std::vector<Eigen::RowVectorXcd> h_hu_ue, h_hu_eve;
  TargetPositions truth;  // rate-reporting positions (region centers in robust mode)
  OmegaPair omega;
};

DesignProblem make_genie_problem(const Scenario& sc, const TargetPositions& eta,
                                 const OmegaPair& omega);
DesignProblem make_robust_problem(const Scenario& sc, const UncertaintyRegion& ue,
                                  const UncertaintyRegion& eve, const OmegaPair& omega);

/// Effective row channel of one grid point under reflection phases upsilon.
Eigen::RowVectorXcd effective_point_channel(const DesignProblem& dp, Node node,
                                            int point, const Eigen::VectorXd& upsilon);

/// J-tilde of the pair (iu, ie) under the design (F, W); includes the prior.
Mat6 eval_j_tilde(const DesignProblem& dp, int iu, int ie, const DesignCovariances& cov);

/// Surrogate objective: genie PEB, or sqrt of the summed trace-inverses over
/// all grid pairs in robust mode. Returns +inf when any FIM is singular.
double surrogate_peb(const DesignProblem& dp, const DesignCovariances& cov);
double worst_case_peb(const DesignProblem& dp, const DesignCovariances& cov);

struct PrecoderResult {
  Eigen::MatrixXcd f_cov;
  Eigen::VectorXcd f;
  double rank1_defect = 0.0;
  bool infeasible_secrecy = false;
  conic::ConicSolution sol;
};

PrecoderResult solve_precoder(const DesignProblem& dp, const HrisState& state,
                              Philox& rng, bool with_secrecy = true);

struct CombinerResult {
  std::vector<Eigen::MatrixXcd> blocks;
  Eigen::MatrixXcd combiner;
  double rank1_defect = 0.0;
  conic::ConicSolution sol;
};

CombinerResult solve_combiner(const DesignProblem& dp, const Eigen::MatrixXcd& f_cov,
                              const HrisState& state);

struct ReflectionResult {
  Eigen::VectorXd upsilon;
  double secrecy_rate = 0.0;
  int iterations = 0;
  double projected_grad_norm = 0.0;
};

/// Projected gradient ascent on the (robust) secrecy rate over the phase box,
/// from a few deterministic starts; never returns a worse point than the
/// initialization.
ReflectionResult optimize_reflection(const DesignProblem& dp, const Eigen::MatrixXcd& f_cov,
                                     const HrisState& state);

AlternatingReport alternate_genie(const Scenario& sc, const TargetPositions& eta,
                                  const OmegaPair& omega, Philox& rng);
AlternatingReport alternate_robust(const Scenario& sc, const UncertaintyRegion& ue,
                                   const UncertaintyRegion& eve, const OmegaPair& omega,
                                   Philox& rng);

struct TradeoffPoint {
  double rho = 0.0;
  double peb = 0.0;  // +inf sentinel when the FIM vanishes
  double secrecy_rate = 0.0;
  RunStatus status = RunStatus::kFailed;
};

/// Dual-objective sweep: the secrecy constraint is dropped, OP4 maximizes the
/// secrecy rate and the SDP steps minimize PEB; rho mediates the tradeoff.
std::vector<TradeoffPoint> tradeoff_sweep(const Scenario& sc, const DesignProblem& base,
                                          const std::vector<double>& rho_grid, Philox& rng);

}  // namespace isac
