#include "isac/optimizer.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <limits>

namespace isac {

namespace {

constexpr std::complex<double> kJ{0.0, 1.0};
constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap_pi(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a < 0) a += 2.0 * M_PI;
  return a - M_PI;
}

}  // namespace

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kConverged: return "converged";
    case RunStatus::kMaxIters: return "max_iters";
    case RunStatus::kInfeasibleSecrecy: return "infeasible_secrecy";
    case RunStatus::kFailed: return "failed";
  }
  return "failed";
}

UncertaintyRegion discretize_region(const Position3& center, double half_extent, int k) {
  if (k < 1) throw std::invalid_argument("discretize_region: K must be >= 1");
  UncertaintyRegion r;
  r.center = center;
  r.half_extent_xy = half_extent;
  r.k_points = k;
  if (k == 1) {
    r.points.push_back(center);
    return r;
  }
  const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(k))));
  for (int row = 0; row < side && static_cast<int>(r.points.size()) < k; ++row) {
    for (int col = 0; col < side && static_cast<int>(r.points.size()) < k; ++col) {
      const double fx = side > 1 ? static_cast<double>(col) / (side - 1) : 0.5;
      const double fy = side > 1 ? static_cast<double>(row) / (side - 1) : 0.5;
      r.points.push_back(Position3{center.x - half_extent + 2.0 * half_extent * fx,
                                   center.y - half_extent + 2.0 * half_extent * fy,
                                   center.z});
    }
  }
  return r;
}

namespace {

TargetGeom make_target_geom(const Scenario& sc, const Position3& pos, double omega) {
  TargetGeom g;
  g.pos = pos;
  g.derivs = bistatic_derivatives_single(pos, omega, sc.p_hris, sc.rf, sc.layout, sc.chan);
  g.t_jac = angle_jacobian_single(pos, sc.p_hris);
  return g;
}

void add_point_channels(const Scenario& sc, const Position3& pos,
                        std::vector<Eigen::VectorXcd>& h_dl,
                        std::vector<Eigen::RowVectorXcd>& h_hu) {
  const AngleSet ang = angles_from_positions(pos, sc.p_hris);
  h_dl.push_back(dl_channel(pos, ang.theta_k, sc.rf, sc.layout, sc.chan));
  h_hu.push_back(hris_user_channel(pos, sc.p_hris, sc.rf, sc.layout, sc.chan));
}

}  // namespace

DesignProblem make_genie_problem(const Scenario& sc, const TargetPositions& eta,
                                 const OmegaPair& omega) {
  DesignProblem dp;
  dp.scenario = &sc;
  dp.robust = false;
  dp.truth = eta;
  dp.omega = omega;
  dp.ue_points.push_back(make_target_geom(sc, eta.ue, omega.ue));
  dp.eve_points.push_back(make_target_geom(sc, eta.eve, omega.eve));
  dp.h_bh = bs_hris_channel(sc.p_hris, angles_from_positions(eta.ue, sc.p_hris), sc.rf,
                            sc.layout, sc.chan);
  add_point_channels(sc, eta.ue, dp.h_dl_ue, dp.h_hu_ue);
  add_point_channels(sc, eta.eve, dp.h_dl_eve, dp.h_hu_eve);
  return dp;
}

DesignProblem make_robust_problem(const Scenario& sc, const UncertaintyRegion& ue,
                                  const UncertaintyRegion& eve, const OmegaPair& omega) {
  if (ue.k_points > sc.k_guard || eve.k_points > sc.k_guard)
    throw ProblemSizeError("robust instance exceeds the problem-size guard (K <= " +
                           std::to_string(sc.k_guard) + ")");
  DesignProblem dp;
  dp.scenario = &sc;
  dp.robust = true;
  dp.truth = TargetPositions{ue.center, eve.center};
  dp.omega = omega;
  for (const auto& p : ue.points) {
    dp.ue_points.push_back(make_target_geom(sc, p, omega.ue));
    add_point_channels(sc, p, dp.h_dl_ue, dp.h_hu_ue);
  }
  for (const auto& p : eve.points) {
    dp.eve_points.push_back(make_target_geom(sc, p, omega.eve));
    add_point_channels(sc, p, dp.h_dl_eve, dp.h_hu_eve);
  }
  dp.h_bh = bs_hris_channel(sc.p_hris, angles_from_positions(ue.center, sc.p_hris), sc.rf,
                            sc.layout, sc.chan);
  return dp;
}

Eigen::RowVectorXcd effective_point_channel(const DesignProblem& dp, Node node, int point,
                                            const Eigen::VectorXd& upsilon) {
  const Scenario& sc = *dp.scenario;
  const Eigen::VectorXcd& h_dl = node == Node::kUe ? dp.h_dl_ue[point] : dp.h_dl_eve[point];
  const Eigen::RowVectorXcd& h_hu =
      node == Node::kUe ? dp.h_hu_ue[point] : dp.h_hu_eve[point];
  const double gain = reflection_gain(sc.rho, sc.chan.power_split);
  Eigen::RowVectorXcd scaled(h_hu.cols());
  for (Eigen::Index n = 0; n < h_hu.cols(); ++n)
    scaled(n) = h_hu(n) * std::exp(kJ * upsilon(n));
  return h_dl.transpose() + gain * (scaled * dp.h_bh);
}

namespace {

Mat6 pair_jacobian(const DesignProblem& dp, int iu, int ie) {
  Mat6 t = Mat6::Zero();
  t.block<3, 3>(0, 0) = dp.ue_points[iu].t_jac;
  t.block<3, 3>(3, 3) = dp.eve_points[ie].t_jac;
  return t;
}

std::array<const Eigen::MatrixXcd*, 6> pair_derivs(const DesignProblem& dp, int iu, int ie) {
  return {&dp.ue_points[iu].derivs[0], &dp.ue_points[iu].derivs[1],
          &dp.ue_points[iu].derivs[2], &dp.eve_points[ie].derivs[0],
          &dp.eve_points[ie].derivs[1], &dp.eve_points[ie].derivs[2]};
}

double fim_kappa(const Scenario& sc) {
  const double g = sensing_gain(sc.rho, sc.chan.power_split);
  return 2.0 * sc.rf.block_len * g * g / sc.rf.noise_power_w;
}

int status_rank(conic::SolveStatus s) {
  switch (s) {
    case conic::SolveStatus::kOptimal: return 0;
    case conic::SolveStatus::kInaccurate: return 1;
    case conic::SolveStatus::kInfeasible: return 2;
    case conic::SolveStatus::kFailed: return 3;
  }
  return 3;
}

Mat6 eval_j_pos(const DesignProblem& dp, int iu, int ie, const DesignCovariances& cov) {
  const auto d = pair_derivs(dp, iu, ie);
  const double kappa = fim_kappa(*dp.scenario);
  std::array<Eigen::MatrixXcd, 6> wdf;
  for (int j = 0; j < 6; ++j) wdf[j] = cov.w_cov * (*d[j]) * cov.f_cov;
  Mat6 out;
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < 6; ++j) {
      const double v = kappa * (d[i]->conjugate().cwiseProduct(wdf[j])).sum().real();
      out(i, j) = v;
      out(j, i) = v;
    }
  return out;
}

// Per-axis corner scales for the epigraph LMIs: the worst reference
// [Jt^{-1}]_aa over the grid pairs, rounded to a power of two. The diagonal of
// the inverse FIM spans many decades here (coherent ranging vs weak angles),
// and unit-scaled corners keep the SDP iterates O(1).
std::array<double, 6> corner_scales_from_ref(const DesignProblem& dp,
                                             const DesignCovariances& ref,
                                             double fim_scale_s) {
  std::array<double, 6> beta{1, 1, 1, 1, 1, 1};
  Vec6 worst = Vec6::Zero();
  bool any = false;
  for (size_t iu = 0; iu < dp.ue_points.size(); ++iu)
    for (size_t ie = 0; ie < dp.eve_points.size(); ++ie) {
      Mat6 jt = fim_scale_s *
                eval_j_tilde(dp, static_cast<int>(iu), static_cast<int>(ie), ref);
      jt.diagonal().array() += 1e-12 * jt.trace() / 6.0;
      Eigen::SelfAdjointEigenSolver<Mat6> eig(jt);
      if (eig.info() != Eigen::Success || !(eig.eigenvalues()(0) > 0.0)) continue;
      for (int a = 0; a < 6; ++a) {
        double acc = 0.0;
        for (int k = 0; k < 6; ++k)
          acc += eig.eigenvectors()(a, k) * eig.eigenvectors()(a, k) /
                 eig.eigenvalues()(k);
        worst(a) = std::max(worst(a), acc);
      }
      any = true;
    }
  if (!any) return beta;
  for (int a = 0; a < 6; ++a) {
    if (!(worst(a) > 0.0) || !std::isfinite(worst(a))) continue;
    beta[a] = std::exp2(std::round(std::log2(std::clamp(worst(a), 1e-8, 1e16))));
  }
  return beta;
}

// Median |entry| of the reference J-tilde over all pairs, then the nearest
// power of two of its inverse; LMIs are built in these rescaled units.
double fim_scale(const DesignProblem& dp, const DesignCovariances& ref) {
  std::vector<double> mags;
  for (size_t iu = 0; iu < dp.ue_points.size(); ++iu)
    for (size_t ie = 0; ie < dp.eve_points.size(); ++ie) {
      const Mat6 jt = eval_j_tilde(dp, static_cast<int>(iu), static_cast<int>(ie), ref);
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
          if (jt(i, j) != 0.0 && std::isfinite(jt(i, j))) mags.push_back(std::abs(jt(i, j)));
    }
  if (mags.empty()) return 1.0;
  std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
  const double med = mags[mags.size() / 2];
  if (!(med > 0.0) || !std::isfinite(med)) return 1.0;
  return std::exp2(std::round(std::log2(1.0 / med)));
}

}  // namespace

Mat6 eval_j_tilde(const DesignProblem& dp, int iu, int ie, const DesignCovariances& cov) {
  const Mat6 j = eval_j_pos(dp, iu, ie, cov);
  return fim_transform(j, pair_jacobian(dp, iu, ie), dp.scenario->j_prior);
}

double surrogate_peb(const DesignProblem& dp, const DesignCovariances& cov) {
  double sum = 0.0;
  for (size_t iu = 0; iu < dp.ue_points.size(); ++iu)
    for (size_t ie = 0; ie < dp.eve_points.size(); ++ie) {
      try {
        const PebResult r = peb(eval_j_tilde(dp, static_cast<int>(iu),
                                             static_cast<int>(ie), cov));
        sum += r.total * r.total;
      } catch (const SingularFimError&) {
        return kInf;
      }
    }
  return std::sqrt(sum);
}

double worst_case_peb(const DesignProblem& dp, const DesignCovariances& cov) {
  double worst = 0.0;
  for (size_t iu = 0; iu < dp.ue_points.size(); ++iu)
    for (size_t ie = 0; ie < dp.eve_points.size(); ++ie) {
      try {
        worst = std::max(
            worst,
            peb(eval_j_tilde(dp, static_cast<int>(iu), static_cast<int>(ie), cov)).total);
      } catch (const SingularFimError&) {
        return kInf;
      }
    }
  return worst;
}

namespace {

// T-folded FIM coefficient matrices for the pair: entry (a,b) of s*Jt equals
// Re Tr{coeff[a][b]^H X} for the relevant design variable X.
using Coeff6 = std::array<std::array<Eigen::MatrixXcd, 6>, 6>;

Coeff6 fold_jacobian(const std::array<std::array<Eigen::MatrixXcd, 6>, 6>& g,
                     const Mat6& t, double scale) {
  Coeff6 out;
  for (int a = 0; a < 6; ++a) {
    for (int b = a; b < 6; ++b) {
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(g[0][0].rows(), g[0][0].cols());
      // T is block diagonal, so only the in-block rows contribute
      const int ia0 = a < 3 ? 0 : 3;
      const int jb0 = b < 3 ? 0 : 3;
      for (int i = ia0; i < ia0 + 3; ++i) {
        if (t(i, a) == 0.0) continue;
        for (int j = jb0; j < jb0 + 3; ++j) {
          if (t(j, b) == 0.0) continue;
          const Eigen::MatrixXcd& gij = i <= j ? g[i][j] : g[j][i];
          if (i <= j)
            acc += (t(i, a) * t(j, b)) * gij;
          else
            acc += (t(i, a) * t(j, b)) * gij.adjoint();
        }
      }
      out[a][b] = scale * acc;
      if (b != a) out[b][a] = out[a][b].adjoint();
    }
  }
  return out;
}

}  // namespace

PrecoderResult solve_precoder(const DesignProblem& dp, const HrisState& state,
                              Philox& rng, bool with_secrecy) {
  const Scenario& sc = *dp.scenario;
  const int n_tx = sc.layout.n_tx;
  const int ku = static_cast<int>(dp.ue_points.size());
  const int ke = static_cast<int>(dp.eve_points.size());
  const Eigen::MatrixXcd w_cov = state.combiner * state.combiner.adjoint();

  PrecoderResult out;

  // reference design for the numeric rescale
  DesignCovariances ref;
  ref.f_cov = (sc.rf.p_max_w / n_tx) * Eigen::MatrixXcd::Identity(n_tx, n_tx);
  ref.w_cov = w_cov;
  const double scale = fim_scale(dp, ref);
  const double kappa = fim_kappa(sc);
  std::array<double, 6> beta = corner_scales_from_ref(dp, ref, scale);

  // FIM coefficients per grid pair (independent of beta)
  std::vector<Coeff6> coeffs(ku * ke);
  for (int iu = 0; iu < ku; ++iu)
    for (int ie = 0; ie < ke; ++ie) {
      const auto d = pair_derivs(dp, iu, ie);
      std::array<std::array<Eigen::MatrixXcd, 6>, 6> g;
      std::array<Eigen::MatrixXcd, 6> wdj;
      for (int j = 0; j < 6; ++j) wdj[j] = w_cov * (*d[j]);
      for (int i = 0; i < 6; ++i)
        for (int j = i; j < 6; ++j) g[i][j] = kappa * (d[i]->adjoint() * wdj[j]);
      coeffs[iu * ke + ie] = fold_jacobian(g, pair_jacobian(dp, iu, ie), scale);
    }

  std::vector<Eigen::RowVectorXcd> h_ue(ku), h_eve(ke);
  for (int i = 0; i < ku; ++i)
    h_ue[i] = effective_point_channel(dp, Node::kUe, i, state.phases_upsilon);
  for (int j = 0; j < ke; ++j)
    h_eve[j] = effective_point_channel(dp, Node::kEve, j, state.phases_upsilon);

  auto attempt = [&](const std::array<double, 6>& corner) {
    double corner_sum = 0.0;
    for (double b : corner) corner_sum += b;
    const double obj_gamma = 1.0 / std::max(1.0, corner_sum);

    conic::ConicProblem prob;
    const int f_var = prob.add_psd("F", n_tx);
    std::array<int, 6> t_vars{};
    conic::LinearExpr obj;
    for (int a = 0; a < 6; ++a) {
      t_vars[a] = prob.add_scalar("t" + std::to_string(a + 1));
      obj.add_scalar(t_vars[a], obj_gamma * corner[a]);
    }
    prob.set_objective(obj);

    // per-pair epigraph LMIs; the corner scalars are t (genie) or eps (robust)
    std::vector<int> eps_vars;
    for (int iu = 0; iu < ku; ++iu)
      for (int ie = 0; ie < ke; ++ie) {
        const Coeff6& coeff = coeffs[iu * ke + ie];
        conic::SymExpr6 fim;
        for (int a = 0; a < 6; ++a)
          for (int b = a; b < 6; ++b) {
            fim.entry[a][b].add_psd_trace(f_var, coeff[a][b].adjoint());
            fim.entry[a][b].constant = scale * sc.j_prior(a, b);
          }
        std::array<int, 6> corners = t_vars;
        if (dp.robust) {
          const int b_idx = iu * ke + ie;
          for (int a = 0; a < 6; ++a) {
            corners[a] = prob.add_scalar("eps" + std::to_string(a + 1) + "_" +
                                         std::to_string(b_idx + 1));
            eps_vars.push_back(corners[a]);
          }
        }
        const std::string tag =
            "op2.peb.pair" + std::to_string(iu + 1) + "_" + std::to_string(ie + 1);
        for (auto& lmi : conic::build_peb_epigraph_lmis(fim, corners, tag, corner))
          prob.add_lmi(std::move(lmi));
      }

    // coupling rows: sum_b eps_ab <= t_a
    if (dp.robust) {
      const int pairs = ku * ke;
      for (int a = 0; a < 6; ++a) {
        conic::LinearExpr row;
        for (int b = 0; b < pairs; ++b) row.add_scalar(eps_vars[b * 6 + a], 1.0);
        row.add_scalar(t_vars[a], -1.0);
        prob.add_linear(row, conic::Relation::kLe, "op2.couple.t" + std::to_string(a + 1));
      }
    }

    // power budget
    conic::LinearExpr power;
    power.add_psd_trace(f_var, Eigen::MatrixXcd::Identity(n_tx, n_tx));
    power.constant = -sc.rf.p_max_w;
    prob.add_linear(power, conic::Relation::kLe, "op2.power");

    if (with_secrecy) {
      const double pow2r = std::exp2(sc.r_th);
      const double rhs = sc.rf.noise_power_w * (pow2r - 1.0);
      for (int i = 0; i < ku; ++i)
        for (int j = 0; j < ke; ++j) {
          conic::LinearExpr row;
          Eigen::MatrixXcd m =
              h_ue[i].adjoint() * h_ue[i] - pow2r * (h_eve[j].adjoint() * h_eve[j]);
          row.add_psd_trace(f_var, 0.5 * (m + m.adjoint()));
          row.constant = -rhs;
          prob.add_linear(row, conic::Relation::kGe,
                          "op2.secrecy.pair" + std::to_string(i + 1) + "_" +
                              std::to_string(j + 1));
        }
    }
    return conic::solve(prob, sc.sdp);
  };

  if (std::getenv("ISAC_OPT_TRACE")) std::fprintf(stderr, "== OP2 solve ==\n");
  out.sol = attempt(beta);
  // re-derive the corner scales once when the first solve lands far from O(1)
  if (out.sol.status == conic::SolveStatus::kOptimal ||
      out.sol.status == conic::SolveStatus::kInaccurate) {
    double t_max = 0.0;
    for (int a = 0; a < 6; ++a)
      t_max = std::max(t_max, std::abs(out.sol.scalars.at("t" + std::to_string(a + 1))));
    if (t_max > 16.0 || t_max < 1.0 / 16.0) {
      std::array<double, 6> refined = beta;
      for (int a = 0; a < 6; ++a) {
        const double t_a = out.sol.scalars.at("t" + std::to_string(a + 1));
        refined[a] = std::exp2(std::round(
            std::log2(std::clamp(beta[a] * std::max(t_a, 1e-12), 1e-30, 1e30))));
      }
      conic::ConicSolution second = attempt(refined);
      if (std::getenv("ISAC_OPT_TRACE"))
        std::fprintf(stderr, "op2 rescale: tmax=%.3e first=%s second=%s obj2=%.6e\n",
                     t_max, conic::to_string(out.sol.status).c_str(),
                     conic::to_string(second.status).c_str(), second.objective);
      if (status_rank(second.status) <= status_rank(out.sol.status))
        out.sol = std::move(second);
    }
  }

  if (out.sol.status == conic::SolveStatus::kInfeasible) {
    out.infeasible_secrecy = with_secrecy;
    return out;
  }
  if (out.sol.status != conic::SolveStatus::kOptimal &&
      out.sol.status != conic::SolveStatus::kInaccurate)
    return out;

  Eigen::MatrixXcd f_cov = out.sol.psd.at("F");
  f_cov = (0.5 * (f_cov + f_cov.adjoint())).eval();
  out.f_cov = f_cov;
  const conic::RankOneResult r1 = conic::extract_rank_one(f_cov);
  out.f = r1.f;
  out.rank1_defect = r1.defect;

  // Gaussian randomization fallback when the relaxation is visibly loose.
  if (r1.defect > 1e-2) {
    Eigen::LLT<Eigen::MatrixXcd> llt(
        f_cov + 1e-12 * f_cov.trace().real() * Eigen::MatrixXcd::Identity(n_tx, n_tx));
    if (llt.info() == Eigen::Success) {
      DesignCovariances cand_cov;
      cand_cov.w_cov = w_cov;
      const double pow2r = std::exp2(sc.r_th);
      const double rhs = sc.rf.noise_power_w * (pow2r - 1.0);
      double best_obj = kInf;
      Eigen::VectorXcd best_f;
      for (int sample = 0; sample < 100; ++sample) {
        Eigen::VectorXcd v(n_tx);
        for (int i = 0; i < n_tx; ++i)
          v(i) = std::complex<double>(rng.normal(), rng.normal()) * M_SQRT1_2;
        Eigen::VectorXcd f = llt.matrixL() * v;
        const double nrm2 = f.squaredNorm();
        if (nrm2 > sc.rf.p_max_w) f *= std::sqrt(sc.rf.p_max_w / nrm2);
        bool feasible = true;
        if (with_secrecy) {
          for (int i = 0; i < ku && feasible; ++i)
            for (int j = 0; j < ke && feasible; ++j) {
              const double lhs = std::norm((h_ue[i] * f)(0, 0)) -
                                 pow2r * std::norm((h_eve[j] * f)(0, 0));
              feasible = lhs >= rhs - 1e-12 * std::abs(rhs);
            }
        }
        if (!feasible) continue;
        cand_cov.f_cov = f * f.adjoint();
        const double o = surrogate_peb(dp, cand_cov);
        if (o < best_obj) {
          best_obj = o;
          best_f = f;
        }
      }
      DesignCovariances eig_cov{r1.f * r1.f.adjoint(), w_cov};
      if (best_f.size() > 0 && best_obj < surrogate_peb(dp, eig_cov)) out.f = best_f;
    }
  }
  return out;
}

CombinerResult solve_combiner(const DesignProblem& dp, const Eigen::MatrixXcd& f_cov,
                              const HrisState& state) {
  const Scenario& sc = *dp.scenario;
  const int n_rf = sc.layout.n_rf;
  const int n_e = sc.layout.n_e;
  const int ku = static_cast<int>(dp.ue_points.size());
  const int ke = static_cast<int>(dp.eve_points.size());

  CombinerResult out;

  DesignCovariances ref;
  ref.f_cov = f_cov;
  ref.w_cov = state.combiner * state.combiner.adjoint();
  const double scale = fim_scale(dp, ref);
  const double kappa = fim_kappa(sc);
  std::array<double, 6> beta = corner_scales_from_ref(dp, ref, scale);

  // per-pair, per-block coefficients: J_ab = sum_l Re Tr{W_l Q_ab^(l)} with
  // Q_ab = D_b F D_a^H, folded through the pair Jacobian
  struct PairCoeff {
    std::array<std::array<std::vector<Eigen::MatrixXcd>, 6>, 6> c;
  };
  std::vector<PairCoeff> coeffs(ku * ke);
  for (int iu = 0; iu < ku; ++iu)
    for (int ie = 0; ie < ke; ++ie) {
      const auto d = pair_derivs(dp, iu, ie);
      std::array<Eigen::MatrixXcd, 6> r;
      for (int i = 0; i < 6; ++i) r[i] = f_cov * d[i]->adjoint();
      std::array<std::array<std::vector<Eigen::MatrixXcd>, 6>, 6> q;
      for (int a = 0; a < 6; ++a)
        for (int b = a; b < 6; ++b) {
          q[a][b].resize(n_rf);
          for (int l = 0; l < n_rf; ++l)
            q[a][b][l] = kappa * (d[b]->middleRows(l * n_e, n_e) *
                                  r[a].middleCols(l * n_e, n_e));
        }
      const Mat6 t_jac = pair_jacobian(dp, iu, ie);
      PairCoeff& pc = coeffs[iu * ke + ie];
      for (int a = 0; a < 6; ++a)
        for (int b = a; b < 6; ++b) {
          pc.c[a][b].resize(n_rf);
          const int ia0 = a < 3 ? 0 : 3;
          const int jb0 = b < 3 ? 0 : 3;
          for (int l = 0; l < n_rf; ++l) {
            Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n_e, n_e);
            for (int i = ia0; i < ia0 + 3; ++i) {
              if (t_jac(i, a) == 0.0) continue;
              for (int j = jb0; j < jb0 + 3; ++j) {
                if (t_jac(j, b) == 0.0) continue;
                const Eigen::MatrixXcd& qij = i <= j ? q[i][j][l] : q[j][i][l];
                if (i <= j)
                  acc += (t_jac(i, a) * t_jac(j, b)) * qij;
                else
                  acc += (t_jac(i, a) * t_jac(j, b)) * qij.adjoint();
              }
            }
            pc.c[a][b][l] = scale * acc.adjoint();
          }
        }
    }

  auto attempt = [&](const std::array<double, 6>& corner) {
    double corner_sum = 0.0;
    for (double b : corner) corner_sum += b;
    const double obj_gamma = 1.0 / std::max(1.0, corner_sum);

    conic::ConicProblem prob;
    std::vector<int> w_vars(n_rf);
    for (int l = 0; l < n_rf; ++l)
      w_vars[l] = prob.add_psd("W" + std::to_string(l + 1), n_e);
    std::array<int, 6> t_vars{};
    conic::LinearExpr obj;
    for (int a = 0; a < 6; ++a) {
      t_vars[a] = prob.add_scalar("t" + std::to_string(a + 1));
      obj.add_scalar(t_vars[a], obj_gamma * corner[a]);
    }
    prob.set_objective(obj);

    for (int l = 0; l < n_rf; ++l)
      for (int n = 0; n < n_e; ++n) {
        conic::LinearExpr row;
        Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n_e, n_e);
        e(n, n) = 1.0;
        row.add_psd_trace(w_vars[l], e);
        row.constant = -1.0;
        prob.add_linear(row, conic::Relation::kEq,
                        "op3.diag.w" + std::to_string(l + 1) + "_" + std::to_string(n + 1));
      }

    std::vector<int> eps_vars;
    for (int iu = 0; iu < ku; ++iu)
      for (int ie = 0; ie < ke; ++ie) {
        const PairCoeff& pc = coeffs[iu * ke + ie];
        conic::SymExpr6 fim;
        for (int a = 0; a < 6; ++a)
          for (int b = a; b < 6; ++b) {
            fim.entry[a][b].constant = scale * sc.j_prior(a, b);
            for (int l = 0; l < n_rf; ++l)
              fim.entry[a][b].add_psd_trace(w_vars[l], pc.c[a][b][l]);
          }
        std::array<int, 6> corners = t_vars;
        if (dp.robust) {
          const int b_idx = iu * ke + ie;
          for (int a = 0; a < 6; ++a) {
            corners[a] = prob.add_scalar("eps" + std::to_string(a + 1) + "_" +
                                         std::to_string(b_idx + 1));
            eps_vars.push_back(corners[a]);
          }
        }
        const std::string tag =
            "op3.peb.pair" + std::to_string(iu + 1) + "_" + std::to_string(ie + 1);
        for (auto& lmi : conic::build_peb_epigraph_lmis(fim, corners, tag, corner))
          prob.add_lmi(std::move(lmi));
      }

    if (dp.robust) {
      const int pairs = ku * ke;
      for (int a = 0; a < 6; ++a) {
        conic::LinearExpr row;
        for (int b = 0; b < pairs; ++b) row.add_scalar(eps_vars[b * 6 + a], 1.0);
        row.add_scalar(t_vars[a], -1.0);
        prob.add_linear(row, conic::Relation::kLe, "op3.couple.t" + std::to_string(a + 1));
      }
    }
    return conic::solve(prob, sc.sdp);
  };

  if (std::getenv("ISAC_OPT_TRACE")) std::fprintf(stderr, "== OP3 solve ==\n");
  out.sol = attempt(beta);
  if (out.sol.status == conic::SolveStatus::kOptimal ||
      out.sol.status == conic::SolveStatus::kInaccurate) {
    double t_max = 0.0;
    for (int a = 0; a < 6; ++a)
      t_max = std::max(t_max, std::abs(out.sol.scalars.at("t" + std::to_string(a + 1))));
    if (t_max > 16.0 || t_max < 1.0 / 16.0) {
      std::array<double, 6> refined = beta;
      for (int a = 0; a < 6; ++a) {
        const double t_a = out.sol.scalars.at("t" + std::to_string(a + 1));
        refined[a] = std::exp2(std::round(
            std::log2(std::clamp(beta[a] * std::max(t_a, 1e-12), 1e-30, 1e30))));
      }
      conic::ConicSolution second = attempt(refined);
      if (std::getenv("ISAC_OPT_TRACE"))
        std::fprintf(stderr, "op3 rescale: tmax=%.3e first=%s second=%s\n", t_max,
                     conic::to_string(out.sol.status).c_str(),
                     conic::to_string(second.status).c_str());
      if (status_rank(second.status) <= status_rank(out.sol.status))
        out.sol = std::move(second);
    }
  }

  if (out.sol.status != conic::SolveStatus::kOptimal &&
      out.sol.status != conic::SolveStatus::kInaccurate) {
    if (std::getenv("ISAC_OPT_TRACE"))
      std::fprintf(stderr, "op3 unusable: %s (%s)\n",
                   conic::to_string(out.sol.status).c_str(), out.sol.message.c_str());
    return out;
  }

  out.blocks.resize(n_rf);
  std::vector<Eigen::VectorXd> col_phases(n_rf);
  out.rank1_defect = 0.0;
  for (int l = 0; l < n_rf; ++l) {
    Eigen::MatrixXcd wl = out.sol.psd.at("W" + std::to_string(l + 1));
    wl = (0.5 * (wl + wl.adjoint())).eval();
    out.blocks[l] = wl;
    const conic::RankOneResult r1 = conic::extract_rank_one(wl);
    out.rank1_defect = std::max(out.rank1_defect, r1.defect);
    Eigen::VectorXd phases(n_e);
    for (int n = 0; n < n_e; ++n) phases(n) = std::arg(r1.f(n));
    col_phases[l] = phases;
  }
  out.combiner = combiner_from_column_phases(col_phases, sc.layout);
  return out;
}


namespace {

// Secrecy objective over the grids for a fixed precoder covariance.
struct ReflectionObjective {
  const DesignProblem* dp;
  const Eigen::MatrixXcd* f_cov;

  double rate_of(const Eigen::RowVectorXcd& h) const {
    const double q = ((h * (*f_cov)) * h.adjoint())(0, 0).real();
    return std::log2(1.0 + std::max(0.0, q) / dp->scenario->rf.noise_power_w);
  }

  // objective and the indices of the active min/max points
  double eval(const Eigen::VectorXd& ups, int& iu_act, int& ie_act) const {
    double r_ue = kInf, r_eve = -kInf;
    for (size_t i = 0; i < dp->ue_points.size(); ++i) {
      const double r = rate_of(effective_point_channel(*dp, Node::kUe, static_cast<int>(i), ups));
      if (r < r_ue) {
        r_ue = r;
        iu_act = static_cast<int>(i);
      }
    }
    for (size_t j = 0; j < dp->eve_points.size(); ++j) {
      const double r = rate_of(effective_point_channel(*dp, Node::kEve, static_cast<int>(j), ups));
      if (r > r_eve) {
        r_eve = r;
        ie_act = static_cast<int>(j);
      }
    }
    return r_ue - r_eve;
  }

  // gradient of rate(point) with respect to upsilon
  Eigen::VectorXd rate_gradient(Node node, int point, const Eigen::VectorXd& ups) const {
    const Scenario& sc = *dp->scenario;
    const Eigen::RowVectorXcd h = effective_point_channel(*dp, node, point, ups);
    const Eigen::VectorXcd v = (*f_cov) * h.adjoint();  // N_T
    const double q = (h * v)(0, 0).real();
    const Eigen::VectorXcd b = dp->h_bh * v;  // N_H
    const Eigen::RowVectorXcd& h_hu =
        node == Node::kUe ? dp->h_hu_ue[point] : dp->h_hu_eve[point];
    const double gain = reflection_gain(sc.rho, sc.chan.power_split);
    const int n_h = sc.layout.n_h();
    Eigen::VectorXd grad(n_h);
    const double denom = (sc.rf.noise_power_w + q) * std::log(2.0);
    for (int n = 0; n < n_h; ++n) {
      const std::complex<double> c = gain * h_hu(n) * b(n);
      grad(n) = -2.0 * std::imag(std::exp(kJ * ups(n)) * c) / denom;
    }
    return grad;
  }
};

Eigen::VectorXd clamp_box(Eigen::VectorXd v, double lo, double hi) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = std::clamp(v(i), lo, hi);
  return v;
}

}  // namespace

ReflectionResult optimize_reflection(const DesignProblem& dp, const Eigen::MatrixXcd& f_cov,
                                     const HrisState& state) {
  const Scenario& sc = *dp.scenario;
  const int n_h = sc.layout.n_h();
  ReflectionObjective objfn{&dp, &f_cov};

  // deterministic starts: current phases, align-to-UE, anti-align-to-Eve
  std::vector<Eigen::VectorXd> starts;
  starts.push_back(clamp_box(state.phases_upsilon, sc.phase_lo, sc.phase_hi));
  {
    const conic::RankOneResult r1 = conic::extract_rank_one(
        f_cov + 1e-300 * Eigen::MatrixXcd::Identity(f_cov.rows(), f_cov.cols()));
    const Eigen::VectorXcd bh_f = dp.h_bh * r1.f;
    auto phase_start = [&](Node node, double offset) {
      const Eigen::VectorXcd& h_dl = node == Node::kUe ? dp.h_dl_ue[0] : dp.h_dl_eve[0];
      const Eigen::RowVectorXcd& h_hu = node == Node::kUe ? dp.h_hu_ue[0] : dp.h_hu_eve[0];
      const std::complex<double> direct = (h_dl.transpose() * r1.f)(0, 0);
      Eigen::VectorXd ups(n_h);
      for (int n = 0; n < n_h; ++n)
        ups(n) = std::clamp(wrap_pi(std::arg(direct) - std::arg(h_hu(n) * bh_f(n)) + offset),
                            sc.phase_lo, sc.phase_hi);
      return ups;
    };
    starts.push_back(phase_start(Node::kUe, 0.0));
    starts.push_back(phase_start(Node::kEve, M_PI));
  }

  ReflectionResult best;
  best.secrecy_rate = -kInf;
  int total_iters = 0;
  for (const auto& start : starts) {
    Eigen::VectorXd ups = start;
    int iu = 0, ie = 0;
    double obj = objfn.eval(ups, iu, ie);
    double step = 1.0;
    double pg_norm = 0.0;
    int it = 0;
    for (; it < sc.reflect_max_iters; ++it) {
      const Eigen::VectorXd grad =
          objfn.rate_gradient(Node::kUe, iu, ups) - objfn.rate_gradient(Node::kEve, ie, ups);
      // projected gradient (zero at an active bound pointing outward)
      Eigen::VectorXd pg = grad;
      for (int n = 0; n < n_h; ++n) {
        if (ups(n) <= sc.phase_lo && grad(n) < 0) pg(n) = 0;
        if (ups(n) >= sc.phase_hi && grad(n) > 0) pg(n) = 0;
      }
      pg_norm = pg.norm();
      if (pg_norm < sc.reflect_grad_tol) break;
      bool improved = false;
      for (int bt = 0; bt < 30; ++bt) {
        const Eigen::VectorXd cand = clamp_box(ups + step * grad, sc.phase_lo, sc.phase_hi);
        int iu2 = 0, ie2 = 0;
        const double cand_obj = objfn.eval(cand, iu2, ie2);
        if (cand_obj > obj + 1e-4 * step * pg_norm * pg_norm) {
          ups = cand;
          obj = cand_obj;
          iu = iu2;
          ie = ie2;
          step *= 1.5;
          improved = true;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    total_iters += it;
    if (obj > best.secrecy_rate) {
      best.secrecy_rate = obj;
      best.upsilon = ups;
      best.projected_grad_norm = pg_norm;
    }
  }
  best.iterations = total_iters;
  best.secrecy_rate = std::max(0.0, best.secrecy_rate);
  return best;
}

namespace {

HrisState initial_state(const DesignProblem& dp) {
  const Scenario& sc = *dp.scenario;
  HrisState st = HrisState::uniform(sc.layout, sc.rho);
  // combiner columns alternate between steering at the UE and Eve centers
  const AngleSet au = angles_from_positions(dp.truth.ue, sc.p_hris);
  const AngleSet ae = angles_from_positions(dp.truth.eve, sc.p_hris);
  const Eigen::VectorXcd a_ue = upa_steering(au.psi_k, au.phi_k, sc.layout);
  const Eigen::VectorXcd a_eve = upa_steering(ae.psi_k, ae.phi_k, sc.layout);
  std::vector<Eigen::VectorXd> cols(sc.layout.n_rf);
  for (int l = 0; l < sc.layout.n_rf; ++l) {
    const Eigen::VectorXcd& a = l % 2 == 0 ? a_ue : a_eve;
    Eigen::VectorXd phases(sc.layout.n_e);
    for (int n = 0; n < sc.layout.n_e; ++n) phases(n) = std::arg(a(l * sc.layout.n_e + n));
    cols[l] = phases;
  }
  st.combiner = combiner_from_column_phases(cols, sc.layout);
  return st;
}

Eigen::MatrixXcd initial_f_cov(const DesignProblem& dp, const HrisState& st) {
  const Scenario& sc = *dp.scenario;
  const Eigen::RowVectorXcd h = effective_point_channel(dp, Node::kUe, 0, st.phases_upsilon);
  Eigen::VectorXcd f = h.adjoint();
  const double nrm = f.norm();
  if (nrm > 0)
    f *= std::sqrt(sc.rf.p_max_w) / nrm;
  else
    f = Eigen::VectorXcd::Constant(sc.layout.n_tx,
                                   std::sqrt(sc.rf.p_max_w / sc.layout.n_tx));
  return f * f.adjoint();
}

double worst_secrecy_margin(const DesignProblem& dp, const Eigen::MatrixXcd& f_cov,
                            const Eigen::VectorXd& ups) {
  const Scenario& sc = *dp.scenario;
  const double pow2r = std::exp2(sc.r_th);
  const double rhs = sc.rf.noise_power_w * (pow2r - 1.0);
  double worst = kInf;
  for (size_t i = 0; i < dp.ue_points.size(); ++i) {
    const Eigen::RowVectorXcd hu = effective_point_channel(dp, Node::kUe, static_cast<int>(i), ups);
    const double qu = ((hu * f_cov) * hu.adjoint())(0, 0).real();
    for (size_t j = 0; j < dp.eve_points.size(); ++j) {
      const Eigen::RowVectorXcd he =
          effective_point_channel(dp, Node::kEve, static_cast<int>(j), ups);
      const double qe = ((he * f_cov) * he.adjoint())(0, 0).real();
      worst = std::min(worst, qu - pow2r * qe - rhs);
    }
  }
  return worst;
}

AlternatingReport run_alternating(const DesignProblem& dp, Philox& rng, bool with_secrecy) {
  const Scenario& sc = *dp.scenario;
  AlternatingReport rep;

  HrisState state = initial_state(dp);
  Eigen::MatrixXcd f_cov = initial_f_cov(dp, state);
  Eigen::VectorXcd f_vec;
  double defect_f = 0.0, defect_w = 0.0;

  auto current_cov = [&]() {
    return DesignCovariances{f_cov, state.combiner * state.combiner.adjoint()};
  };
  double incumbent = surrogate_peb(dp, current_cov());
  double secrecy_now = 0.0;

  for (int it = 0; it < sc.max_alt_iters; ++it) {
    IterationRecord rec;

    PrecoderResult pr = solve_precoder(dp, state, rng, with_secrecy);
    rec.precoder_status = pr.sol.status;
    if (pr.infeasible_secrecy) {
      rep.status = RunStatus::kInfeasibleSecrecy;
      rep.infeasible_at_iter = it + 1;
      rep.message = "secrecy threshold infeasible at iteration " + std::to_string(it + 1);
      rep.iters.push_back(rec);
      return rep;
    }
    if (pr.sol.status == conic::SolveStatus::kOptimal ||
        pr.sol.status == conic::SolveStatus::kInaccurate) {
      DesignCovariances cand{pr.f_cov, state.combiner * state.combiner.adjoint()};
      const double obj = surrogate_peb(dp, cand);
      if (obj < incumbent) {
        incumbent = obj;
        f_cov = pr.f_cov;
        f_vec = pr.f;
        defect_f = pr.rank1_defect;
      }
    } else if (it == 0) {
      rep.status = RunStatus::kFailed;
      rep.message = "precoder SDP failed: " + pr.sol.message;
      rep.iters.push_back(rec);
      return rep;
    }

    CombinerResult cr = solve_combiner(dp, f_cov, state);
    rec.combiner_status = cr.sol.status;
    if (cr.sol.status == conic::SolveStatus::kOptimal ||
        cr.sol.status == conic::SolveStatus::kInaccurate) {
      DesignCovariances cand{f_cov, cr.combiner * cr.combiner.adjoint()};
      const double obj = surrogate_peb(dp, cand);
      if (obj < incumbent) {
        incumbent = obj;
        state.combiner = cr.combiner;
        defect_w = cr.rank1_defect;
      }
    }

    ReflectionResult rr = optimize_reflection(dp, f_cov, state);
    state.phases_upsilon = rr.upsilon;
    secrecy_now = rr.secrecy_rate;

    rec.objective = incumbent;
    rec.secrecy_rate = secrecy_now;
    rec.secrecy_margin = worst_secrecy_margin(dp, f_cov, state.phases_upsilon);
    rec.rank1_defect_f = defect_f;
    rec.rank1_defect_w = defect_w;
    rep.iters.push_back(rec);

    const size_t n = rep.iters.size();
    if (n >= 2) {
      const double prev = rep.iters[n - 2].objective;
      if (std::isfinite(prev) && std::isfinite(incumbent) &&
          std::abs(prev - incumbent) < sc.conv_tol * std::max(prev, 1e-300)) {
        rep.converged = true;
        break;
      }
    }
  }

  if (f_vec.size() == 0) {
    const conic::RankOneResult r1 = conic::extract_rank_one(f_cov);
    f_vec = r1.f;
    defect_f = r1.defect;
  }

  rep.status = rep.converged ? RunStatus::kConverged : RunStatus::kMaxIters;
  rep.f = f_vec;
  rep.f_cov = f_cov;
  rep.combiner = state.combiner;
  rep.upsilon = state.phases_upsilon;
  rep.rank1_defect = std::max(defect_f, defect_w);
  rep.objective = incumbent;

  const DesignCovariances cov = current_cov();
  try {
    const Mat6 jt = eval_j_tilde(dp, 0, 0, cov);
    const PebResult pr =
        sc.peb_domain == PebDomain::kTransformed
            ? peb(jt)
            : peb(eval_j_pos(dp, 0, 0, cov));
    rep.peb_total = pr.total;
    rep.peb_ue = pr.ue;
    rep.peb_eve = pr.eve;
  } catch (const SingularFimError&) {
    rep.peb_total = rep.peb_ue = rep.peb_eve = kInf;
  }
  rep.worst_case_peb = dp.robust ? worst_case_peb(dp, cov) : rep.peb_total;

  // final rates with the extracted beamformer at the reporting positions
  {
    const Scenario& s2 = sc;
    const AngleSet au = angles_from_positions(dp.truth.ue, s2.p_hris);
    const AngleSet ae = angles_from_positions(dp.truth.eve, s2.p_hris);
    ChannelSet cs;
    cs.h_dl_ue = dl_channel(dp.truth.ue, au.theta_k, s2.rf, s2.layout, s2.chan);
    cs.h_dl_eve = dl_channel(dp.truth.eve, ae.theta_k, s2.rf, s2.layout, s2.chan);
    cs.h_bh = dp.h_bh;
    cs.h_hu_ue = hris_user_channel(dp.truth.ue, s2.p_hris, s2.rf, s2.layout, s2.chan);
    cs.h_hu_eve = hris_user_channel(dp.truth.eve, s2.p_hris, s2.rf, s2.layout, s2.chan);
    cs.omega = dp.omega;
    HrisState final_state = state;
    rep.rate_ue = achievable_rate(rep.f, effective_channel(final_state, cs, Node::kUe, s2.chan),
                                  s2.rf.noise_power_w);
    rep.rate_eve = achievable_rate(rep.f, effective_channel(final_state, cs, Node::kEve, s2.chan),
                                   s2.rf.noise_power_w);
    rep.secrecy_rate = std::max(0.0, rep.rate_ue - rep.rate_eve);
  }
  return rep;
}

}  // namespace

AlternatingReport alternate_genie(const Scenario& sc, const TargetPositions& eta,
                                  const OmegaPair& omega, Philox& rng) {
  const DesignProblem dp = make_genie_problem(sc, eta, omega);
  return run_alternating(dp, rng, true);
}

AlternatingReport alternate_robust(const Scenario& sc, const UncertaintyRegion& ue,
                                   const UncertaintyRegion& eve, const OmegaPair& omega,
                                   Philox& rng) {
  const DesignProblem dp = make_robust_problem(sc, ue, eve, omega);
  return run_alternating(dp, rng, true);
}

namespace {

// Closed-form secrecy-rate-optimal beamformer for fixed channels: principal
// generalized eigenvector of (sigma^2/P I + H_ue, sigma^2/P I + H_eve).
Eigen::VectorXcd max_secrecy_precoder(const Eigen::RowVectorXcd& h_ue,
                                      const Eigen::RowVectorXcd& h_eve, double sigma2,
                                      double p_max) {
  const int n = static_cast<int>(h_ue.cols());
  const Eigen::MatrixXcd a =
      (sigma2 / p_max) * Eigen::MatrixXcd::Identity(n, n) + h_ue.adjoint() * h_ue;
  const Eigen::MatrixXcd b =
      (sigma2 / p_max) * Eigen::MatrixXcd::Identity(n, n) + h_eve.adjoint() * h_eve;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> eig(a, b);
  Eigen::VectorXcd f = eig.eigenvectors().col(n - 1);
  return f * (std::sqrt(p_max) / f.norm());
}

}  // namespace

std::vector<TradeoffPoint> tradeoff_sweep(const Scenario& sc, const DesignProblem& base,
                                          const std::vector<double>& rho_grid,
                                          Philox& rng) {
  std::vector<TradeoffPoint> out;
  for (const double rho : rho_grid) {
    if (rho < 0.0 || rho > 1.0)
      throw std::invalid_argument("tradeoff_sweep: rho outside [0,1]");
    TradeoffPoint pt;
    pt.rho = rho;
    Scenario sweep_sc = sc;
    sweep_sc.rho = rho;
    DesignProblem dp = base;
    dp.scenario = &sweep_sc;
    try {
      if (rho == 0.0) {
        // the FIM vanishes identically; all power goes to reflection
        HrisState st = initial_state(dp);
        Eigen::VectorXcd f =
            max_secrecy_precoder(effective_point_channel(dp, Node::kUe, 0, st.phases_upsilon),
                                 effective_point_channel(dp, Node::kEve, 0, st.phases_upsilon),
                                 sweep_sc.rf.noise_power_w, sweep_sc.rf.p_max_w);
        for (int pass = 0; pass < 2; ++pass) {
          const ReflectionResult rr = optimize_reflection(dp, f * f.adjoint(), st);
          st.phases_upsilon = rr.upsilon;
          f = max_secrecy_precoder(
              effective_point_channel(dp, Node::kUe, 0, st.phases_upsilon),
              effective_point_channel(dp, Node::kEve, 0, st.phases_upsilon),
              sweep_sc.rf.noise_power_w, sweep_sc.rf.p_max_w);
        }
        int iu = 0, ie = 0;
        ReflectionObjective objfn{&dp, nullptr};
        const Eigen::MatrixXcd f_cov = f * f.adjoint();
        objfn.f_cov = &f_cov;
        pt.secrecy_rate = std::max(0.0, objfn.eval(st.phases_upsilon, iu, ie));
        pt.peb = kInf;
        pt.status = RunStatus::kConverged;
      } else {
        const AlternatingReport rep = run_alternating(dp, rng, false);
        pt.status = rep.status;
        pt.peb = dp.robust ? rep.worst_case_peb : rep.peb_total;
        pt.secrecy_rate = rep.secrecy_rate;
        if (dp.robust) {
          // robust sweeps report the grid min/max secrecy
          ReflectionObjective objfn{&dp, &rep.f_cov};
          int iu = 0, ie = 0;
          pt.secrecy_rate = std::max(0.0, objfn.eval(rep.upsilon, iu, ie));
        }
      }
    } catch (const std::exception& e) {
      pt.status = RunStatus::kFailed;
      pt.peb = kInf;
      pt.secrecy_rate = 0.0;
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace isac
