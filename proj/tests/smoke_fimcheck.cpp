// Scratch consistency check: SDP coefficient path vs direct FIM evaluation.
#include <cstdio>

#include "isac/optimizer.hpp"

using namespace isac;

int main() {
  Scenario sc;
  sc.p_hris = {0, 30, 5};
  sc.layout = {16, 4, 8, 0.5};
  sc.rf = RfConstants::from_carrier(20e9, 1e-13, 200, 0.1);
  sc.rho = 0.5;

  const TargetPositions eta{{5, 10, 2}, {20, 20, 2}};
  const OmegaPair omega{1.234, 4.2};
  DesignProblem dp = make_genie_problem(sc, eta, omega);

  HrisState st = HrisState::uniform(sc.layout, sc.rho);
  DesignCovariances cov;
  cov.w_cov = st.combiner * st.combiner.adjoint();

  // F reference designs
  Eigen::MatrixXcd f_id =
      (sc.rf.p_max_w / sc.layout.n_tx) *
      Eigen::MatrixXcd::Identity(sc.layout.n_tx, sc.layout.n_tx);

  cov.f_cov = f_id;
  Mat6 jt = eval_j_tilde(dp, 0, 0, cov);
  Eigen::SelfAdjointEigenSolver<Mat6> eig(jt);
  std::printf("J~ (F=I scaled) eigs:");
  for (int i = 0; i < 6; ++i) std::printf(" %.3e", eig.eigenvalues()(i));
  std::printf("\n  trace=%.6e  trinv=%.6e\n", jt.trace(), jt.inverse().trace());

  Mat6 jp = Mat6::Zero();
  {
    // position-domain FIM via metrics for comparison
    std::array<Eigen::MatrixXcd, 6> d;
    for (int i = 0; i < 3; ++i) d[i] = dp.ue_points[0].derivs[i];
    for (int i = 0; i < 3; ++i) d[3 + i] = dp.eve_points[0].derivs[i];
    jp = fim_positions(cov, d, sc.rf.block_len, sc.rho, sc.rf.noise_power_w);
  }
  Eigen::SelfAdjointEigenSolver<Mat6> eig2(jp);
  std::printf("J (position) eigs:");
  for (int i = 0; i < 6; ++i) std::printf(" %.3e", eig2.eigenvalues()(i));
  std::printf("\n");

  // beamformer covering both targets
  const AngleSet au = angles_from_positions(eta.ue, sc.p_hris);
  const AngleSet ae = angles_from_positions(eta.eve, sc.p_hris);
  Eigen::VectorXcd fu = ula_steering(au.theta_k, 16);
  Eigen::VectorXcd fe = ula_steering(ae.theta_k, 16);
  cov.f_cov = 0.05 * (fu * fu.adjoint()) + 0.05 * (fe * fe.adjoint());
  jt = eval_j_tilde(dp, 0, 0, cov);
  Eigen::SelfAdjointEigenSolver<Mat6> eig3(jt);
  std::printf("J~ (two-beam F) eigs:");
  for (int i = 0; i < 6; ++i) std::printf(" %.3e", eig3.eigenvalues()(i));
  std::printf("\n  trinv=%.6e  -> peb=%.4f\n", jt.inverse().trace(),
              std::sqrt(jt.inverse().trace()));
  return 0;
}
