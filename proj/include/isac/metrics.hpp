#pragma once

#include <array>
#include <Eigen/Dense>

#include "isac/channel.hpp"
#include "isac/geometry.hpp"

namespace isac {

/// Raised by peb() when the regularized FIM is numerically singular.
class SingularFimError : public std::runtime_error {
 public:
  explicit SingularFimError(const std::string& what) : std::runtime_error(what) {}
};

enum class PebDomain { kTransformed, kPosition };

struct FimBundle {
  Mat6 j_pos = Mat6::Zero();
  Mat6 jacobian_t = Mat6::Zero();
  Mat6 j_prior = Mat6::Zero();
  Mat6 j_tilde = Mat6::Zero();
  double peb_total = 0.0, peb_ue = 0.0, peb_eve = 0.0;
};

struct DesignCovariances {
  Eigen::MatrixXcd f_cov;  // N_T x N_T Hermitian PSD
  Eigen::MatrixXcd w_cov;  // N_H x N_H Hermitian PSD, block diagonal
};

double achievable_rate(const Eigen::VectorXcd& f, const Eigen::RowVectorXcd& h_eff,
                       double sigma2);

/// max{0, R_UE - R_Eve} on the effective channels of both nodes.
double secrecy_rate(const Eigen::VectorXcd& f, const HrisState& state,
                    const ChannelSet& channels, double sigma2,
                    const ChannelOptions& opts = {});

/// Tr{(H_UE - 2^{r_th} H_Eve) F} with H_k built from the effective channels;
/// the constraint holds iff the value >= sigma^2 (2^{r_th} - 1).
double secrecy_constraint_lhs(const Eigen::MatrixXcd& f_cov, const ChannelSet& channels,
                              const HrisState& state, double r_th,
                              const ChannelOptions& opts = {});

/// Position-domain FIM: [J]_ij = (2 T rho_s^2 / sigma^2) Re Tr{D_i^H W D_j F}
/// with rho_s the sensing branch gain.
Mat6 fim_positions(const DesignCovariances& cov,
                   const std::array<Eigen::MatrixXcd, 6>& derivs, int block_len,
                   double rho, double sigma2,
                   PowerSplitConvention split = PowerSplitConvention::kLinear);

/// Single-probe-target variant (3x3) used by area sweeps.
Eigen::Matrix3d fim_positions_single(const DesignCovariances& cov,
                                     const std::array<Eigen::MatrixXcd, 3>& derivs,
                                     int block_len, double rho, double sigma2,
                                     PowerSplitConvention split = PowerSplitConvention::kLinear);

Mat6 fim_transform(const Mat6& j_pos, const Mat6& jacobian_t, const Mat6& j_prior);

struct PebResult {
  double total = 0.0, ue = 0.0, eve = 0.0;
};

/// sqrt-trace-inverse with ridge 1e-12 Tr/6; throws SingularFimError past cond 1e14.
PebResult peb(const Mat6& j_tilde);
double peb_single(const Eigen::Matrix3d& j_tilde3);

/// Full chain: derivatives -> J -> Eq.(7) transform -> PEB, in the requested domain.
FimBundle fim_bundle(const DesignCovariances& cov,
                     const std::array<Eigen::MatrixXcd, 6>& derivs,
                     const Mat6& jacobian_t, const Mat6& j_prior, int block_len,
                     double rho, double sigma2,
                     PebDomain domain = PebDomain::kTransformed,
                     PowerSplitConvention split = PowerSplitConvention::kLinear);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

}  // namespace isac
