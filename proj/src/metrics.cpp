#include "isac/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace isac {

double achievable_rate(const Eigen::VectorXcd& f, const Eigen::RowVectorXcd& h_eff,
                       double sigma2) {
  if (!(sigma2 > 0)) throw std::invalid_argument("achievable_rate: sigma2 must be > 0");
  const double snr = std::norm((h_eff * f)(0, 0)) / sigma2;
  return std::log2(1.0 + snr);
}

double secrecy_rate(const Eigen::VectorXcd& f, const HrisState& state,
                    const ChannelSet& channels, double sigma2,
                    const ChannelOptions& opts) {
  const double r_ue = achievable_rate(f, effective_channel(state, channels, Node::kUe, opts), sigma2);
  const double r_eve = achievable_rate(f, effective_channel(state, channels, Node::kEve, opts), sigma2);
  return std::max(0.0, r_ue - r_eve);
}

double secrecy_constraint_lhs(const Eigen::MatrixXcd& f_cov, const ChannelSet& channels,
                              const HrisState& state, double r_th,
                              const ChannelOptions& opts) {
  const Eigen::RowVectorXcd h_ue = effective_channel(state, channels, Node::kUe, opts);
  const Eigen::RowVectorXcd h_eve = effective_channel(state, channels, Node::kEve, opts);
  const Eigen::MatrixXcd m =
      h_ue.adjoint() * h_ue - std::exp2(r_th) * (h_eve.adjoint() * h_eve);
  return (m * f_cov).trace().real();
}

namespace {

double fim_prefactor(int block_len, double rho, double sigma2, PowerSplitConvention split) {
  const double g = sensing_gain(rho, split);
  return 2.0 * block_len * g * g / sigma2;
}

}  // namespace

Mat6 fim_positions(const DesignCovariances& cov,
                   const std::array<Eigen::MatrixXcd, 6>& derivs, int block_len,
                   double rho, double sigma2, PowerSplitConvention split) {
  const double kappa = fim_prefactor(block_len, rho, sigma2, split);
  std::array<Eigen::MatrixXcd, 6> wdf;
  for (int j = 0; j < 6; ++j) wdf[j] = cov.w_cov * derivs[j] * cov.f_cov;
  Mat6 j_pos;
  for (int i = 0; i < 6; ++i) {
    for (int j = i; j < 6; ++j) {
      const double v = kappa * (derivs[i].conjugate().cwiseProduct(wdf[j])).sum().real();
      j_pos(i, j) = v;
      j_pos(j, i) = v;
    }
  }
  return j_pos;
}

Eigen::Matrix3d fim_positions_single(const DesignCovariances& cov,
                                     const std::array<Eigen::MatrixXcd, 3>& derivs,
                                     int block_len, double rho, double sigma2,
                                     PowerSplitConvention split) {
  const double kappa = fim_prefactor(block_len, rho, sigma2, split);
  Eigen::Matrix3d j3;
  for (int i = 0; i < 3; ++i) {
    const Eigen::MatrixXcd wdi = cov.w_cov * derivs[i] * cov.f_cov;
    for (int j = i; j < 3; ++j) {
      const double v = kappa * (derivs[j].conjugate().cwiseProduct(wdi)).sum().real();
      j3(i, j) = v;
      j3(j, i) = v;
    }
  }
  return j3;
}

Mat6 fim_transform(const Mat6& j_pos, const Mat6& jacobian_t, const Mat6& j_prior) {
  return jacobian_t.transpose() * j_pos * jacobian_t + j_prior;
}

namespace {

// Diagonal of the ridge-regularized inverse; throws past the condition cap.
template <typename Mat>
Eigen::VectorXd inverse_diagonal(const Mat& m, const char* who) {
  const int n = static_cast<int>(m.rows());
  const double ridge = 1e-12 * m.trace() / n;
  Mat reg = m;
  reg.diagonal().array() += ridge;
  Eigen::SelfAdjointEigenSolver<Mat> eig(reg);
  if (eig.info() != Eigen::Success) throw SingularFimError(std::string(who) + ": eigensolver failed");
  const auto& vals = eig.eigenvalues();
  const double lo = vals(0), hi = vals(n - 1);
  if (!(lo > 0.0) || hi / lo > 1e14)
    throw SingularFimError(std::string(who) + ": FIM condition number above 1e14");
  Eigen::VectorXd d(n);
  for (int a = 0; a < n; ++a) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k)
      acc += eig.eigenvectors()(a, k) * eig.eigenvectors()(a, k) / vals(k);
    d(a) = acc;
  }
  return d;
}

}  // namespace

PebResult peb(const Mat6& j_tilde) {
  const Eigen::VectorXd d = inverse_diagonal(j_tilde, "peb");
  PebResult r;
  const double ue_sq = d(0) + d(1) + d(2);
  const double eve_sq = d(3) + d(4) + d(5);
  r.ue = std::sqrt(ue_sq);
  r.eve = std::sqrt(eve_sq);
  r.total = std::sqrt(ue_sq + eve_sq);
  return r;
}

double peb_single(const Eigen::Matrix3d& j_tilde3) {
  return std::sqrt(inverse_diagonal(j_tilde3, "peb_single").sum());
}

FimBundle fim_bundle(const DesignCovariances& cov,
                     const std::array<Eigen::MatrixXcd, 6>& derivs,
                     const Mat6& jacobian_t, const Mat6& j_prior, int block_len,
                     double rho, double sigma2, PebDomain domain,
                     PowerSplitConvention split) {
  FimBundle b;
  b.j_pos = fim_positions(cov, derivs, block_len, rho, sigma2, split);
  b.jacobian_t = jacobian_t;
  b.j_prior = j_prior;
  b.j_tilde = fim_transform(b.j_pos, jacobian_t, j_prior);
  const PebResult r = domain == PebDomain::kTransformed ? peb(b.j_tilde) : peb(b.j_pos);
  b.peb_total = r.total;
  b.peb_ue = r.ue;
  b.peb_eve = r.eve;
  return b;
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

}  // namespace isac
