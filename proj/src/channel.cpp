#include "isac/channel.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace isac {

namespace {
constexpr std::complex<double> kJ{0.0, 1.0};

void require(bool ok, const char* what) {
  if (!ok) throw DegenerateGeometryError(what);
}
}  // namespace

RfConstants RfConstants::from_carrier(double carrier_hz, double noise_power_w,
                                      int block_len, double p_max_w) {
  RfConstants rf;
  rf.carrier_hz = carrier_hz;
  rf.wavelength_m = kSpeedOfLight / carrier_hz;
  rf.noise_power_w = noise_power_w;
  rf.block_len = block_len;
  rf.p_max_w = p_max_w;
  rf.validate();
  return rf;
}

void RfConstants::validate() const {
  if (!(carrier_hz > 0) || !(wavelength_m > 0) || !(noise_power_w > 0) ||
      block_len < 1 || !(p_max_w > 0))
    throw std::invalid_argument("RfConstants: all fields must be strictly positive");
  const double expected = kSpeedOfLight / carrier_hz;
  if (std::abs(wavelength_m - expected) > 1e-9 * expected)
    throw std::invalid_argument("RfConstants: wavelength inconsistent with carrier");
}

double path_amplitude(double dist, double wavelength, AmplitudeLaw law) {
  require(dist > kMinDistanceM, "path_amplitude: zero distance");
  switch (law) {
    case AmplitudeLaw::kInverseSquare:
      return wavelength / (4.0 * M_PI * dist * dist);
    case AmplitudeLaw::kInverse:
      return wavelength / (4.0 * M_PI * dist);
  }
  return 0.0;
}

double sensing_gain(double rho, PowerSplitConvention split) {
  return split == PowerSplitConvention::kLinear ? rho : std::sqrt(rho);
}

double reflection_gain(double rho, PowerSplitConvention split) {
  return split == PowerSplitConvention::kLinear ? 1.0 - rho : std::sqrt(1.0 - rho);
}

Eigen::VectorXcd HrisState::reflection() const {
  Eigen::VectorXcd phi(phases_upsilon.size());
  for (Eigen::Index n = 0; n < phases_upsilon.size(); ++n)
    phi(n) = std::exp(kJ * phases_upsilon(n));
  return phi;
}

void HrisState::validate(const ArrayLayout& layout) const {
  if (rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("HrisState: rho outside [0,1]");
  if (phases_upsilon.size() != layout.n_h())
    throw std::invalid_argument("HrisState: upsilon length != N_H");
  if (combiner.rows() != layout.n_h() || combiner.cols() != layout.n_rf)
    throw std::invalid_argument("HrisState: combiner shape mismatch");
  for (int l = 0; l < layout.n_rf; ++l) {
    for (int row = 0; row < layout.n_h(); ++row) {
      const bool in_block = row / layout.n_e == l;
      const double mag = std::abs(combiner(row, l));
      if (in_block) {
        if (std::abs(mag - 1.0) > 1e-9)
          throw std::invalid_argument("HrisState: combiner entries must be unit modulus");
      } else if (mag != 0.0) {
        throw std::invalid_argument("HrisState: combiner nonzero off its diagonal block");
      }
    }
  }
}

HrisState HrisState::uniform(const ArrayLayout& layout, double rho) {
  HrisState s;
  s.rho = rho;
  s.phases_upsilon = Eigen::VectorXd::Zero(layout.n_h());
  s.combiner = Eigen::MatrixXcd::Zero(layout.n_h(), layout.n_rf);
  for (int l = 0; l < layout.n_rf; ++l)
    s.combiner.block(l * layout.n_e, l, layout.n_e, 1).setOnes();
  return s;
}

Eigen::MatrixXcd combiner_from_column_phases(const std::vector<Eigen::VectorXd>& col_phases,
                                             const ArrayLayout& layout) {
  if (static_cast<int>(col_phases.size()) != layout.n_rf)
    throw std::invalid_argument("combiner_from_column_phases: need N_RF columns");
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(layout.n_h(), layout.n_rf);
  for (int l = 0; l < layout.n_rf; ++l) {
    if (col_phases[l].size() != layout.n_e)
      throw std::invalid_argument("combiner_from_column_phases: column length != N_E");
    for (int n = 0; n < layout.n_e; ++n)
      w(l * layout.n_e + n, l) = std::exp(kJ * col_phases[l](n));
  }
  return w;
}

Eigen::VectorXcd dl_channel(const Position3& p_k, double theta_k,
                            const RfConstants& rf, const ArrayLayout& layout,
                            const ChannelOptions& opts) {
  const double d = p_k.norm();
  require(d > kMinDistanceM, "dl_channel: node at the BS");
  const double amp = path_amplitude(d, rf.wavelength_m, opts.amplitude_law);
  const std::complex<double> gain = amp * std::exp(-kJ * (2.0 * M_PI * d / rf.wavelength_m));
  return gain * ula_steering(theta_k, layout.n_tx, layout.element_spacing);
}

Eigen::MatrixXcd bs_hris_channel(const Position3& p_h, const AngleSet& angles,
                                 const RfConstants& rf, const ArrayLayout& layout,
                                 const ChannelOptions& opts) {
  const double d = p_h.norm();
  require(d > kMinDistanceM, "bs_hris_channel: HRIS at the BS");
  const double amp = path_amplitude(d, rf.wavelength_m, opts.amplitude_law);
  const std::complex<double> gain = amp * std::exp(-kJ * (2.0 * M_PI * d / rf.wavelength_m));
  const Eigen::VectorXcd a_h = upa_steering(angles.psi_br, angles.phi_br, layout);
  const Eigen::VectorXcd a_bs = ula_steering(angles.theta_br, layout.n_tx, layout.element_spacing);
  return gain * (a_h * a_bs.adjoint());
}

namespace {

// Shared pieces of the single-target bistatic term and its derivatives.
struct BistaticTerm {
  double d1 = 0.0, d2 = 0.0;  // BS->target, target->HRIS distances
  double amp = 0.0;           // |a_{H,k}|
  std::complex<double> gain;  // a_{H,k} * exp(-j 2 pi d_k / lambda)
  AngleSet angles;
  Eigen::VectorXcd a_h, a_bs;
};

BistaticTerm bistatic_term(const Position3& p_k, double omega_k, const Position3& p_h,
                           const RfConstants& rf, const ArrayLayout& layout,
                           const ChannelOptions& opts) {
  BistaticTerm t;
  t.angles = angles_from_positions(p_k, p_h);
  t.d1 = p_k.norm();
  t.d2 = distance(p_h, p_k);
  t.amp = path_amplitude(t.d1, rf.wavelength_m, opts.amplitude_law) *
          path_amplitude(t.d2, rf.wavelength_m, opts.amplitude_law);
  const double d_total = t.d1 + t.d2;
  t.gain = t.amp * std::exp(kJ * omega_k) *
           std::exp(-kJ * (2.0 * M_PI * d_total / rf.wavelength_m));
  t.a_h = upa_steering(t.angles.psi_k, t.angles.phi_k, layout);
  t.a_bs = ula_steering(t.angles.theta_k, layout.n_tx, layout.element_spacing);
  return t;
}

}  // namespace

Eigen::MatrixXcd bistatic_channel_single(const Position3& p_k, double omega_k,
                                         const Position3& p_h, const RfConstants& rf,
                                         const ArrayLayout& layout,
                                         const ChannelOptions& opts) {
  const BistaticTerm t = bistatic_term(p_k, omega_k, p_h, rf, layout, opts);
  return t.gain * (t.a_h * t.a_bs.adjoint());
}

Eigen::MatrixXcd bistatic_channel(const TargetPositions& eta, const OmegaPair& omega,
                                  const Position3& p_h, const RfConstants& rf,
                                  const ArrayLayout& layout, const ChannelOptions& opts) {
  return bistatic_channel_single(eta.ue, omega.ue, p_h, rf, layout, opts) +
         bistatic_channel_single(eta.eve, omega.eve, p_h, rf, layout, opts);
}

Eigen::RowVectorXcd hris_user_channel(const Position3& p_k, const Position3& p_h,
                                      const RfConstants& rf, const ArrayLayout& layout,
                                      const ChannelOptions& opts) {
  const AngleSet angles = angles_from_positions(p_k, p_h);
  const double d = distance(p_h, p_k);
  const double amp = path_amplitude(d, rf.wavelength_m, opts.amplitude_law);
  const std::complex<double> gain = amp * std::exp(-kJ * (2.0 * M_PI * d / rf.wavelength_m));
  return gain * upa_steering(angles.psi_k, angles.phi_k, layout).adjoint();
}

Eigen::RowVectorXcd effective_channel(const HrisState& state, const ChannelSet& channels,
                                      Node node, const ChannelOptions& opts) {
  const Eigen::VectorXcd& h_dl = node == Node::kUe ? channels.h_dl_ue : channels.h_dl_eve;
  const Eigen::RowVectorXcd& h_hu = node == Node::kUe ? channels.h_hu_ue : channels.h_hu_eve;
  if (h_hu.cols() != channels.h_bh.rows())
    throw std::invalid_argument("effective_channel: dimension mismatch");
  const double gain = reflection_gain(state.rho, opts.power_split);
  Eigen::RowVectorXcd reflected =
      (h_hu.transpose().array() * state.reflection().array()).matrix().transpose() *
      channels.h_bh;
  return h_dl.transpose() + gain * reflected;
}

std::array<Eigen::MatrixXcd, 3> bistatic_derivatives_single(
    const Position3& p_k, double omega_k, const Position3& p_h,
    const RfConstants& rf, const ArrayLayout& layout, const ChannelOptions& opts) {
  const BistaticTerm t = bistatic_term(p_k, omega_k, p_h, rf, layout, opts);
  const Eigen::Matrix3d t_ang = angle_jacobian_single(p_k, p_h);

  // d d1 / dp and d d2 / dp
  const double inv_d1 = 1.0 / t.d1;
  const double inv_d2 = 1.0 / t.d2;
  const Eigen::Vector3d grad_d1(p_k.x * inv_d1, p_k.y * inv_d1, p_k.z * inv_d1);
  const Eigen::Vector3d grad_d2((p_k.x - p_h.x) * inv_d2, (p_k.y - p_h.y) * inv_d2,
                                (p_k.z - p_h.z) * inv_d2);

  // log-amplitude gradient: amp ~ 1/(d1^a d2^a) with a = 1 or 2
  const double decay = opts.amplitude_law == AmplitudeLaw::kInverseSquare ? 2.0 : 1.0;
  const Eigen::Vector3d grad_log_amp = -decay * (grad_d1 * inv_d1 + grad_d2 * inv_d2);

  const Eigen::MatrixXcd outer = t.a_h * t.a_bs.adjoint();
  const Eigen::MatrixXcd outer_dpsi =
      upa_steering_dpsi(t.angles.psi_k, t.angles.phi_k, layout) * t.a_bs.adjoint();
  const Eigen::MatrixXcd outer_dphi =
      upa_steering_dphi(t.angles.psi_k, t.angles.phi_k, layout) * t.a_bs.adjoint();
  const Eigen::MatrixXcd outer_dtheta =
      t.a_h * ula_steering_dtheta(t.angles.theta_k, layout.n_tx, layout.element_spacing).adjoint();

  const double phase_rate = -2.0 * M_PI / rf.wavelength_m;

  std::array<Eigen::MatrixXcd, 3> out;
  for (int c = 0; c < 3; ++c) {
    const std::complex<double> scalar_part =
        grad_log_amp(c) + kJ * (phase_rate * (grad_d1(c) + grad_d2(c)));
    out[c] = t.gain * (scalar_part * outer + t_ang(0, c) * outer_dtheta +
                       t_ang(1, c) * outer_dpsi + t_ang(2, c) * outer_dphi);
  }
  return out;
}

std::array<Eigen::MatrixXcd, 6> bistatic_derivatives(
    const TargetPositions& eta, const OmegaPair& omega, const Position3& p_h,
    const RfConstants& rf, const ArrayLayout& layout, const ChannelOptions& opts) {
  const auto ue = bistatic_derivatives_single(eta.ue, omega.ue, p_h, rf, layout, opts);
  const auto eve = bistatic_derivatives_single(eta.eve, omega.eve, p_h, rf, layout, opts);
  return {ue[0], ue[1], ue[2], eve[0], eve[1], eve[2]};
}

ChannelSet build_channel_set(const TargetPositions& eta, const OmegaPair& omega,
                             const Position3& p_h, const RfConstants& rf,
                             const ArrayLayout& layout, const ChannelOptions& opts) {
  ChannelSet cs;
  const AngleSet ang_ue = angles_from_positions(eta.ue, p_h);
  const AngleSet ang_eve = angles_from_positions(eta.eve, p_h);
  cs.h_dl_ue = dl_channel(eta.ue, ang_ue.theta_k, rf, layout, opts);
  cs.h_dl_eve = dl_channel(eta.eve, ang_eve.theta_k, rf, layout, opts);
  cs.h_bh = bs_hris_channel(p_h, ang_ue, rf, layout, opts);
  cs.h_bistatic = bistatic_channel(eta, omega, p_h, rf, layout, opts);
  cs.h_hu_ue = hris_user_channel(eta.ue, p_h, rf, layout, opts);
  cs.h_hu_eve = hris_user_channel(eta.eve, p_h, rf, layout, opts);
  cs.omega = omega;
  return cs;
}

}  // namespace isac
