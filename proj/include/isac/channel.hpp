#pragma once

#include <array>
#include <Eigen/Dense>

#include "isac/geometry.hpp"

namespace isac {

struct RfConstants {
  double carrier_hz = 0.0;
  double wavelength_m = 0.0;
  double noise_power_w = 0.0;  // sigma^2, linear watts
  int block_len = 1;           // T
  double p_max_w = 0.0;        // linear watts

  static constexpr double kSpeedOfLight = 299792458.0;
  static RfConstants from_carrier(double carrier_hz, double noise_power_w,
                                  int block_len, double p_max_w);
  void validate() const;  // throws std::invalid_argument
};

/// The paper's amplitude law decays as 1/d^2 in amplitude; a standard 1/d
/// mode is available behind the config switch, default off.
enum class AmplitudeLaw { kInverseSquare, kInverse };

/// Power split at the hybrid meta-atoms: sensing x rho, reflection x (1-rho)
/// as written, or the energy-conserving sqrt convention (default off).
enum class PowerSplitConvention { kLinear, kSqrt };

struct ChannelOptions {
  AmplitudeLaw amplitude_law = AmplitudeLaw::kInverseSquare;
  PowerSplitConvention power_split = PowerSplitConvention::kLinear;
};

double path_amplitude(double dist, double wavelength, AmplitudeLaw law);
double sensing_gain(double rho, PowerSplitConvention split);     // multiplies the absorbed branch
double reflection_gain(double rho, PowerSplitConvention split);  // multiplies the reflected branch

struct TargetPositions {
  Position3 ue;
  Position3 eve;
};

struct OmegaPair {
  double ue = 0.0;
  double eve = 0.0;
};

enum class Node { kUe, kEve };

/// Absorption coefficient, reflection phases and the block-sparse analog combiner.
struct HrisState {
  double rho = 0.5;
  Eigen::VectorXd phases_upsilon;  // N_H, radians
  Eigen::MatrixXcd combiner;       // N_H x N_RF, zero off the diagonal blocks

  Eigen::VectorXcd reflection() const;  // exp(j*upsilon)
  void validate(const ArrayLayout& layout) const;

  /// upsilon = 0 and all-ones combiner columns.
  static HrisState uniform(const ArrayLayout& layout, double rho);
};

/// Rebuild the block-sparse combiner from per-column unit-modulus phase vectors.
Eigen::MatrixXcd combiner_from_column_phases(const std::vector<Eigen::VectorXd>& col_phases,
                                             const ArrayLayout& layout);

struct ChannelSet {
  Eigen::VectorXcd h_dl_ue, h_dl_eve;      // N_T
  Eigen::MatrixXcd h_bh;                   // N_H x N_T
  Eigen::MatrixXcd h_bistatic;             // N_H x N_T
  Eigen::RowVectorXcd h_hu_ue, h_hu_eve;   // 1 x N_H
  OmegaPair omega;
};

Eigen::VectorXcd dl_channel(const Position3& p_k, double theta_k,
                            const RfConstants& rf, const ArrayLayout& layout,
                            const ChannelOptions& opts = {});

Eigen::MatrixXcd bs_hris_channel(const Position3& p_h, const AngleSet& angles,
                                 const RfConstants& rf, const ArrayLayout& layout,
                                 const ChannelOptions& opts = {});

/// Single-bounce reflection of one target, as one summand of the bistatic channel.
Eigen::MatrixXcd bistatic_channel_single(const Position3& p_k, double omega_k,
                                         const Position3& p_h, const RfConstants& rf,
                                         const ArrayLayout& layout,
                                         const ChannelOptions& opts = {});

Eigen::MatrixXcd bistatic_channel(const TargetPositions& eta, const OmegaPair& omega,
                                  const Position3& p_h, const RfConstants& rf,
                                  const ArrayLayout& layout,
                                  const ChannelOptions& opts = {});

Eigen::RowVectorXcd hris_user_channel(const Position3& p_k, const Position3& p_h,
                                      const RfConstants& rf, const ArrayLayout& layout,
                                      const ChannelOptions& opts = {});

/// h_DL,k + (1-rho) h_HU,k diag(exp(j*upsilon)) H_BH, a 1 x N_T row vector.
Eigen::RowVectorXcd effective_channel(const HrisState& state, const ChannelSet& channels,
                                      Node node, const ChannelOptions& opts = {});

/// Analytic d H_bistatic / d p for the three coordinates of one target.
std::array<Eigen::MatrixXcd, 3> bistatic_derivatives_single(
    const Position3& p_k, double omega_k, const Position3& p_h,
    const RfConstants& rf, const ArrayLayout& layout, const ChannelOptions& opts = {});

/// All six position derivatives of the two-target bistatic channel, ordered
/// [x_UE, y_UE, z_UE, x_Eve, y_Eve, z_Eve].
std::array<Eigen::MatrixXcd, 6> bistatic_derivatives(
    const TargetPositions& eta, const OmegaPair& omega, const Position3& p_h,
    const RfConstants& rf, const ArrayLayout& layout, const ChannelOptions& opts = {});

ChannelSet build_channel_set(const TargetPositions& eta, const OmegaPair& omega,
                             const Position3& p_h, const RfConstants& rf,
                             const ArrayLayout& layout, const ChannelOptions& opts = {});

}  // namespace isac
