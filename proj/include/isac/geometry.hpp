#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace isac {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

/// Raised when a node coincides with (or sits numerically on top of) the
/// reference point of an angle computation.
class DegenerateGeometryError : public std::runtime_error {
 public:
  explicit DegenerateGeometryError(const std::string& what)
      : std::runtime_error(what) {}
};

// Distances below this are treated as coincident points (meters).
inline constexpr double kMinDistanceM = 1e-9;

struct Position3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
  double xy_norm() const;
  Position3 operator-(const Position3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Position3 operator+(const Position3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  bool finite() const;
};

double distance(const Position3& a, const Position3& b);

/// BS ULA with n_tx elements; HRIS UPA with n_rf columns of n_e elements each.
struct ArrayLayout {
  int n_tx = 1;
  int n_rf = 1;
  int n_e = 1;
  double element_spacing = 0.5;  // in wavelengths

  int n_h() const { return n_rf * n_e; }
  void validate() const;  // throws std::invalid_argument
};

/// All angles of the unnumbered block in the system model, radians in (-pi, pi].
struct AngleSet {
  double theta_k = 0.0;  // azimuth AoD at the BS
  double phi_k = 0.0;    // azimuth AoA at the HRIS
  double psi_k = 0.0;    // elevation AoA at the HRIS
  double theta_br = 0.0;
  double psi_br = 0.0;
  double phi_br = 0.0;
  double r_k = 0.0;  // xy distance HRIS->node, meters
  double r_h = 0.0;  // xy distance BS->HRIS, meters
};

AngleSet angles_from_positions(const Position3& p_k, const Position3& p_h);

/// Unit-norm ULA steering vector, entries exp(+j*2*pi*spacing*m*sin(theta))/sqrt(n).
Eigen::VectorXcd ula_steering(double theta, int n, double spacing = 0.5);
Eigen::VectorXcd ula_steering_dtheta(double theta, int n, double spacing = 0.5);

/// HRIS UPA steering: kron(rows(phi) in C^{n_rf}, cols(psi) in C^{n_e}).
Eigen::VectorXcd upa_steering(double psi, double phi, const ArrayLayout& layout);
Eigen::VectorXcd upa_steering_dpsi(double psi, double phi, const ArrayLayout& layout);
Eigen::VectorXcd upa_steering_dphi(double psi, double phi, const ArrayLayout& layout);

/// 3x3 Jacobian of (theta_k, psi_k, phi_k) with respect to p_k, HRIS at p_h.
Eigen::Matrix3d angle_jacobian_single(const Position3& p_k, const Position3& p_h);

/// Block-diagonal 6x6 Jacobian for [theta_UE, psi_UE, phi_UE, theta_Eve, psi_Eve, phi_Eve]
/// with respect to [p_UE; p_Eve]; cross blocks exactly zero.
Mat6 angle_jacobian(const Position3& p_ue, const Position3& p_eve, const Position3& p_h);

}  // namespace isac
