#include "isac/geometry.hpp"

#include <cmath>
#include <complex>

namespace isac {

namespace {
constexpr std::complex<double> kJ{0.0, 1.0};

void require(bool ok, const char* what) {
  if (!ok) throw DegenerateGeometryError(what);
}
}  // namespace

double Position3::norm() const { return std::sqrt(x * x + y * y + z * z); }
double Position3::xy_norm() const { return std::hypot(x, y); }
bool Position3::finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
}

double distance(const Position3& a, const Position3& b) { return (a - b).norm(); }

void ArrayLayout::validate() const {
  if (n_tx < 1 || n_rf < 1 || n_e < 1)
    throw std::invalid_argument("ArrayLayout: n_tx, n_rf, n_e must be positive");
  if (!(element_spacing > 0.0))
    throw std::invalid_argument("ArrayLayout: element_spacing must be positive");
}

AngleSet angles_from_positions(const Position3& p_k, const Position3& p_h) {
  require(p_k.finite() && p_h.finite(), "angles_from_positions: non-finite position");
  require(p_k.norm() > kMinDistanceM, "angles_from_positions: node at the BS origin");
  require(p_h.norm() > kMinDistanceM, "angles_from_positions: HRIS at the BS origin");
  require(distance(p_k, p_h) > kMinDistanceM, "angles_from_positions: node at the HRIS");
  // atan2(0,0) has no bearing; reject nodes on the BS or HRIS vertical axis.
  require(p_k.xy_norm() > kMinDistanceM, "angles_from_positions: node on the BS z-axis");
  require(p_h.xy_norm() > kMinDistanceM, "angles_from_positions: HRIS on the BS z-axis");

  AngleSet a;
  a.r_k = std::hypot(p_h.x - p_k.x, p_h.y - p_k.y);
  a.r_h = p_h.xy_norm();
  require(a.r_k > kMinDistanceM, "angles_from_positions: node on the HRIS z-axis");

  a.theta_k = std::atan2(p_k.y, p_k.x);
  a.phi_k = std::atan2(p_k.y - p_h.y, p_k.x - p_h.x);
  a.psi_k = std::atan2(p_k.z - p_h.z, a.r_k);
  a.phi_br = std::atan2(p_h.z, a.r_h);
  a.theta_br = std::atan2(p_h.y, p_h.x);
  a.psi_br = a.theta_br;
  return a;
}

Eigen::VectorXcd ula_steering(double theta, int n, double spacing) {
  if (n < 1) throw std::invalid_argument("ula_steering: n must be >= 1");
  const double step = 2.0 * M_PI * spacing * std::sin(theta);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::VectorXcd v(n);
  for (int m = 0; m < n; ++m) v(m) = scale * std::exp(kJ * (step * m));
  return v;
}

Eigen::VectorXcd ula_steering_dtheta(double theta, int n, double spacing) {
  if (n < 1) throw std::invalid_argument("ula_steering_dtheta: n must be >= 1");
  const double step = 2.0 * M_PI * spacing * std::sin(theta);
  const double dstep = 2.0 * M_PI * spacing * std::cos(theta);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::VectorXcd v(n);
  for (int m = 0; m < n; ++m) v(m) = scale * kJ * (dstep * m) * std::exp(kJ * (step * m));
  return v;
}

Eigen::VectorXcd upa_steering(double psi, double phi, const ArrayLayout& layout) {
  layout.validate();
  const Eigen::VectorXcd rows = ula_steering(phi, layout.n_rf, layout.element_spacing);
  const Eigen::VectorXcd cols = ula_steering(psi, layout.n_e, layout.element_spacing);
  Eigen::VectorXcd v(layout.n_h());
  for (int l = 0; l < layout.n_rf; ++l)
    v.segment(l * layout.n_e, layout.n_e) = rows(l) * cols;
  return v;
}

Eigen::VectorXcd upa_steering_dpsi(double psi, double phi, const ArrayLayout& layout) {
  layout.validate();
  const Eigen::VectorXcd rows = ula_steering(phi, layout.n_rf, layout.element_spacing);
  const Eigen::VectorXcd dcols = ula_steering_dtheta(psi, layout.n_e, layout.element_spacing);
  Eigen::VectorXcd v(layout.n_h());
  for (int l = 0; l < layout.n_rf; ++l)
    v.segment(l * layout.n_e, layout.n_e) = rows(l) * dcols;
  return v;
}

Eigen::VectorXcd upa_steering_dphi(double psi, double phi, const ArrayLayout& layout) {
  layout.validate();
  const Eigen::VectorXcd drows = ula_steering_dtheta(phi, layout.n_rf, layout.element_spacing);
  const Eigen::VectorXcd cols = ula_steering(psi, layout.n_e, layout.element_spacing);
  Eigen::VectorXcd v(layout.n_h());
  for (int l = 0; l < layout.n_rf; ++l)
    v.segment(l * layout.n_e, layout.n_e) = drows(l) * cols;
  return v;
}

Eigen::Matrix3d angle_jacobian_single(const Position3& p_k, const Position3& p_h) {
  angles_from_positions(p_k, p_h);  // revalidates the preconditions

  const double rho0_sq = p_k.x * p_k.x + p_k.y * p_k.y;
  const double dx = p_k.x - p_h.x;
  const double dy = p_k.y - p_h.y;
  const double u = p_k.z - p_h.z;
  const double r = std::hypot(dx, dy);
  const double rho1_sq = dx * dx + dy * dy;
  const double q = u * u + r * r;

  require(rho0_sq > kMinDistanceM * kMinDistanceM, "angle_jacobian: theta undefined");
  require(r > kMinDistanceM, "angle_jacobian: r_k = 0");

  Eigen::Matrix3d t;
  // rows ordered as (theta, psi, phi)
  t(0, 0) = -p_k.y / rho0_sq;
  t(0, 1) = p_k.x / rho0_sq;
  t(0, 2) = 0.0;
  t(1, 0) = -u * dx / (r * q);
  t(1, 1) = -u * dy / (r * q);
  t(1, 2) = r / q;
  t(2, 0) = -dy / rho1_sq;
  t(2, 1) = dx / rho1_sq;
  t(2, 2) = 0.0;
  return t;
}

Mat6 angle_jacobian(const Position3& p_ue, const Position3& p_eve, const Position3& p_h) {
  Mat6 t = Mat6::Zero();
  t.block<3, 3>(0, 0) = angle_jacobian_single(p_ue, p_h);
  t.block<3, 3>(3, 3) = angle_jacobian_single(p_eve, p_h);
  return t;
}

}  // namespace isac
