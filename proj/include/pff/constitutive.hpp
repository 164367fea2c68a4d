#pragma once

#include <Eigen/Core>

namespace pff {

enum class AtModel { AT1, AT2 };

/// Material constants for the volumetric-deviatoric split model. Units are
/// MPa for moduli, N/mm for the fracture toughness and mm for the length
/// scale.
struct MaterialParams {
  double mu = 8.077e4;
  double lambda = 2.019e5;
  double g_c = 2.7;
  double length_l = 0.01;
  double eta = 1e-6;
  double tol_ir = 0.01;
  AtModel at_model = AtModel::AT1;

  /// Bulk modulus, k = lambda + 2 mu / 3.
  [[nodiscard]] double bulk() const { return lambda + 2.0 * mu / 3.0; }
  [[nodiscard]] double c_w() const { return at_model == AtModel::AT1 ? 8.0 / 3.0 : 2.0; }
  /// Irreversibility penalty 27 Gc / (64 l tol_ir^2).
  [[nodiscard]] double gamma() const {
    return 27.0 * g_c / (64.0 * length_l * tol_ir * tol_ir);
  }
  /// Elastic-limit energy Gc / (c_w l) used by the softening gate.
  [[nodiscard]] double psi_crit() const { return g_c / (c_w() * length_l); }

  /// Throws std::invalid_argument when a constant is out of range.
  void validate() const;
};

/// Plane-strain Voigt vectors. Strain holds (xx, yy, zz, gamma_xy) with
/// engineering shear; stress holds (xx, yy, zz, xy). The zz strain is zero in
/// plane strain but kept so the trace is the full 3D trace.
using Voigt = Eigen::Vector4d;
using VoigtMatrix = Eigen::Matrix4d;

struct StrainState {
  Voigt eps = Voigt::Zero();
  double tr_eps = 0.0;
  double dev_dot_dev = 0.0;

  static StrainState from_voigt(const Voigt& eps);
  static StrainState plane(double xx, double yy, double gamma_xy) {
    return from_voigt(Voigt(xx, yy, 0.0, gamma_xy));
  }
};

enum class MacaulaySign { plus, minus };

double macaulay(double x, MacaulaySign sign);

struct Degradation {
  double g = 1.0;
  double dg_dd = 0.0;
};

/// g(d) = (1 - d)^2 + eta. No clamping: Newton iterates may leave [0, 1].
Degradation degradation(double d, double eta);

struct SplitEnergy {
  double psi_plus = 0.0;
  double psi_minus = 0.0;
};

SplitEnergy split_energies(const StrainState& strain, const MaterialParams& params);

/// Active energy from the two strain scalars <tr eps>_+ and eps_dev : eps_dev.
double active_energy(double tr_plus, double dev_dot_dev, const MaterialParams& params);

Voigt stress(const StrainState& strain, double d, const MaterialParams& params);

/// d sigma / d eps at fixed d. The "+" volumetric branch is used when
/// tr eps >= 0.
VoigtMatrix tangent_uu(const StrainState& strain, double d, const MaterialParams& params);

/// d sigma / d d = -2 (1 - d) [2 mu eps_dev + k <tr eps>_+ I].
Voigt coupling_dstress_dd(const StrainState& strain, double d, const MaterialParams& params);

}  // namespace pff
