#include "pff/constitutive.hpp"

#include <cmath>
#include <stdexcept>

namespace pff {

void MaterialParams::validate() const {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (!(bulk() > 0.0)) throw std::invalid_argument("bulk modulus must be positive");
  if (!(g_c > 0.0)) throw std::invalid_argument("g_c must be positive");
  if (!(length_l > 0.0)) throw std::invalid_argument("length_l must be positive");
  if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in [0, 1)");
  if (!(tol_ir > 0.0)) throw std::invalid_argument("tol_ir must be positive");
}

StrainState StrainState::from_voigt(const Voigt& eps) {
  StrainState s;
  s.eps = eps;
  s.tr_eps = eps[0] + eps[1] + eps[2];
  const double m = s.tr_eps / 3.0;
  const double half_gamma = 0.5 * eps[3];
  s.dev_dot_dev = (eps[0] - m) * (eps[0] - m) + (eps[1] - m) * (eps[1] - m) +
                  (eps[2] - m) * (eps[2] - m) + 2.0 * half_gamma * half_gamma;
  return s;
}

double macaulay(double x, MacaulaySign sign) {
  return sign == MacaulaySign::plus ? 0.5 * (x + std::abs(x)) : 0.5 * (x - std::abs(x));
}

Degradation degradation(double d, double eta) {
  const double one_minus = 1.0 - d;
  return {one_minus * one_minus + eta, -2.0 * one_minus};
}

double active_energy(double tr_plus, double dev_dot_dev, const MaterialParams& params) {
  return params.mu * dev_dot_dev + 0.5 * params.bulk() * tr_plus * tr_plus;
}

SplitEnergy split_energies(const StrainState& strain, const MaterialParams& params) {
  const double tp = macaulay(strain.tr_eps, MacaulaySign::plus);
  const double tm = macaulay(strain.tr_eps, MacaulaySign::minus);
  return {active_energy(tp, strain.dev_dot_dev, params), 0.5 * params.bulk() * tm * tm};
}

namespace {

/// Tensor deviator in stress-like Voigt layout (shear component as eps_xy).
Voigt deviator(const StrainState& s) {
  const double m = s.tr_eps / 3.0;
  return {s.eps[0] - m, s.eps[1] - m, s.eps[2] - m, 0.5 * s.eps[3]};
}

const Voigt kIdentity(1.0, 1.0, 1.0, 0.0);

}  // namespace

Voigt stress(const StrainState& strain, double d, const MaterialParams& params) {
  const double k = params.bulk();
  const double g = degradation(d, params.eta).g;
  const double tp = macaulay(strain.tr_eps, MacaulaySign::plus);
  const double tm = macaulay(strain.tr_eps, MacaulaySign::minus);
  return g * (2.0 * params.mu * deviator(strain) + k * tp * kIdentity) + k * tm * kIdentity;
}

VoigtMatrix tangent_uu(const StrainState& strain, double d, const MaterialParams& params) {
  const double k = params.bulk();
  const double mu = params.mu;
  const double g = degradation(d, params.eta).g;
  const bool active = strain.tr_eps >= 0.0;

  // Deviatoric projector for engineering-shear strain input.
  VoigtMatrix dev = VoigtMatrix::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) dev(i, j) = (i == j ? 1.0 : 0.0) - 1.0 / 3.0;
  }
  dev(3, 3) = 0.5;

  VoigtMatrix vol = VoigtMatrix::Zero();
  vol.topLeftCorner<3, 3>().setOnes();

  const double k_vol = active ? g * k : k;
  return g * 2.0 * mu * dev + k_vol * vol;
}

Voigt coupling_dstress_dd(const StrainState& strain, double d, const MaterialParams& params) {
  const double tp = macaulay(strain.tr_eps, MacaulaySign::plus);
  return -2.0 * (1.0 - d) * (2.0 * params.mu * deviator(strain) + params.bulk() * tp * kIdentity);
}

}  // namespace pff
