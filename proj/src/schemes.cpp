#include "pff/schemes.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

namespace pff {

std::string_view to_string(SchemeKind scheme) {
  switch (scheme) {
    case SchemeKind::ST: return "ST";
    case SchemeKind::S1: return "S1";
    case SchemeKind::S2: return "S2";
    case SchemeKind::S3: return "S3";
  }
  return "?";
}

SchemeKind parse_scheme(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "ST") return SchemeKind::ST;
  if (upper == "S1") return SchemeKind::S1;
  if (upper == "S2") return SchemeKind::S2;
  if (upper == "S3") return SchemeKind::S3;
  throw std::invalid_argument("unknown scheme '" + std::string(text) + "'");
}

void SolverConfig::validate() const {
  if (!(tol_nr > 0.0)) throw std::invalid_argument("tol_nr must be positive");
  if (!(tol_st > tol_nr)) throw std::invalid_argument("tol_st must exceed tol_nr");
  if (max_nr < 1) throw std::invalid_argument("max_nr must be at least 1");
  if (max_stag < 1) throw std::invalid_argument("max_stag must be at least 1");
  if (!(d_cap > 0.0 && d_cap < 1.0)) throw std::invalid_argument("d_cap must lie in (0, 1)");
}

bool gate_open(const GaussPointState& gp, double d, const MaterialParams& params, double d_cap) {
  return gp.psi_plus > params.psi_crit() && gp.psi_plus > gp.psi_max && d < d_cap;
}

double extra_stiffness(SchemeKind scheme, const GaussPointState& gp, double d,
                       const MaterialParams& params, double d_cap) {
  if (scheme == SchemeKind::ST || !gate_open(gp, d, params, d_cap)) return 0.0;
  const double vol = params.bulk() * gp.tr_plus * gp.tr_plus;
  const double dev = 2.0 * params.mu * gp.dev_dot_dev;
  const double one_minus = 1.0 - d;
  const double factor = -4.0 * one_minus * one_minus / degradation(d, params.eta).g;
  // Summed per part so that S3 equals S1 + S2 bit for bit.
  double k = 0.0;
  if (scheme != SchemeKind::S2) k += factor * vol;
  if (scheme != SchemeKind::S1) k += factor * dev;
  return k;
}

GaussPointState update_active_energy(SchemeKind scheme, const GaussPointState& gp, double d,
                                     double delta_d, const MaterialParams& params) {
  if (scheme == SchemeKind::ST || !(delta_d > 0.0)) return gp;
  const double g = degradation(d, params.eta).g;
  const double ratio = (1.0 - d) / g;
  GaussPointState out = gp;
  if (scheme != SchemeKind::S2) out.tr_plus = gp.tr_plus * (1.0 + 2.0 * ratio * delta_d);
  if (scheme != SchemeKind::S1) {
    out.dev_dot_dev =
        gp.dev_dot_dev * (1.0 + 4.0 * (ratio * delta_d + ratio * ratio * delta_d * delta_d));
  }
  out.psi_plus = active_energy(out.tr_plus, out.dev_dot_dev, params);
  return out;
}

}  // namespace pff
