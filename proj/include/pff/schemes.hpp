#pragma once

#include <string_view>

#include "pff/assembly.hpp"
#include "pff/constitutive.hpp"
#include "pff/linsolve.hpp"

namespace pff {

/// ST is the plain staggered scheme. S1 fixes the first stress invariant,
/// S2 the second deviatoric invariant and S3 both.
enum class SchemeKind { ST, S1, S2, S3 };

std::string_view to_string(SchemeKind scheme);
/// Accepts "ST", "S1", "S2", "S3" (case-insensitive). Throws on anything else.
SchemeKind parse_scheme(std::string_view text);

struct SolverConfig {
  double tol_nr = 1e-7;
  double tol_st = 1e-6;
  int max_nr = 50;
  int max_stag = 2000;
  double d_cap = 0.95;
  LinearSolverKind linear = LinearSolverKind::direct;
  Exec exec = Exec::parallel;

  void validate() const;
};

/// Softening gate: psi_plus above the elastic limit and above its history
/// maximum, and damage below the cap.
bool gate_open(const GaussPointState& gp, double d, const MaterialParams& params, double d_cap);

/// Scalar factor of the extra N^T N stiffness at one Gauss point, or 0 when
/// the scheme is ST or the gate is closed.
double extra_stiffness(SchemeKind scheme, const GaussPointState& gp, double d,
                       const MaterialParams& params, double d_cap = 0.95);

/// Half-step prediction of the strain scalars for a damage increment
/// delta_d. Non-positive increments leave the state unchanged. psi_max is
/// never touched.
GaussPointState update_active_energy(SchemeKind scheme, const GaussPointState& gp, double d,
                                     double delta_d, const MaterialParams& params);

}  // namespace pff
