#pragma once

namespace exactfw {

/// Tolerance ladder shared by every module. Structural checks are the
/// tightest, identity checks next, and the gap threshold is relative to the
/// spectral norm of the operator whose sign is taken.
struct Tolerances {
  double tol_struct = 1e-12;
  double tol_identity = 1e-10;
  double gap_tol = 1e-8;
  double eps_clamp = 1e-10;
  // Looser bounds for quantities that pass through two matrix functions.
  double tol_forms = 1e-9;
  double tol_spectrum = 1e-9;
};

} // namespace exactfw
