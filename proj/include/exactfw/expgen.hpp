#pragma once

// Exponential generator S of the exact transformation, U = exp(i S).
//
// With X = i (beta lambda - lambda beta) / 2 and C = (beta lambda + lambda beta) / 2,
//   sin 2S = -X,   cos 2S = C,   2 + beta lambda + lambda beta = 4 cos^2 S.
// Two closed forms follow:
//   form A:  S = -arcsin( D^(-1/2) i (beta lambda - lambda beta) D^(-1/2) ),
//            D = 2 sqrt(2 + beta lambda + lambda beta), argument = -sin S;
//   form B:  S = -arcsin(X) / 2.
// Form A is exact wherever U exists (|S| < pi/2). Form B uses the principal
// arcsin of sin 2S and is exact only while C >= 0, i.e. |2S| <= pi/2. Form A
// is canonical; form_agreement_defect measures form B against it.
//
// The beta-factored form S = -(beta / 2) arcsin( i (lambda - beta lambda beta) / 2 )
// is evaluated literally. Because Y = i(lambda - beta lambda beta)/2 is odd,
// (beta Y)^(2k+1) = (-1)^k beta Y^(2k+1), and the literal expression equals
// -asinh(X)/2 rather than -arcsin(X)/2. Its disagreement is reported as
// `beta_factored_literal_defect`. The series-consistent variant
// -(i beta / 2) arcsin((lambda - beta lambda beta) / 2) is reported as
// `beta_factored_corrected_defect`.

#include <exactfw/blockop.hpp>
#include <exactfw/eriksen.hpp>
#include <exactfw/matfun.hpp>
#include <exactfw/tolerances.hpp>

#include <cmath>

namespace exactfw {

struct GeneratorResult {
  BlockOperator s;        // canonical, = s_form_a
  BlockOperator s_form_a;
  BlockOperator s_form_b;
  BlockOperator s_beta_factored;           // beta-factored form, literal
  BlockOperator s_beta_factored_corrected; // beta-factored form, series-consistent
  Diagnostics diagnostics;
  Diagnostics informational;
  bool clamped = false;
};

namespace detail {

// Symmetrize an operator that is metric-self-adjoint by construction.
inline BlockOperator symmetrize(const BlockOperator &a, Metric metric, const BetaMatrix &beta) {
  return 0.5 * (a + adjoint_m(a, metric, beta));
}

} // namespace detail

inline GeneratorResult generator_from_lambda(const BlockOperator &lambda, const BetaMatrix &beta,
                                             Metric metric, const Tolerances &tol = {}) {
  beta.require(lambda);
  if (identity_defect(lambda * lambda) > 1e-8)
    throw Error(ErrorKind::Structural, "lambda is not an involution (lambda^2 != 1)");

  const Complex i(0.0, 1.0);
  const BlockOperator one = BlockOperator::identity(lambda.shape());
  const BlockOperator bl = beta.left(lambda);
  const BlockOperator lb = beta.right(lambda);
  const BlockOperator diff = bl - lb;

  GeneratorResult g;

  // Form B: the argument is exactly metric-self-adjoint.
  const BlockOperator x_raw = (0.5 * i) * diff;
  const BlockOperator x = detail::symmetrize(x_raw, metric, beta);
  g.informational["argument_self_adjoint_defect"] = relative_defect(x_raw - x);
  bool clamped_b = false;
  g.s_form_b = -0.5 * arcsin_m(x, metric, tol.eps_clamp, tol.tol_struct, &clamped_b);

  // Form A: D^(-1/2) i(beta lambda - lambda beta) D^(-1/2), D = 2 sqrt(2 + bl + lb).
  BlockOperator sum = 2.0 * one + bl + lb;
  sum = detail::symmetrize(sum, metric, beta);
  const auto sum_decomp = decompose(sum, metric, tol.tol_struct);
  for (Eigen::Index k = 0; k < sum_decomp.eigenvalues.size(); ++k)
    if (sum_decomp.eigenvalues(k).real() <= 1e-12 * detail::max_abs(sum_decomp.eigenvalues))
      throw Error(ErrorKind::EriksenDegenerate, "2 + beta lambda + lambda beta is singular");
  const BlockOperator d_inv_half = sum.with(sum_decomp.apply(
      [](Complex z) { return Complex(1.0 / std::sqrt(2.0 * std::sqrt(z.real())), 0.0); }));
  BlockOperator arg_a = d_inv_half * (i * diff) * d_inv_half;
  arg_a = detail::symmetrize(arg_a, metric, beta);
  bool clamped_a = false;
  g.s_form_a = -1.0 * arcsin_m(arg_a, metric, tol.eps_clamp, tol.tol_struct, &clamped_a);
  g.clamped = clamped_a || clamped_b;
  g.s = g.s_form_a;

  // beta-factored form, literal: arcsin of the odd operator Y = i(lambda - beta lambda beta)/2,
  // evaluated in the eigenbasis of its Hermitian companion -iY.
  const BlockOperator y = (0.5 * i) * (lambda - beta.sandwich(lambda));
  BlockOperator arcsin_y;
  if (metric == Metric::Hermitian) {
    BlockOperator companion = (-1.0 * i) * y;
    companion = companion.with(0.5 * (companion.matrix() + companion.matrix().adjoint()));
    const auto cd = decompose(companion, Metric::Hermitian, tol.tol_struct);
    arcsin_y = y.with(cd.apply([&](Complex z) { return std::asin(i * z.real()); }));
  } else {
    const auto yd = detail::decompose_general(y.matrix(), false, std::max(spectral_norm(y), 1.0));
    arcsin_y = y.with(yd.apply([](Complex z) { return std::asin(z); }));
  }
  g.s_beta_factored = -0.5 * beta.left(arcsin_y);

  // beta-factored form with i outside the arcsin.
  const BlockOperator y_real = detail::symmetrize(0.5 * (lambda - beta.sandwich(lambda)), metric, beta);
  g.s_beta_factored_corrected =
      (-0.5 * i) * beta.left(arcsin_m(y_real, metric, tol.eps_clamp, tol.tol_struct));

  const BlockOperator &s = g.s;
  g.diagnostics["oddness_defect"] = relative_defect(beta.left(s) + beta.right(s));
  g.diagnostics["hermiticity_defect"] = relative_defect(s - adjoint_m(s, metric, beta));
  g.diagnostics["form_agreement_defect"] = relative_defect(g.s_form_a - g.s_form_b);
  g.diagnostics["form_a_commutator"] = relative_defect(commutator(i * diff, sum));
  g.informational["beta_factored_literal_defect"] = relative_defect(g.s_beta_factored - g.s);
  g.informational["beta_factored_corrected_defect"] = relative_defect(g.s_beta_factored_corrected - g.s);
  g.informational["s_norm2"] = spectral_norm(s);
  g.informational["clamped"] = g.clamped ? 1.0 : 0.0;
  return g;
}

/// ||sin 2S + i(beta lambda - lambda beta)/2|| and ||cos 2S - (beta lambda + lambda beta)/2||.
inline Diagnostics verify_trig_identities(const GeneratorResult &g, const BlockOperator &lambda,
                                          const BetaMatrix &beta, Metric metric,
                                          const Tolerances &tol = {}) {
  const Complex i(0.0, 1.0);
  const BlockOperator bl = beta.left(lambda);
  const BlockOperator lb = beta.right(lambda);
  const BlockOperator sin2s = matrix_function(
      g.s, metric, [](Complex z) { return std::sin(2.0 * z); }, tol.tol_struct);
  const BlockOperator cos2s = matrix_function(
      g.s, metric, [](Complex z) { return std::cos(2.0 * z); }, tol.tol_struct);
  return {{"sin2s_defect", relative_defect(sin2s + (0.5 * i) * (bl - lb))},
          {"cos2s_defect", relative_defect(cos2s - 0.5 * (bl + lb))}};
}

/// ||exp(i S) - U||_F / ||U||_F
inline double verify_exp_equivalence(const BlockOperator &s, const BlockOperator &u, Metric metric,
                                     double tol_struct = 1e-12) {
  return frobenius(exp_i(s, metric, tol_struct) - u) / frobenius(u);
}

inline double verify_exp_equivalence(const GeneratorResult &g, const BlockOperator &u,
                                     Metric metric, double tol_struct = 1e-12) {
  return verify_exp_equivalence(g.s, u, metric, tol_struct);
}

} // namespace exactfw
