#pragma once

// Exact one-step Foldy-Wouthuysen transformation built from the sign
// operator lambda:
//
//   U = (1 + beta lambda) / sqrt(2 + beta lambda + lambda beta)
//     = (1 + beta lambda) / sqrt((1 + beta lambda)^dagger (1 + beta lambda))
//
// The same code serves the nonstationary case, where lambda is replaced by
// the sign of the extended operator H - i d/dt.

#include <exactfw/blockop.hpp>
#include <exactfw/matfun.hpp>
#include <exactfw/tolerances.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace exactfw {

using Diagnostics = std::map<std::string, double>;

struct FWResult {
  BlockOperator lambda;
  BlockOperator u;
  BlockOperator u_inverse;
  BlockOperator h_fw;
  Diagnostics diagnostics;   // carry verdicts
  Diagnostics informational; // reported only
};

struct EriksenParts {
  BlockOperator numerator;     // 1 + beta lambda
  BlockOperator denominator;   // sqrt(2 + beta lambda + lambda beta)
  BlockOperator inverse_denominator;
  BlockOperator u;
};

struct EriksenOptions {
  bool require_involution = true;
  double involution_tol = 1e-8;
  double tol_struct = 1e-12;
};

inline EriksenParts eriksen_parts(const BlockOperator &lambda, const BetaMatrix &beta,
                                  Metric metric, const EriksenOptions &opts = {}) {
  beta.require(lambda);
  if (opts.require_involution && identity_defect(lambda * lambda) > opts.involution_tol)
    throw Error(ErrorKind::Structural, "lambda is not an involution (lambda^2 != 1)");
  const BlockOperator one = BlockOperator::identity(lambda.shape());
  const BlockOperator bl = beta.left(lambda);
  const BlockOperator lb = beta.right(lambda);
  BlockOperator sum = 2.0 * one + bl + lb;
  if (metric == Metric::Hermitian)
    sum = sum.with(0.5 * (sum.matrix() + sum.matrix().adjoint()));
  try {
    auto roots = sqrt_and_inverse(sum, metric, opts.tol_struct);
    BlockOperator numerator = one + bl;
    BlockOperator u = numerator * roots.inverse_root;
    return {std::move(numerator), std::move(roots.root), std::move(roots.inverse_root),
            std::move(u)};
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::NotPositiveDefinite)
      throw Error(ErrorKind::EriksenDegenerate,
                  "2 + beta lambda + lambda beta is singular (" + std::string(e.what()) + ")");
    throw;
  }
}

inline BlockOperator eriksen_unitary(const BlockOperator &lambda, const BetaMatrix &beta,
                                     Metric metric, const EriksenOptions &opts = {}) {
  return eriksen_parts(lambda, beta, metric, opts).u;
}

/// (1 + beta lambda) [(1 + beta lambda)^+ (1 + beta lambda)]^(-1/2) with the
/// metric adjoint.
inline BlockOperator eriksen_unitary_alt(const BlockOperator &lambda, const BetaMatrix &beta,
                                         Metric metric, double tol_struct = 1e-12) {
  const BlockOperator numerator = BlockOperator::identity(lambda.shape()) + beta.left(lambda);
  BlockOperator gram = adjoint_m(numerator, metric, beta) * numerator;
  if (metric == Metric::Hermitian)
    gram = gram.with(0.5 * (gram.matrix() + gram.matrix().adjoint()));
  try {
    return numerator * sqrt_and_inverse(gram, metric, tol_struct).inverse_root;
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::NotPositiveDefinite)
      throw Error(ErrorKind::EriksenDegenerate,
                  "(1 + beta lambda)^+ (1 + beta lambda) is singular");
    throw;
  }
}

/// Identity defects, all normalized by the Frobenius norm of the identity:
///   lambda_sq_defect          lambda^2 - 1
///   commutator_bl_lb          [beta lambda, lambda beta]
///   commutator_beta_sum       [beta, beta lambda + lambda beta]
///   eriksen_defect            beta U - U^+ beta   (metric adjoint)
///   unitarity_defect          U U^+ - 1           (metric adjoint)
///   projector_defect          (1 +- lambda)/2 idempotent and
///                             (1 + beta lambda)(1 +- lambda) = (1 +- beta)(1 +- lambda)
/// plus eriksen_defect_raw, beta U - U^dagger beta with the plain adjoint,
/// which is only expected to vanish for the Hermitian metric.
inline Diagnostics verify_eriksen_identities(const BlockOperator &lambda, const BlockOperator &u,
                                             const BetaMatrix &beta, Metric metric) {
  const BlockOperator one = BlockOperator::identity(lambda.shape());
  const BlockOperator b = beta.as_operator();
  const BlockOperator bl = beta.left(lambda);
  const BlockOperator lb = beta.right(lambda);
  const BlockOperator u_adj = adjoint_m(u, metric, beta);

  Diagnostics d;
  d["lambda_sq_defect"] = identity_defect(lambda * lambda);
  d["commutator_bl_lb"] = relative_defect(commutator(bl, lb));
  d["commutator_beta_sum"] = relative_defect(commutator(b, bl + lb));
  d["eriksen_defect"] = relative_defect(beta.left(u) - beta.right(u_adj));
  d["eriksen_defect_raw"] = relative_defect(beta.left(u) - beta.right(u.adjoint()));
  d["unitarity_defect"] = identity_defect(u * u_adj);

  double projector = 0.0;
  for (const double s : {1.0, -1.0}) {
    const BlockOperator p = 0.5 * (one + s * lambda);
    projector = std::max(projector, relative_defect(p * p - p));
    const BlockOperator lhs = (one + bl) * p;
    const BlockOperator rhs = (one + s * b) * p;
    projector = std::max(projector, relative_defect(lhs - rhs));
  }
  d["projector_defect"] = projector;
  return d;
}

inline Diagnostics verify_eriksen_identities(const FWResult &result, const BetaMatrix &beta,
                                             Metric metric) {
  return verify_eriksen_identities(result.lambda, result.u, beta, metric);
}

/// ||odd(h_fw)||_F / ||h_fw||_F
inline double verify_even_transformed(const BlockOperator &h_fw, const BetaMatrix &beta) {
  return relative_odd_norm(h_fw, beta);
}

/// Eigenvalues sorted by (real, imag) with the general solver; used to compare
/// spectra across a similarity transformation.
inline ComplexVector sorted_eigenvalues(const Matrix &a) {
  Eigen::ComplexEigenSolver<Matrix> solver(a, false);
  ComplexVector values = solver.eigenvalues();
  std::vector<Complex> v(values.data(), values.data() + values.size());
  std::sort(v.begin(), v.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return Eigen::Map<ComplexVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// max |eig(a) - eig(b)| / ||a||_2, eigenvalues paired in sorted order.
inline double spectrum_defect(const BlockOperator &original, const BlockOperator &transformed,
                              Metric metric) {
  ComplexVector reference;
  if (metric == Metric::Hermitian)
    reference = detail::decompose_hermitian(original.matrix()).eigenvalues;
  else
    reference = sorted_eigenvalues(original.matrix());
  const ComplexVector moved = sorted_eigenvalues(transformed.matrix());
  const double scale = std::max(detail::max_abs(reference), 1e-300);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < reference.size(); ++i)
    worst = std::max(worst, std::abs(reference(i) - moved(i)));
  return worst / scale;
}

/// Full Eriksen transformation of a stationary Hamiltonian. U^-1 is taken as
/// the metric adjoint of U; the residual of that choice is unitarity_defect.
inline FWResult transform_stationary(const SplitHamiltonian &split, const Tolerances &tol = {}) {
  validate(split, tol.tol_struct);
  const BlockOperator h = split.hamiltonian();
  const BetaMatrix &beta = split.beta;

  FWResult r;
  r.lambda = sign_of(h, split.metric, tol.gap_tol, tol.tol_struct);
  const EriksenParts parts =
      eriksen_parts(r.lambda, beta, split.metric, {true, 1e-8, tol.tol_struct});
  r.u = parts.u;
  r.u_inverse = adjoint_m(r.u, split.metric, beta);
  r.h_fw = r.u * h * r.u_inverse;

  r.diagnostics = verify_eriksen_identities(r.lambda, r.u, beta, split.metric);
  // The boson analog of beta U = U^dagger beta is only defined with the metric adjoint.
  r.informational["eriksen_defect_raw"] = r.diagnostics.at("eriksen_defect_raw");
  r.diagnostics.erase("eriksen_defect_raw");
  r.diagnostics["odd_norm"] = verify_even_transformed(r.h_fw, beta);
  r.diagnostics["spectrum_defect"] = spectrum_defect(h, r.h_fw, split.metric);
  r.diagnostics["alt_form_defect"] =
      relative_defect(eriksen_unitary_alt(r.lambda, beta, split.metric, tol.tol_struct) - r.u);
  r.diagnostics["numerator_denominator_commutator"] =
      relative_defect(commutator(parts.numerator, parts.denominator));
  r.diagnostics["lambda_commutes_with_h"] =
      frobenius(commutator(r.lambda, h)) / std::max(frobenius(h), 1e-300);

  // (H^2)^(1/2) = lambda H; its evenness is only guaranteed for constant M and E = 0.
  r.informational["sqrt_h2_odd_norm"] = relative_odd_norm(r.lambda * h, beta);
  return r;
}

} // namespace exactfw
