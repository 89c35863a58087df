#pragma once

// Matrix functions through eigendecomposition: sign, principal square root,
// arcsin and exp(i S). One decomposition kernel serves all of them.
//
// Hermitian metric: the input must be Hermitian and is diagonalized with a
// unitary eigenbasis. BetaPseudo metric: a general complex eigensolver is
// used and f(A) = V f(D) V^-1. Hamiltonian-like inputs (sign, sqrt) must
// then have a real spectrum; odd generators may not, and go through the
// unrestricted path.

#include <exactfw/blockop.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <vector>

namespace exactfw {

struct SpectralDecomposition {
  ComplexVector eigenvalues;
  Matrix vectors;
  Matrix inverse_vectors;
  bool unitary_basis = false;

  Matrix reconstruct() const {
    return vectors * eigenvalues.asDiagonal() * inverse_vectors;
  }

  template <typename F> Matrix apply(F &&f) const {
    ComplexVector mapped(eigenvalues.size());
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
      mapped(i) = f(eigenvalues(i));
    return vectors * mapped.asDiagonal() * inverse_vectors;
  }
};

namespace detail {

// Largest-magnitude component of every eigenvector made real positive.
inline void fix_phases(Matrix &vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double a = std::abs(vectors(r, c));
      if (a > best_abs + 1e-14 * std::max(best_abs, 1.0)) {
        best_abs = a;
        best = r;
      }
    }
    if (best_abs > 0.0)
      vectors.col(c) *= std::conj(vectors(best, c)) / best_abs;
  }
}

inline double hermitian_defect(const Matrix &a) {
  const double scale = a.norm();
  const double diff = (a - a.adjoint()).norm();
  return scale == 0.0 ? diff : diff / scale;
}

inline SpectralDecomposition decompose_hermitian(const Matrix &a) {
  const Matrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::IllConditioned, "Hermitian eigensolver did not converge");
  SpectralDecomposition d;
  d.eigenvalues = solver.eigenvalues().cast<Complex>();
  d.vectors = solver.eigenvectors();
  fix_phases(d.vectors);
  d.inverse_vectors = d.vectors.adjoint();
  d.unitary_basis = true;
  return d;
}

inline SpectralDecomposition decompose_general(const Matrix &a, bool require_real,
                                               double scale) {
  Eigen::ComplexEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::IllConditioned, "complex eigensolver did not converge");
  const ComplexVector &raw_values = solver.eigenvalues();
  const Matrix &raw_vectors = solver.eigenvectors();
  const Eigen::Index n = raw_values.size();

  if (require_real)
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(raw_values(i).imag()) > 1e-8 * scale)
        throw Error(ErrorKind::BrokenPseudoHermiticity,
                    "eigenvalue with imaginary part " +
                        describe(raw_values(i).imag()));

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    if (raw_values(x).real() != raw_values(y).real())
      return raw_values(x).real() < raw_values(y).real();
    return raw_values(x).imag() < raw_values(y).imag();
  });

  SpectralDecomposition d;
  d.eigenvalues.resize(n);
  d.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    d.eigenvalues(k) = require_real ? Complex(raw_values(src).real(), 0.0)
                                    : raw_values(src);
    d.vectors.col(k) = raw_vectors.col(src).normalized();
  }
  fix_phases(d.vectors);

  Eigen::JacobiSVD<Matrix> svd(d.vectors);
  const auto &sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  if (smallest == 0.0 || sv(0) / smallest > 1e8)
    throw Error(ErrorKind::IllConditioned,
                "eigenvector matrix condition number exceeds 1e8");
  d.inverse_vectors = d.vectors.partialPivLu().inverse();
  d.unitary_basis = false;
  return d;
}

inline double max_abs(const ComplexVector &v) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    m = std::max(m, std::abs(v(i)));
  return m;
}

inline void check_reconstruction(const SpectralDecomposition &d, const Matrix &a) {
  const double scale = a.norm();
  if (scale == 0.0)
    return;
  if ((d.reconstruct() - a).norm() > 1e-11 * scale)
    throw Error(ErrorKind::IllConditioned, "eigendecomposition does not reconstruct input");
}

} // namespace detail

/// Eigendecomposition of a metric-self-adjoint operator with ascending
/// eigenvalues. BetaPseudo inputs must have an unbroken (real) spectrum.
inline SpectralDecomposition decompose(const BlockOperator &a, Metric metric,
                                       double tol_struct = 1e-12) {
  SpectralDecomposition d;
  if (metric == Metric::Hermitian) {
    if (detail::hermitian_defect(a.matrix()) > tol_struct)
      throw Error(ErrorKind::MetricViolation, "operator is not Hermitian");
    d = detail::decompose_hermitian(a.matrix());
  } else {
    const BetaMatrix beta(a.shape());
    if (self_adjoint_defect(a, metric, beta) > tol_struct)
      throw Error(ErrorKind::MetricViolation, "operator is not beta-pseudo-Hermitian");
    d = detail::decompose_general(a.matrix(), true, spectral_norm(a));
  }
  detail::check_reconstruction(d, a.matrix());
  return d;
}

/// Decomposition without a real-spectrum requirement, used for odd generators
/// under the boson metric (their spectra are imaginary).
inline SpectralDecomposition decompose_unrestricted(const BlockOperator &a, Metric metric,
                                                    double tol_struct = 1e-12) {
  if (metric == Metric::Hermitian)
    return decompose(a, metric, tol_struct);
  auto d = detail::decompose_general(a.matrix(), false, spectral_norm(a));
  detail::check_reconstruction(d, a.matrix());
  return d;
}

/// lambda = H / (H^2)^(1/2). Throws when an eigenvalue lies within
/// gap_tol * ||H||_2 of zero.
inline BlockOperator sign_of(const BlockOperator &h, Metric metric, double gap_tol = 1e-8,
                             double tol_struct = 1e-12) {
  const auto d = decompose(h, metric, tol_struct);
  const double norm = metric == Metric::Hermitian ? detail::max_abs(d.eigenvalues)
                                                  : spectral_norm(h);
  for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i)
    if (std::abs(d.eigenvalues(i)) <= gap_tol * norm)
      throw Error(ErrorKind::SpectralGap,
                  "eigenvalue " + describe(d.eigenvalues(i).real()) +
                      " within gap tolerance of zero");
  return h.with(d.apply([](Complex z) { return Complex(z.real() > 0 ? 1.0 : -1.0, 0.0); }));
}

struct SquareRoots {
  BlockOperator root;
  BlockOperator inverse_root;
};

/// Principal square root and its inverse of an operator with a strictly
/// positive real spectrum.
inline SquareRoots sqrt_and_inverse(const BlockOperator &a, Metric metric,
                                    double tol_struct = 1e-12) {
  const auto d = decompose(a, metric, tol_struct);
  const double norm = metric == Metric::Hermitian ? detail::max_abs(d.eigenvalues)
                                                  : spectral_norm(a);
  for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i)
    if (d.eigenvalues(i).real() <= 1e-12 * norm)
      throw Error(ErrorKind::NotPositiveDefinite,
                  "eigenvalue " + describe(d.eigenvalues(i).real()));
  return {a.with(d.apply([](Complex z) { return Complex(std::sqrt(z.real()), 0.0); })),
          a.with(d.apply([](Complex z) { return Complex(1.0 / std::sqrt(z.real()), 0.0); }))};
}

inline BlockOperator sqrt_spd(const BlockOperator &a, Metric metric,
                              double tol_struct = 1e-12) {
  return sqrt_and_inverse(a, metric, tol_struct).root;
}

/// Eigenvalue-wise principal arcsin of a Hermitian operator. Eigenvalues
/// within eps_clamp outside [-1, 1] are clamped to +-1.
inline BlockOperator arcsin_herm(const BlockOperator &m, double eps_clamp = 1e-10,
                                 double tol_struct = 1e-12, bool *clamped = nullptr) {
  const auto d = decompose(m, Metric::Hermitian, tol_struct);
  bool any_clamped = false;
  for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i) {
    const double x = std::abs(d.eigenvalues(i).real());
    if (x > 1.0 + eps_clamp)
      throw Error(ErrorKind::ArcsinDomain,
                  "eigenvalue magnitude " + describe(x) + " exceeds 1");
    any_clamped = any_clamped || x > 1.0;
  }
  if (clamped)
    *clamped = any_clamped;
  return m.with(d.apply([](Complex z) {
    return Complex(std::asin(std::clamp(z.real(), -1.0, 1.0)), 0.0);
  }));
}

/// Metric-aware arcsin. BetaPseudo arguments may carry imaginary eigenvalues;
/// the complex principal branch is used for them. Real eigenvalues beyond
/// 1 + eps_clamp sit on the branch cut and are rejected.
inline BlockOperator arcsin_m(const BlockOperator &m, Metric metric, double eps_clamp = 1e-10,
                              double tol_struct = 1e-12, bool *clamped = nullptr) {
  if (metric == Metric::Hermitian)
    return arcsin_herm(m, eps_clamp, tol_struct, clamped);
  const auto d = decompose_unrestricted(m, metric, tol_struct);
  const double scale = std::max(detail::max_abs(d.eigenvalues), 1.0);
  bool any_clamped = false;
  ComplexVector mapped(d.eigenvalues.size());
  for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i) {
    Complex z = d.eigenvalues(i);
    if (std::abs(z.imag()) <= 1e-12 * scale && std::abs(z.real()) > 1.0) {
      if (std::abs(z.real()) > 1.0 + eps_clamp)
        throw Error(ErrorKind::ArcsinDomain,
                    "real eigenvalue " + describe(z.real()) + " on the branch cut");
      z = Complex(std::copysign(1.0, z.real()), 0.0);
      any_clamped = true;
    }
    mapped(i) = std::asin(z);
  }
  if (clamped)
    *clamped = any_clamped;
  return m.with(d.vectors * mapped.asDiagonal() * d.inverse_vectors);
}

/// f(A) evaluated in A's eigenbasis (unitary for Hermitian metric).
inline BlockOperator matrix_function(const BlockOperator &a, Metric metric,
                                     const std::function<Complex(Complex)> &f,
                                     double tol_struct = 1e-12) {
  const auto d = decompose_unrestricted(a, metric, tol_struct);
  return a.with(d.apply(f));
}

/// exp(i S) for metric-self-adjoint S.
inline BlockOperator exp_i(const BlockOperator &s, Metric metric, double tol_struct = 1e-12) {
  return matrix_function(
      s, metric, [](Complex z) { return std::exp(Complex(0.0, 1.0) * z); }, tol_struct);
}

} // namespace exactfw
