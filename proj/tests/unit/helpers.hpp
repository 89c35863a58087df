#pragma once

#include <exactfw/exactfw.hpp>

#include <gtest/gtest.h>

#include <random>

namespace testing_support {

using namespace exactfw;

inline Matrix random_matrix(std::mt19937_64 &rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      a(r, c) = Complex(g(rng), g(rng));
  return a;
}

inline Matrix random_unitary(std::mt19937_64 &rng, int n) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n));
  return qr.householderQ() * Matrix::Identity(n, n);
}

/// Hermitian matrix with n/2 eigenvalues in [gap, 2] and n/2 in [-2, -gap].
/// A random unitary mixes the spectrum, so the Eriksen denominator is
/// generically nonsingular.
inline BlockOperator random_gapped_hermitian(std::mt19937_64 &rng, BlockShape shape,
                                             double gap = 0.3) {
  const int n = shape.side();
  std::uniform_real_distribution<double> u(gap, 2.0);
  Eigen::VectorXd values(n);
  for (int i = 0; i < n; ++i)
    values(i) = (i < n / 2 ? 1.0 : -1.0) * u(rng);
  const Matrix q = random_unitary(rng, n);
  Matrix h = q * values.cast<Complex>().asDiagonal() * q.adjoint();
  h = 0.5 * (h + h.adjoint()).eval();
  return {h, shape};
}

/// Textbook closed form for the free Dirac particle,
///   U = (E + m + beta alpha.p) / sqrt(2E(E + m)).
inline Matrix closed_form_dirac_u(double m, const Momentum &p) {
  const double e = std::hypot(m, std::hypot(p[0], p[1], p[2]));
  const Eigen::Matrix4cd ap = dirac::alpha(0) * p[0] + dirac::alpha(1) * p[1] +
                              dirac::alpha(2) * p[2];
  const Eigen::Matrix4cd u =
      ((e + m) * Eigen::Matrix4cd::Identity() + dirac::beta() * ap) / std::sqrt(2.0 * e * (e + m));
  return u;
}

inline double max_abs_diff(const Matrix &a, const Matrix &b) {
  return (a - b).cwiseAbs().maxCoeff();
}

} // namespace testing_support
