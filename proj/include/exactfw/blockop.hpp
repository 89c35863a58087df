#pragma once

// Block-operator algebra over the two spinor-like halves of a bispinor.
//
// A BlockOperator is a dense complex matrix whose rows and columns are
// grouped into `copies` consecutive internal blocks of size `internal_dim`.
// Inside every internal block the first half is the upper spinor and the
// second half the lower spinor; beta is +1 on the former and -1 on the
// latter. Copies are Floquet sectors for extended operators and grid sites
// for discretized models.

#include <exactfw/errors.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <utility>

namespace exactfw {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

struct BlockShape {
  int internal_dim = 2;
  int copies = 1;

  int side() const { return internal_dim * copies; }
  bool operator==(const BlockShape &) const = default;
};

inline void validate_shape(const BlockShape &shape) {
  if (shape.internal_dim < 2 || shape.internal_dim % 2 != 0)
    throw Error(ErrorKind::Structural,
                "internal_dim must be even and >= 2, got " +
                    std::to_string(shape.internal_dim));
  if (shape.copies < 1)
    throw Error(ErrorKind::Structural,
                "copies must be >= 1, got " + std::to_string(shape.copies));
}

class BlockOperator {
public:
  BlockOperator() = default;

  BlockOperator(Matrix data, BlockShape shape)
      : data_(std::move(data)), shape_(shape) {
    validate_shape(shape_);
    if (data_.rows() != shape_.side() || data_.cols() != shape_.side())
      throw Error(ErrorKind::Structural,
                  "matrix is " + std::to_string(data_.rows()) + "x" +
                      std::to_string(data_.cols()) + ", shape requires side " +
                      std::to_string(shape_.side()));
  }

  static BlockOperator identity(BlockShape shape) {
    return {Matrix::Identity(shape.side(), shape.side()), shape};
  }
  static BlockOperator zero(BlockShape shape) {
    return {Matrix::Zero(shape.side(), shape.side()), shape};
  }

  const Matrix &matrix() const { return data_; }
  const BlockShape &shape() const { return shape_; }
  int side() const { return shape_.side(); }

  /// Same shape, new data. Used by matrix functions.
  BlockOperator with(Matrix data) const { return {std::move(data), shape_}; }

  BlockOperator adjoint() const { return with(data_.adjoint()); }

  BlockOperator &operator+=(const BlockOperator &rhs) {
    require_same_shape(rhs);
    data_ += rhs.data_;
    return *this;
  }
  BlockOperator &operator-=(const BlockOperator &rhs) {
    require_same_shape(rhs);
    data_ -= rhs.data_;
    return *this;
  }
  BlockOperator &operator*=(Complex s) {
    data_ *= s;
    return *this;
  }

  void require_same_shape(const BlockOperator &other) const {
    if (!(shape_ == other.shape_))
      throw Error(ErrorKind::Structural, "shape mismatch");
  }

private:
  Matrix data_;
  BlockShape shape_;
};

inline BlockOperator operator+(BlockOperator a, const BlockOperator &b) { return a += b; }
inline BlockOperator operator-(BlockOperator a, const BlockOperator &b) { return a -= b; }
inline BlockOperator operator*(Complex s, BlockOperator a) { return a *= s; }
inline BlockOperator operator*(BlockOperator a, Complex s) { return a *= s; }
inline BlockOperator operator-(BlockOperator a) { return a *= -1.0; }
inline BlockOperator operator*(const BlockOperator &a, const BlockOperator &b) {
  a.require_same_shape(b);
  return a.with(a.matrix() * b.matrix());
}

/// The grading operator beta = diag(+1 upper, -1 lower), replicated per copy.
/// Stored as its diagonal so that beta products are exact sign flips.
class BetaMatrix {
public:
  explicit BetaMatrix(BlockShape shape) : shape_(shape) {
    validate_shape(shape_);
    signs_.resize(shape_.side());
    const int half = shape_.internal_dim / 2;
    for (int c = 0; c < shape_.copies; ++c)
      for (int i = 0; i < shape_.internal_dim; ++i)
        signs_(c * shape_.internal_dim + i) = i < half ? 1.0 : -1.0;
  }

  const BlockShape &shape() const { return shape_; }
  const RealVector &signs() const { return signs_; }
  double sign(int i) const { return signs_(i); }

  BlockOperator as_operator() const {
    return {signs_.cast<Complex>().asDiagonal().toDenseMatrix(), shape_};
  }

  BlockOperator left(const BlockOperator &a) const {
    require(a);
    return a.with(signs_.cast<Complex>().asDiagonal() * a.matrix());
  }
  BlockOperator right(const BlockOperator &a) const {
    require(a);
    return a.with(a.matrix() * signs_.cast<Complex>().asDiagonal());
  }
  /// beta * A * beta
  BlockOperator sandwich(const BlockOperator &a) const {
    require(a);
    Matrix out = a.matrix();
    for (Eigen::Index j = 0; j < out.cols(); ++j)
      for (Eigen::Index i = 0; i < out.rows(); ++i)
        if (signs_(i) != signs_(j))
          out(i, j) = -out(i, j);
    return a.with(std::move(out));
  }

  void require(const BlockOperator &a) const {
    if (!(a.shape() == shape_))
      throw Error(ErrorKind::Structural, "operator shape does not match beta");
  }

private:
  BlockShape shape_;
  RealVector signs_;
};

inline BetaMatrix beta_matrix(int internal_dim, int copies = 1) {
  return BetaMatrix(BlockShape{internal_dim, copies});
}

enum class Metric { Hermitian, BetaPseudo };

inline std::string to_string(Metric metric) {
  return metric == Metric::Hermitian ? "Hermitian" : "BetaPseudo";
}

// --- norms ---------------------------------------------------------------

inline double frobenius(const Matrix &a) { return a.norm(); }
inline double frobenius(const BlockOperator &a) { return a.matrix().norm(); }

/// Largest singular value.
inline double spectral_norm(const Matrix &a) {
  if (a.size() == 0)
    return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}
inline double spectral_norm(const BlockOperator &a) { return spectral_norm(a.matrix()); }

/// ||X||_F / sqrt(n), i.e. relative to the Frobenius norm of the identity.
inline double relative_defect(const Matrix &x) {
  return x.rows() == 0 ? 0.0 : x.norm() / std::sqrt(static_cast<double>(x.rows()));
}
inline double relative_defect(const BlockOperator &x) { return relative_defect(x.matrix()); }

inline double identity_defect(const BlockOperator &a) {
  return relative_defect(a.matrix() - Matrix::Identity(a.side(), a.side()));
}

// --- grading -------------------------------------------------------------

/// (A + beta A beta) / 2, computed as an exact mask.
inline BlockOperator even_part(const BlockOperator &a, const BetaMatrix &beta) {
  beta.require(a);
  Matrix out = a.matrix();
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      if (beta.sign(i) != beta.sign(j))
        out(i, j) = 0.0;
  return a.with(std::move(out));
}

/// (A - beta A beta) / 2, computed as an exact mask.
inline BlockOperator odd_part(const BlockOperator &a, const BetaMatrix &beta) {
  beta.require(a);
  Matrix out = a.matrix();
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      if (beta.sign(i) == beta.sign(j))
        out(i, j) = 0.0;
  return a.with(std::move(out));
}

/// ||odd(A)||_F / ||A||_F; zero for the zero operator.
inline double relative_odd_norm(const BlockOperator &a, const BetaMatrix &beta) {
  const double total = frobenius(a);
  return total == 0.0 ? 0.0 : frobenius(odd_part(a, beta)) / total;
}

inline BlockOperator commutator(const BlockOperator &a, const BlockOperator &b) {
  return a * b - b * a;
}
inline BlockOperator anticommutator(const BlockOperator &a, const BlockOperator &b) {
  return a * b + b * a;
}

/// Conjugate transpose for the Hermitian metric, beta A^dagger beta for the
/// boson (beta-pseudo-Hermitian) metric.
inline BlockOperator adjoint_m(const BlockOperator &a, Metric metric,
                               const BetaMatrix &beta) {
  beta.require(a);
  if (metric == Metric::Hermitian)
    return a.adjoint();
  return beta.sandwich(a.adjoint());
}

inline double self_adjoint_defect(const BlockOperator &a, Metric metric,
                                  const BetaMatrix &beta) {
  const double scale = frobenius(a);
  const double diff = frobenius(a - adjoint_m(a, metric, beta));
  return scale == 0.0 ? diff : diff / scale;
}

// --- Hamiltonian splitting -----------------------------------------------

/// H = beta M + E + O with M, E even and O odd.
struct SplitHamiltonian {
  BlockOperator M;
  BlockOperator E;
  BlockOperator O;
  BetaMatrix beta;
  Metric metric;

  BlockOperator hamiltonian() const { return beta.left(M) + E + O; }
};

inline void validate(const SplitHamiltonian &s, double tol_struct = 1e-12) {
  const auto rel = [](const BlockOperator &x, const BlockOperator &ref) {
    const double scale = std::max(frobenius(ref), 1.0);
    return frobenius(x) / scale;
  };
  const BlockOperator b = s.beta.as_operator();
  if (rel(commutator(b, s.M), s.M) > tol_struct)
    throw Error(ErrorKind::Structural, "mass operator M is not even");
  if (rel(commutator(b, s.E), s.E) > tol_struct)
    throw Error(ErrorKind::Structural, "operator E is not even");
  if (rel(anticommutator(b, s.O), s.O) > tol_struct)
    throw Error(ErrorKind::Structural, "operator O is not odd");
  if (self_adjoint_defect(s.hamiltonian(), s.metric, s.beta) > tol_struct)
    throw Error(ErrorKind::MetricViolation,
                "H is not self-adjoint under the " + to_string(s.metric) + " metric");
}

/// E = even(H) - beta M, O = odd(H). M must be declared by the caller because
/// the split between beta M and E is not unique for operator-valued M.
inline SplitHamiltonian split(const BlockOperator &h, const BlockOperator &m,
                              const BetaMatrix &beta, Metric metric,
                              double tol_struct = 1e-12) {
  beta.require(h);
  beta.require(m);
  if (self_adjoint_defect(h, metric, beta) > tol_struct)
    throw Error(ErrorKind::MetricViolation,
                "H is not self-adjoint under the " + to_string(metric) + " metric");
  if (frobenius(odd_part(m, beta)) > tol_struct * std::max(frobenius(m), 1.0))
    throw Error(ErrorKind::Structural, "mass operator M is not even");
  SplitHamiltonian s{m, even_part(h, beta) - beta.left(m), odd_part(h, beta), beta,
                     metric};
  validate(s, tol_struct);
  return s;
}

} // namespace exactfw
