#include "helpers.hpp"

using namespace exactfw;
using testing_support::random_matrix;

TEST(BetaMatrix, SpinZeroIsTau3) {
  const auto b = beta_matrix(2, 1).as_operator().matrix();
  Matrix expected(2, 2);
  expected << 1, 0, 0, -1;
  EXPECT_EQ(b, expected);
}

TEST(BetaMatrix, DiracBlocks) {
  const auto b = beta_matrix(4, 1).as_operator().matrix();
  EXPECT_EQ(b, Matrix(dirac::beta()));
}

TEST(BetaMatrix, ReplicatedOverCopies) {
  const auto b = beta_matrix(4, 3).as_operator().matrix();
  ASSERT_EQ(b.rows(), 12);
  for (int c = 0; c < 3; ++c)
    EXPECT_EQ(Matrix(b.block(4 * c, 4 * c, 4, 4)), Matrix(dirac::beta()));
  EXPECT_EQ(b.cwiseAbs().sum(), 12.0);
}

TEST(BetaMatrix, RejectsOddInternalDimension) {
  EXPECT_THROW(beta_matrix(3, 1), Error);
  EXPECT_THROW(beta_matrix(4, 0), Error);
  try {
    beta_matrix(5, 1);
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::Structural);
  }
}

TEST(BlockOperator, ShapeMismatchIsStructural) {
  EXPECT_THROW(BlockOperator(Matrix::Identity(3, 3), BlockShape{4, 1}), Error);
  const auto a = BlockOperator::identity({2, 1});
  const auto b = BlockOperator::identity({4, 1});
  EXPECT_THROW(a + b, Error);
  EXPECT_THROW(a * b, Error);
}

TEST(Grading, BetaIsEven) {
  const BetaMatrix beta = beta_matrix(4);
  const auto b = beta.as_operator();
  EXPECT_EQ(even_part(b, beta).matrix(), b.matrix());
  EXPECT_EQ(frobenius(odd_part(b, beta)), 0.0);
}

TEST(Grading, AntidiagonalIsOdd) {
  const BetaMatrix beta = beta_matrix(2);
  Matrix a(2, 2);
  a << 0, 1, 1, 0;
  const BlockOperator op(a, {2, 1});
  EXPECT_EQ(frobenius(even_part(op, beta)), 0.0);
  EXPECT_EQ(odd_part(op, beta).matrix(), a);
}

TEST(Grading, RandomDecompositionIsExact) {
  std::mt19937_64 rng(7);
  for (const BlockShape shape : {BlockShape{2, 1}, BlockShape{4, 1}, BlockShape{4, 3}}) {
    const BetaMatrix beta(shape);
    const BlockOperator a(random_matrix(rng, shape.side()), shape);
    const auto e = even_part(a, beta);
    const auto o = odd_part(a, beta);
    EXPECT_EQ((e + o).matrix(), a.matrix());
    EXPECT_EQ(beta.sandwich(e).matrix(), e.matrix());
    EXPECT_EQ(beta.left(o).matrix(), (-1.0 * beta.right(o)).matrix());
  }
}

TEST(Grading, DiracAlphaIsOdd) {
  const BetaMatrix beta = beta_matrix(4);
  for (int k = 0; k < 3; ++k) {
    const BlockOperator a(Matrix(dirac::alpha(k)), {4, 1});
    EXPECT_EQ(relative_odd_norm(a, beta), 1.0);
  }
}

TEST(MetricAdjoint, HermitianIsIdentityOnHermitian) {
  std::mt19937_64 rng(11);
  const BetaMatrix beta = beta_matrix(4);
  Matrix h = random_matrix(rng, 4);
  h = (h + h.adjoint()).eval();
  const BlockOperator op(h, {4, 1});
  EXPECT_EQ(adjoint_m(op, Metric::Hermitian, beta).matrix(), h);
}

TEST(MetricAdjoint, BetaIsPseudoSelfAdjoint) {
  const BetaMatrix beta = beta_matrix(2);
  const auto b = beta.as_operator();
  EXPECT_EQ(adjoint_m(b, Metric::BetaPseudo, beta).matrix(), b.matrix());
}

TEST(MetricAdjoint, FeshbachVillarsIsPseudoHermitian) {
  const auto fv = feshbach_villars(1.0, 0.75);
  const auto h = fv.hamiltonian();
  EXPECT_LE(self_adjoint_defect(h, Metric::BetaPseudo, fv.beta), 1e-15);
  EXPECT_GT(self_adjoint_defect(h, Metric::Hermitian, fv.beta), 0.1);
}

TEST(Split, FreeDirac) {
  const Momentum p{0.1, -0.2, 0.75};
  const BlockOperator h(Matrix(dirac::hamiltonian(1.0, p)), {4, 1});
  const BlockOperator m = BlockOperator::identity({4, 1});
  const auto s = split(h, m, beta_matrix(4), Metric::Hermitian);
  EXPECT_LE(frobenius(s.E), 1e-15);
  const Matrix ap = dirac::alpha(0) * p[0] + dirac::alpha(1) * p[1] + dirac::alpha(2) * p[2];
  EXPECT_LE(testing_support::max_abs_diff(s.O.matrix(), ap), 1e-15);
  EXPECT_EQ(s.hamiltonian().matrix(), h.matrix());
}

TEST(Split, RestMass) {
  const BetaMatrix beta = beta_matrix(4);
  const BlockOperator h = 2.0 * beta.as_operator();
  const auto s = split(h, 2.0 * BlockOperator::identity({4, 1}), beta, Metric::Hermitian);
  EXPECT_EQ(frobenius(s.E), 0.0);
  EXPECT_EQ(frobenius(s.O), 0.0);
}

TEST(Split, GridPotentialIsEven) {
  const auto s = dirac_1d(1.0, 16, 2.0 * std::numbers::pi,
                          [](double x) { return Complex(0.2 * std::cos(x), 0.0); });
  const auto re = split(s.hamiltonian(), s.M, s.beta, Metric::Hermitian);
  EXPECT_LE(frobenius(re.E - s.E), 1e-14);
  EXPECT_LE(frobenius(re.O - s.O), 1e-14);
  EXPECT_LE(relative_odd_norm(re.E, s.beta), 0.0);
  EXPECT_EQ(relative_odd_norm(re.O, s.beta), 1.0);
}

TEST(Split, RejectsNonHermitian) {
  std::mt19937_64 rng(3);
  const BlockOperator h(random_matrix(rng, 4), {4, 1});
  try {
    split(h, BlockOperator::identity({4, 1}), beta_matrix(4), Metric::Hermitian);
    FAIL() << "expected a metric violation";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::MetricViolation);
  }
}

TEST(Split, RejectsNonEvenMass) {
  const BetaMatrix beta = beta_matrix(2);
  Matrix m(2, 2);
  m << 1, 0.5, 0.5, 1;
  EXPECT_THROW(split(beta.as_operator(), BlockOperator(m, {2, 1}), beta, Metric::Hermitian),
               Error);
}

TEST(Norms, CommutatorAndAnticommutator) {
  const BetaMatrix beta = beta_matrix(4);
  const BlockOperator ax(Matrix(dirac::alpha(0)), {4, 1});
  EXPECT_EQ(frobenius(anticommutator(beta.as_operator(), ax)), 0.0);
  EXPECT_NEAR(frobenius(commutator(beta.as_operator(), ax)), 4.0, 1e-15);
  EXPECT_NEAR(identity_defect(BlockOperator::identity({4, 1})), 0.0, 0.0);
  EXPECT_NEAR(spectral_norm(3.0 * beta.as_operator()), 3.0, 1e-14);
}
