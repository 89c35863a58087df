#include "helpers.hpp"

using namespace exactfw;
using testing_support::closed_form_dirac_u;
using testing_support::max_abs_diff;

TEST(EriksenUnitary, RestIsIdentity) {
  const BetaMatrix beta = beta_matrix(4);
  const auto u = eriksen_unitary(beta.as_operator(), beta, Metric::Hermitian);
  EXPECT_LE(identity_defect(u), 1e-15);
  EXPECT_LE(identity_defect(eriksen_unitary_alt(beta.as_operator(), beta, Metric::Hermitian)),
            1e-15);
}

TEST(EriksenUnitary, MatchesClosedFormForFreeDirac) {
  const BetaMatrix beta = beta_matrix(4);
  for (const Momentum p : {Momentum{0, 0, 0.75}, Momentum{0.3, -0.4, 1.2}, Momentum{2, 0, 0}}) {
    const auto split = free_dirac(1.0, p);
    const auto lambda = sign_of(split.hamiltonian(), Metric::Hermitian);
    const auto u = eriksen_unitary(lambda, beta, Metric::Hermitian);
    EXPECT_LE(max_abs_diff(u.matrix(), closed_form_dirac_u(1.0, p)), 1e-14);
  }
}

TEST(EriksenUnitary, IdentitiesForFreeDirac) {
  const BetaMatrix beta = beta_matrix(4);
  const auto lambda = sign_of(free_dirac(1.0, {0, 0, 0.75}).hamiltonian(), Metric::Hermitian);
  const auto u = eriksen_unitary(lambda, beta, Metric::Hermitian);
  const auto d = verify_eriksen_identities(lambda, u, beta, Metric::Hermitian);
  for (const auto &[name, value] : d)
    EXPECT_LE(value, 1e-12) << name;
}

TEST(EriksenUnitary, MinusBetaIsDegenerate) {
  const BetaMatrix beta = beta_matrix(4);
  try {
    eriksen_unitary(-1.0 * beta.as_operator(), beta, Metric::Hermitian);
    FAIL() << "expected a degenerate denominator";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::EriksenDegenerate);
    EXPECT_NE(std::string(e.what()).find("eriksen denominator degenerate"), std::string::npos);
  }
}

TEST(EriksenUnitary, RejectsNonInvolution) {
  const BetaMatrix beta = beta_matrix(2);
  EXPECT_THROW(eriksen_unitary(0.5 * beta.as_operator(), beta, Metric::Hermitian), Error);
}

TEST(EriksenUnitary, AltFormAgreesOnFreeDirac) {
  const BetaMatrix beta = beta_matrix(4);
  const auto lambda = sign_of(free_dirac(1.0, {0, 0, 0.75}).hamiltonian(), Metric::Hermitian);
  const auto u = eriksen_unitary(lambda, beta, Metric::Hermitian);
  const auto alt = eriksen_unitary_alt(lambda, beta, Metric::Hermitian);
  EXPECT_LE(frobenius(alt - u), 1e-10);
}

TEST(EriksenUnitary, RandomGappedProperties) {
  std::mt19937_64 rng(42);
  for (const BlockShape shape : {BlockShape{2, 1}, BlockShape{4, 1}, BlockShape{4, 3}}) {
    const BetaMatrix beta(shape);
    for (int trial = 0; trial < 10; ++trial) {
      const auto h = testing_support::random_gapped_hermitian(rng, shape);
      const auto lambda = sign_of(h, Metric::Hermitian);
      const auto parts = eriksen_parts(lambda, beta, Metric::Hermitian);
      const auto d = verify_eriksen_identities(lambda, parts.u, beta, Metric::Hermitian);
      for (const auto &[name, value] : d)
        EXPECT_LE(value, 1e-10) << name << " trial " << trial;
      EXPECT_LE(frobenius(eriksen_unitary_alt(lambda, beta, Metric::Hermitian) - parts.u), 1e-10);
      const auto h_fw = parts.u * h * parts.u.adjoint();
      EXPECT_LE(relative_odd_norm(h_fw, beta), 1e-10);
    }
  }
}

TEST(Transform, RestMassIsUnchanged) {
  const auto r = transform_stationary(free_dirac(1.0, {0, 0, 0}));
  EXPECT_LE(identity_defect(r.u), 1e-15);
  EXPECT_LE(max_abs_diff(r.h_fw.matrix(), Matrix(dirac::beta())), 1e-15);
  for (const auto &[name, value] : r.diagnostics)
    EXPECT_LE(value, 1e-15) << name;
}

TEST(Transform, FreeDiracBecomesBetaTimesEnergy) {
  const auto r = transform_stationary(free_dirac(1.0, {0, 0, 0.75}));
  EXPECT_LE(max_abs_diff(r.h_fw.matrix(), 1.25 * Matrix(dirac::beta())), 1e-14);
  for (const auto &[name, value] : r.diagnostics)
    EXPECT_LE(value, 1e-10) << name;
}

TEST(Transform, FreeDiracSweep) {
  for (double p = 0.1; p <= 2.0 + 1e-12; p += 0.1) {
    const auto r = transform_stationary(free_dirac(1.0, {0, p * 0.6, p * 0.8}));
    for (const auto &[name, value] : r.diagnostics)
      EXPECT_LE(value, 1e-10) << name << " at p = " << p;
    EXPECT_LE(max_abs_diff(r.h_fw.matrix(), std::hypot(1.0, p) * Matrix(dirac::beta())), 1e-13);
  }
}

TEST(Transform, GridModelIsEvenAndIsospectral) {
  const auto split = make_stationary({ModelKind::Dirac1D, {{"N", 16}}});
  const auto r = transform_stationary(split);
  EXPECT_LE(r.diagnostics.at("odd_norm"), 1e-10);
  EXPECT_LE(r.diagnostics.at("spectrum_defect"), 1e-10);
  EXPECT_LE(r.diagnostics.at("unitarity_defect"), 1e-10);
}

TEST(Transform, FeshbachVillarsClosedForm) {
  const auto split = feshbach_villars(1.0, 0.75);
  const auto r = transform_stationary(split);
  Matrix tau3(2, 2);
  tau3 << 1, 0, 0, -1;
  EXPECT_LE(max_abs_diff(r.h_fw.matrix(), 1.25 * tau3), 1e-12);
  EXPECT_LE(r.diagnostics.at("eriksen_defect"), 1e-12);
  EXPECT_LE(r.diagnostics.at("unitarity_defect"), 1e-12);
  // The plain Hermitian adjoint is not the relevant one for the boson metric.
  EXPECT_GT(r.informational.at("eriksen_defect_raw"), 1e-3);
}

TEST(Transform, GaplessRaisesSpectralGap) {
  const auto split =
      make_stationary({ModelKind::Dirac1D, {{"N", 8}, {"V0", 1.0}, {"V1", 0.0}}});
  try {
    transform_stationary(split);
    FAIL() << "expected a spectral gap error";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::SpectralGap);
  }
}

TEST(Verify, DetectsCorruptedUnitary) {
  const BetaMatrix beta = beta_matrix(4);
  const auto lambda = sign_of(free_dirac(1.0, {0, 0, 0.75}).hamiltonian(), Metric::Hermitian);
  const auto u = eriksen_unitary(lambda, beta, Metric::Hermitian);
  Matrix noise = Matrix::Zero(4, 4);
  noise(0, 2) = 1e-3 * 2.0; // odd entry, breaks beta U = U^+ beta
  const auto bad = u.with(u.matrix() + noise);
  const auto d = verify_eriksen_identities(lambda, bad, beta, Metric::Hermitian);
  EXPECT_NEAR(d.at("eriksen_defect"), 1e-3 * 2.0 * std::sqrt(2.0) / 2.0, 1e-4);
  EXPECT_GT(d.at("unitarity_defect"), 1e-4);
}

TEST(Verify, SpectrumDefectSeesPerturbation) {
  const auto h = free_dirac(1.0, {0, 0, 0.75}).hamiltonian();
  const auto shifted = h + 1e-6 * BlockOperator::identity({4, 1});
  EXPECT_NEAR(spectrum_defect(h, shifted, Metric::Hermitian), 1e-6 / 1.25, 1e-12);
  EXPECT_LE(spectrum_defect(h, h, Metric::Hermitian), 1e-15);
}
