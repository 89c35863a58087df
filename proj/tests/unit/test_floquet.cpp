#include "helpers.hpp"

#include <algorithm>

using namespace exactfw;
using testing_support::max_abs_diff;

namespace {

TimePeriodicHamiltonian reference_scalar(double v1 = 0.2) {
  return floquet_dirac_scalar(1.0, {0, 0, 0.5}, v1, 0.3);
}

} // namespace

TEST(Extended, StaticIsLadderShifted) {
  const auto model = reference_scalar(0.0);
  const auto k = build_extended(model, 1);
  const Matrix h0 = model.modes.at(0).matrix();
  ASSERT_EQ(k.data.side(), 12);
  EXPECT_LE(max_abs_diff(k.data.matrix().block(0, 0, 4, 4), h0 + 0.3 * Matrix::Identity(4, 4)),
            1e-15);
  EXPECT_LE(max_abs_diff(k.data.matrix().block(4, 4, 4, 4), h0), 0.0);
  EXPECT_LE(max_abs_diff(k.data.matrix().block(8, 8, 4, 4), h0 - 0.3 * Matrix::Identity(4, 4)),
            1e-15);
  EXPECT_EQ(k.data.matrix().block(0, 4, 4, 8).norm(), 0.0);
}

TEST(Extended, ScalarDriveIsHermitianTridiagonal) {
  const auto k = build_extended(reference_scalar(), 2);
  EXPECT_LE(detail::hermitian_defect(k.data.matrix()), 0.0);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      const double norm = k.data.matrix().block(4 * a, 4 * b, 4, 4).norm();
      if (std::abs(a - b) > 1) {
        EXPECT_EQ(norm, 0.0);
      } else if (a != b) {
        EXPECT_NEAR(norm, 0.2, 1e-15);
      }
    }
}

TEST(Extended, StaticEigenvaluesAreShiftedEnergies) {
  const int nf = 3;
  const auto k = build_extended(reference_scalar(0.0), nf);
  const auto values = decompose(k.data, Metric::Hermitian).eigenvalues;
  const double e = std::hypot(1.0, 0.5);
  std::vector<double> expected;
  for (int m = -nf; m <= nf; ++m)
    for (const double s : {e, e, -e, -e})
      expected.push_back(s - m * 0.3);
  std::sort(expected.begin(), expected.end());
  for (std::size_t i = 0; i < expected.size(); ++i)
    EXPECT_NEAR(values(static_cast<Eigen::Index>(i)).real(), expected[i], 1e-13);
}

TEST(Extended, TruncationTooSmall) {
  auto model = reference_scalar();
  model.modes.emplace(3, 0.01 * BlockOperator::identity({4, 1}));
  model.modes.emplace(-3, 0.01 * BlockOperator::identity({4, 1}));
  try {
    build_extended(model, 1);
    FAIL() << "expected truncation error";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::TruncationTooSmall);
  }
  EXPECT_NO_THROW(build_extended(model, 2));
}

TEST(Lambda, StaticBlocksAreSectorSigns) {
  const int nf = 2;
  const auto model = reference_scalar(0.0);
  const auto k = build_extended(model, nf);
  const auto lambda = lambda_capital(k);
  for (int a = 0; a < 2 * nf + 1; ++a) {
    const double shift = -(a - nf) * 0.3;
    const BlockOperator sector(model.modes.at(0).matrix() + shift * Matrix::Identity(4, 4),
                               {4, 1});
    EXPECT_LE(max_abs_diff(lambda.matrix().block(4 * a, 4 * a, 4, 4),
                           sign_of(sector, Metric::Hermitian).matrix()),
              1e-13);
  }
}

TEST(Lambda, ScalarDriveIsInvolution) {
  const auto lambda = lambda_capital(build_extended(reference_scalar(), 8));
  EXPECT_LE(identity_defect(lambda * lambda), 1e-10);
}

TEST(Lambda, ResonanceRaisesGapError) {
  // Undriven, omega = E / 2: sectors m = +-2 carry a zero eigenvalue.
  const double e = std::hypot(1.0, 0.75);
  const auto model = floquet_dirac_scalar(1.0, {0, 0, 0.75}, 0.0, e / 2.0);
  try {
    lambda_capital(build_extended(model, 2));
    FAIL() << "expected a spectral gap error";
  } catch (const Error &err) {
    EXPECT_EQ(err.kind(), ErrorKind::SpectralGap);
    EXPECT_NE(std::string(err.what()).find("resonance"), std::string::npos);
  }
}

TEST(LambdaNaive, StaticIsBlockDiagonalCopy) {
  const auto model = reference_scalar(0.0);
  const auto lf = lambda_naive(model, 2);
  const auto lambda0 = sign_of(model.modes.at(0), Metric::Hermitian);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      const Matrix block = lf.matrix().block(4 * a, 4 * b, 4, 4);
      if (a == b) {
        EXPECT_LE(max_abs_diff(block, lambda0.matrix()), 1e-14);
      } else {
        EXPECT_LE(block.norm(), 1e-14);
      }
    }
}

TEST(LambdaNaive, VectorDriveHasSidebands) {
  const auto model = floquet_dirac_vector(1.0, {0, 0, 0.5}, 0.2, 0.3);
  const auto lf = lambda_naive(model, 2);
  EXPECT_GT(lf.matrix().block(0, 4, 4, 4).norm(), 1e-3);
}

TEST(LambdaNaive, SidebandsScaleLinearly) {
  auto band = [](double a1) {
    const auto lf = lambda_naive(floquet_dirac_vector(1.0, {0, 0, 0.5}, a1, 0.3), 2);
    return lf.matrix().block(0, 4, 4, 4).norm();
  };
  const double small = band(1e-4), twice = band(2e-4);
  EXPECT_GT(small, 0.0);
  EXPECT_NEAR(twice / small, 2.0, 1e-3);
}

TEST(LambdaNaive, ScalarDriveCommutesWithH0) {
  // A scalar drive leaves sign(H(t)) constant; its Fourier series has no sidebands.
  const auto lf = lambda_naive(reference_scalar(), 2);
  EXPECT_LE(lf.matrix().block(0, 4, 4, 4).norm(), 1e-14);
}

TEST(LambdaNaive, GaplessInstantRaises) {
  // H(t) = beta m + V1 cos(omega t); with V1 = 2m the sample at omega t = pi/3 is gapless.
  const auto model = floquet_dirac_scalar(1.0, {0, 0, 0}, 2.0, 0.3);
  try {
    lambda_naive(model, 1);
    FAIL() << "expected adiabatic sign failure";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::AdiabaticSignUndefined);
  }
}

TEST(Window, CentralWindowSelectsMiddleSectors) {
  const BlockShape shape{2, 5};
  Matrix a = Matrix::Zero(10, 10);
  a(0, 1) = 5.0; // odd entry in the outermost sector only
  a(4, 4) = 1.0; // even entry in the central sector
  const BlockOperator op(a, shape);
  EXPECT_EQ(central_window_odd_norm(op, 2, 0), 0.0);
  EXPECT_EQ(central_window_odd_norm(op, 2, 1), 0.0);
  EXPECT_GT(central_window_odd_norm(op, 2, 2), 0.9);
  EXPECT_THROW(central_window_odd_norm(op, 2, 3), Error);
}

TEST(Demonstration, StaticBothNormsVanish) {
  const auto report = demonstrate_nonevenness(reference_scalar(0.0), 2, 1, {1, 2, 3});
  EXPECT_LE(report.odd_norm_lambda_naive, 1e-10);
  EXPECT_LE(report.odd_norm_Lambda, 1e-10);
  for (const auto &entry : report.decay_table)
    EXPECT_LE(entry.odd_norm_Lambda, 1e-10);
}

TEST(Demonstration, SmallTruncationScalarDrive) {
  // For nf <= 3 the ladder stays inside the gap and Lambda's denominator is regular.
  const auto report = demonstrate_nonevenness(reference_scalar(), 3, 1);
  EXPECT_LE(report.odd_norm_Lambda, 1e-10);
}

TEST(Demonstration, LargeTruncationLambdaIsDegenerate) {
  // Once |m omega| exceeds the rest energy a whole sector has Lambda = -beta there.
  try {
    demonstrate_nonevenness(reference_scalar(), 8, 4);
    FAIL() << "expected a degenerate Eriksen denominator";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::EriksenDegenerate);
  }
}

TEST(Demonstration, VectorDriveSeparatesAtLowFrequency) {
  const auto model = floquet_dirac_vector(1.0, {0, 0, 0.5}, 0.2, 0.05);
  const auto report = demonstrate_nonevenness(model, 4, 2);
  EXPECT_GT(report.odd_norm_lambda_naive, 1e-4);
  EXPECT_LT(report.odd_norm_Lambda, 1e-10);
  EXPECT_GT(report.odd_norm_lambda_naive, 10.0 * report.odd_norm_Lambda);
}

TEST(Decay, NonincreasingCheck) {
  EXPECT_TRUE(is_nonincreasing({{1, 3.0}, {2, 2.0}, {3, 2.0}}));
  EXPECT_FALSE(is_nonincreasing({{1, 1.0}, {2, 2.0}}));
  EXPECT_TRUE(is_nonincreasing({}));
}

TEST(Nonstationary, VectorDriveIsospectral) {
  const auto model = floquet_dirac_vector(1.0, {0, 0, 0.5}, 0.2, 0.3);
  const auto r = transform_nonstationary(model, 3);
  EXPECT_LE(r.fw.diagnostics.at("spectrum_defect"), 1e-9);
  EXPECT_LE(r.fw.diagnostics.at("window_odd_norm"), 1e-10);
  EXPECT_LE(r.generator.diagnostics.at("oddness_defect"), 1e-10);
}
