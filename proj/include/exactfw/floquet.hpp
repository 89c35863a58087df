#pragma once

// Truncated Floquet realization of H(t) - i d/dt for time-periodic fields.
//
// Sector m (|m| <= nf) carries the Fourier component exp(-i m omega t):
//   K_{mn} = H_{m-n} - m omega delta_{mn}.
// The ladder -m omega is proportional to the identity inside each sector, so
// it is even; K is graded by beta replicated over the 2 nf + 1 sectors.
//
// Two sign operators are compared on this space:
//   Lambda        = K / sqrt(K^2), the sign of the extended operator;
//   lambda_naive  = Toeplitz matrix of the Fourier modes of sign(H(t)).
// The exact transformation built from Lambda makes K even; the one built
// from the instantaneous sign does not once lambda(t) depends on time.

#include <exactfw/blockop.hpp>
#include <exactfw/eriksen.hpp>
#include <exactfw/expgen.hpp>
#include <exactfw/matfun.hpp>
#include <exactfw/models.hpp>
#include <exactfw/tolerances.hpp>

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace exactfw {

struct ExtendedOperator {
  BlockOperator data;
  double omega = 1.0;
  int nf = 1;
  int internal_dim = 4;
  Metric metric = Metric::Hermitian;

  int sectors() const { return 2 * nf + 1; }
  /// Side of one Floquet sector (internal block times any spatial copies).
  int sector_side() const { return data.side() / sectors(); }
  BetaMatrix beta() const { return BetaMatrix(data.shape()); }
};

inline BlockShape extended_shape(const BlockShape &inner, int nf) {
  return {inner.internal_dim, inner.copies * (2 * nf + 1)};
}

inline ExtendedOperator build_extended(const TimePeriodicHamiltonian &model, int nf) {
  if (nf < 1)
    throw Error(ErrorKind::Structural, "nf must be >= 1");
  validate(model);
  for (const auto &[n, hn] : model.modes)
    if (std::abs(n) > 2 * nf)
      throw Error(ErrorKind::TruncationTooSmall,
                  "mode " + std::to_string(n) + " exceeds 2 nf = " + std::to_string(2 * nf));

  const int block = model.shape().side();
  const int sectors = 2 * nf + 1;
  Matrix k = Matrix::Zero(block * sectors, block * sectors);
  for (int a = 0; a < sectors; ++a) {
    for (int b = 0; b < sectors; ++b)
      if (auto it = model.modes.find(a - b); it != model.modes.end())
        k.block(a * block, b * block, block, block) = it->second.matrix();
    const double ladder = -static_cast<double>(a - nf) * model.omega;
    k.block(a * block, a * block, block, block).diagonal().array() += ladder;
  }
  return {BlockOperator(std::move(k), extended_shape(model.shape(), nf)), model.omega, nf,
          model.shape().internal_dim, model.metric};
}

/// Lambda = K / sqrt(K^2).
inline BlockOperator lambda_capital(const ExtendedOperator &k, double gap_tol = 1e-8,
                                    double tol_struct = 1e-12) {
  try {
    return sign_of(k.data, k.metric, gap_tol, tol_struct);
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::SpectralGap)
      throw Error(ErrorKind::SpectralGap,
                  std::string(e.what()) +
                      "; quasienergy resonance: adjust omega or add detuning");
    throw;
  }
}

inline int time_samples(int nf) { return 4 * (2 * nf + 1); }

/// Fourier modes lambda_k of sign(H(t)) sampled on one period, arranged as the
/// block-Toeplitz matrix (lambda_F)_{mn} = lambda_{m-n}.
inline BlockOperator lambda_naive(const TimePeriodicHamiltonian &model, int nf,
                                  double gap_tol = 1e-8, double tol_struct = 1e-12) {
  if (nf < 1)
    throw Error(ErrorKind::Structural, "nf must be >= 1");
  validate(model);
  const int samples = time_samples(nf);
  const double period = 2.0 * std::numbers::pi / model.omega;
  std::vector<Matrix> signs;
  std::vector<double> times;
  for (int j = 0; j < samples; ++j) {
    const double t = period * j / samples;
    try {
      signs.push_back(sign_of(model.at(t), model.metric, gap_tol, tol_struct).matrix());
    } catch (const Error &e) {
      if (e.kind() == ErrorKind::SpectralGap)
        throw Error(ErrorKind::AdiabaticSignUndefined,
                    "H(t) is gapless at t = " + describe(t));
      throw;
    }
    times.push_back(t);
  }

  const int block = model.shape().side();
  const int sectors = 2 * nf + 1;
  std::vector<Matrix> coefficients;
  for (int k = -2 * nf; k <= 2 * nf; ++k) {
    Matrix c = Matrix::Zero(block, block);
    for (int j = 0; j < samples; ++j)
      c += std::exp(Complex(0.0, k * model.omega * times[j])) * signs[j];
    coefficients.push_back(c / static_cast<double>(samples));
  }
  Matrix out(block * sectors, block * sectors);
  for (int a = 0; a < sectors; ++a)
    for (int b = 0; b < sectors; ++b)
      out.block(a * block, b * block, block, block) = coefficients[a - b + 2 * nf];
  return {std::move(out), extended_shape(model.shape(), nf)};
}

/// Relative odd-part norm restricted to the sectors |m| <= window.
inline double central_window_odd_norm(const BlockOperator &h, int nf, int window) {
  if (window < 0 || window > nf)
    throw Error(ErrorKind::Usage, "window must lie in [0, nf]");
  const int sector = h.side() / (2 * nf + 1);
  const int first = (nf - window) * sector;
  const int size = (2 * window + 1) * sector;
  const BlockShape inner{h.shape().internal_dim, size / h.shape().internal_dim};
  const BlockOperator sub(h.matrix().block(first, first, size, size), inner);
  return relative_odd_norm(sub, BetaMatrix(inner));
}

struct ExtendedTransform {
  BlockOperator lambda;
  BlockOperator u;
  BlockOperator u_inverse;
  BlockOperator k_fw;
  double window_odd_norm = 0.0;
  double odd_norm = 0.0;
  double spectrum_defect = 0.0;
};

/// Transformation built from Lambda; U^-1 is the metric adjoint.
inline ExtendedTransform measure_capital(const ExtendedOperator &k, int window,
                                         const Tolerances &tol = {}) {
  const BetaMatrix beta = k.beta();
  ExtendedTransform r;
  r.lambda = lambda_capital(k, tol.gap_tol, tol.tol_struct);
  r.u = eriksen_unitary(r.lambda, beta, k.metric, {true, 1e-8, tol.tol_struct});
  r.u_inverse = adjoint_m(r.u, k.metric, beta);
  r.k_fw = r.u * k.data * r.u_inverse;
  r.window_odd_norm = central_window_odd_norm(r.k_fw, k.nf, window);
  r.odd_norm = relative_odd_norm(r.k_fw, beta);
  r.spectrum_defect = spectrum_defect(k.data, r.k_fw, k.metric);
  return r;
}

/// Transformation built from the instantaneous sign. lambda_F is an
/// involution only up to truncation, so U is not exactly unitary and K is
/// transformed with the explicit inverse to keep it a similarity.
inline ExtendedTransform measure_naive(const TimePeriodicHamiltonian &model,
                                       const ExtendedOperator &k, int window,
                                       const Tolerances &tol = {}) {
  const BetaMatrix beta = k.beta();
  ExtendedTransform r;
  r.lambda = lambda_naive(model, k.nf, tol.gap_tol, tol.tol_struct);
  r.u = eriksen_unitary(r.lambda, beta, k.metric, {false, 1e-8, tol.tol_struct});
  r.u_inverse = r.u.with(r.u.matrix().partialPivLu().inverse());
  r.k_fw = r.u * k.data * r.u_inverse;
  r.window_odd_norm = central_window_odd_norm(r.k_fw, k.nf, window);
  r.odd_norm = relative_odd_norm(r.k_fw, beta);
  r.spectrum_defect = spectrum_defect(k.data, r.k_fw, k.metric);
  return r;
}

struct DecayEntry {
  int nf = 0;
  double odd_norm_Lambda = 0.0;
};

struct FloquetReport {
  double odd_norm_lambda_naive = 0.0;
  double odd_norm_Lambda = 0.0;
  int window = 0;
  std::vector<DecayEntry> decay_table;
};

inline int default_window(int nf) { return std::max(nf / 2, 1); }

/// Odd norms of K transformed by U(lambda_naive) and U(Lambda), measured on
/// the central window, plus the Lambda odd norm over a list of truncations.
inline FloquetReport demonstrate_nonevenness(const TimePeriodicHamiltonian &model, int nf,
                                             int window, const std::vector<int> &decay_nfs = {},
                                             const Tolerances &tol = {}) {
  const ExtendedOperator k = build_extended(model, nf);
  FloquetReport report;
  report.window = window;
  report.odd_norm_lambda_naive = measure_naive(model, k, window, tol).window_odd_norm;
  report.odd_norm_Lambda = measure_capital(k, window, tol).window_odd_norm;
  int previous = 0;
  for (const int n : decay_nfs) {
    if (n <= previous)
      throw Error(ErrorKind::Usage, "decay truncations must be strictly increasing");
    previous = n;
    const ExtendedOperator kn = build_extended(model, n);
    report.decay_table.push_back(
        {n, measure_capital(kn, std::min(window, n), tol).window_odd_norm});
  }
  return report;
}

inline bool is_nonincreasing(const std::vector<DecayEntry> &table) {
  for (std::size_t i = 1; i < table.size(); ++i)
    if (table[i].odd_norm_Lambda > table[i - 1].odd_norm_Lambda)
      return false;
  return true;
}

struct NonstationaryResult {
  ExtendedOperator extended;
  FWResult fw;
  GeneratorResult generator;
};

/// Exact transformation on the extended space with lambda replaced by Lambda,
/// including the exponential generator built from Lambda.
inline NonstationaryResult transform_nonstationary(const TimePeriodicHamiltonian &model, int nf,
                                                   const Tolerances &tol = {},
                                                   std::optional<int> window = std::nullopt) {
  NonstationaryResult r{build_extended(model, nf), {}, {}};
  const ExtendedOperator &k = r.extended;
  const BetaMatrix beta = k.beta();
  const int win = window.value_or(default_window(nf));

  const ExtendedTransform t = measure_capital(k, win, tol);
  FWResult &fw = r.fw;
  fw.lambda = t.lambda;
  fw.u = t.u;
  fw.u_inverse = t.u_inverse;
  fw.h_fw = t.k_fw;
  fw.diagnostics = verify_eriksen_identities(fw.lambda, fw.u, beta, k.metric);
  fw.informational["eriksen_defect_raw"] = fw.diagnostics.at("eriksen_defect_raw");
  fw.diagnostics.erase("eriksen_defect_raw");
  fw.diagnostics["odd_norm"] = t.odd_norm;
  fw.diagnostics["window_odd_norm"] = t.window_odd_norm;
  fw.diagnostics["spectrum_defect"] = t.spectrum_defect;
  fw.diagnostics["alt_form_defect"] =
      relative_defect(eriksen_unitary_alt(fw.lambda, beta, k.metric, tol.tol_struct) - fw.u);
  fw.diagnostics["lambda_commutes_with_h"] =
      frobenius(commutator(fw.lambda, k.data)) / std::max(frobenius(k.data), 1e-300);

  r.generator = generator_from_lambda(fw.lambda, beta, k.metric, tol);
  return r;
}

} // namespace exactfw
