#pragma once

// Finite-dimensional Hamiltonians in the standard Dirac-Pauli basis:
//   beta = diag(1, 1, -1, -1),  alpha_i = [[0, sigma_i], [sigma_i, 0]].
// Natural units, hbar = c = 1.

#include <exactfw/blockop.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

namespace exactfw {

using Momentum = std::array<double, 3>;

namespace dirac {

inline Eigen::Matrix2cd pauli(int axis) {
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd s;
  switch (axis) {
  case 0: s << 0, 1, 1, 0; break;
  case 1: s << 0, -i, i, 0; break;
  case 2: s << 1, 0, 0, -1; break;
  default: throw Error(ErrorKind::Structural, "pauli axis must be 0, 1 or 2");
  }
  return s;
}

inline Eigen::Matrix4cd alpha(int axis) {
  Eigen::Matrix4cd a = Eigen::Matrix4cd::Zero();
  a.topRightCorner<2, 2>() = pauli(axis);
  a.bottomLeftCorner<2, 2>() = pauli(axis);
  return a;
}

inline Eigen::Matrix4cd beta() {
  return Eigen::Vector4cd(1, 1, -1, -1).asDiagonal();
}

/// alpha . p + beta m
inline Eigen::Matrix4cd hamiltonian(double m, const Momentum &p) {
  return alpha(0) * p[0] + alpha(1) * p[1] + alpha(2) * p[2] + beta() * m;
}

} // namespace dirac

inline double momentum_norm(const Momentum &p) { return std::hypot(p[0], p[1], p[2]); }

/// sqrt(m^2 + |p|^2)
inline double dispersion(double m, const Momentum &p) { return std::hypot(m, momentum_norm(p)); }

inline SplitHamiltonian free_dirac(double m, const Momentum &p) {
  if (!(m > 0.0))
    throw Error(ErrorKind::Structural, "mass must be positive");
  const BlockShape shape{4, 1};
  const BlockOperator odd{
      Matrix(dirac::alpha(0) * p[0] + dirac::alpha(1) * p[1] + dirac::alpha(2) * p[2]), shape};
  SplitHamiltonian s{m * BlockOperator::identity(shape), BlockOperator::zero(shape), odd,
                     BetaMatrix(shape), Metric::Hermitian};
  validate(s);
  return s;
}

/// -i d/dx on N uniform periodic points of [0, L), built from the discrete
/// Fourier basis with momenta 2 pi n / L, n in [-N/2, N/2).
inline Matrix spectral_momentum(int n_points, double length) {
  const int n = n_points;
  Matrix p = Matrix::Zero(n, n);
  const double dx = length / n;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      Complex sum = 0.0;
      for (int q = -n / 2; q < n / 2; ++q) {
        const double k = 2.0 * std::numbers::pi * q / length;
        sum += k * std::exp(Complex(0.0, k * (j - l) * dx));
      }
      p(j, l) = sum / static_cast<double>(n);
    }
  return p;
}

inline std::vector<double> grid_momenta(int n_points, double length) {
  std::vector<double> k;
  for (int q = -n_points / 2; q < n_points / 2; ++q)
    k.push_back(2.0 * std::numbers::pi * q / length);
  return k;
}

using Potential = std::function<Complex(double)>;

/// 1-D Dirac particle on a periodic grid with a scalar potential. Grid-major
/// layout: index = site * 4 + spinor component, so copies = N.
///   O = P (x) alpha_x,  E = diag(V(x_j)) (x) I_4,  M = m I.
inline SplitHamiltonian dirac_1d(double m, int n_points, double length,
                                 const Potential &potential) {
  if (!(m > 0.0))
    throw Error(ErrorKind::Structural, "mass must be positive");
  if (n_points < 8 || n_points % 2 != 0)
    throw Error(ErrorKind::Structural, "grid size must be even and >= 8");
  if (!(length > 0.0))
    throw Error(ErrorKind::Structural, "box length must be positive");

  const BlockShape shape{4, n_points};
  const Matrix p = spectral_momentum(n_points, length);
  const Eigen::Matrix4cd ax = dirac::alpha(0);

  Matrix odd = Matrix::Zero(shape.side(), shape.side());
  Matrix even = Matrix::Zero(shape.side(), shape.side());
  for (int j = 0; j < n_points; ++j) {
    const Complex v = potential(j * length / n_points);
    if (v.imag() != 0.0)
      throw Error(ErrorKind::MetricViolation, "potential is not real");
    even.block<4, 4>(4 * j, 4 * j) = v * Eigen::Matrix4cd::Identity();
    for (int l = 0; l < n_points; ++l)
      odd.block<4, 4>(4 * j, 4 * l) = p(j, l) * ax;
  }
  SplitHamiltonian s{m * BlockOperator::identity(shape), BlockOperator(even, shape),
                     BlockOperator(odd, shape), BetaMatrix(shape), Metric::Hermitian};
  validate(s);
  return s;
}

/// Spin-0 Feshbach-Villars Hamiltonian for a free particle,
///   H = (tau_3 + i tau_2) p^2 / 2m + tau_3 m,
/// which is beta-pseudo-Hermitian with beta = tau_3. The even kinetic term is
/// carried by M = (m + p^2/2m) I so that E = 0.
inline SplitHamiltonian feshbach_villars(double m, double p) {
  if (!(m > 0.0))
    throw Error(ErrorKind::Structural, "mass must be positive");
  const double kinetic = p * p / (2.0 * m);
  const BlockShape shape{2, 1};
  Matrix odd(2, 2);
  odd << 0.0, kinetic, -kinetic, 0.0;
  SplitHamiltonian s{(m + kinetic) * BlockOperator::identity(shape),
                     BlockOperator::zero(shape), BlockOperator(odd, shape), BetaMatrix(shape),
                     Metric::BetaPseudo};
  validate(s);
  return s;
}

/// Fourier modes of a time-periodic Hamiltonian,
///   H(t) = sum_n H_n exp(-i n omega t),  H_{-n} = H_n^dagger (metric adjoint).
struct TimePeriodicHamiltonian {
  std::map<int, BlockOperator> modes;
  double omega = 1.0;
  Metric metric = Metric::Hermitian;

  const BlockShape &shape() const { return modes.at(0).shape(); }
  BetaMatrix beta() const { return BetaMatrix(shape()); }
  bool is_static() const { return modes.size() == 1; }

  BlockOperator at(double t) const {
    BlockOperator h = BlockOperator::zero(shape());
    for (const auto &[n, hn] : modes)
      h += std::exp(Complex(0.0, -n * omega * t)) * hn;
    return h;
  }
};

inline void validate(const TimePeriodicHamiltonian &model, double tol_struct = 1e-12) {
  if (!model.modes.contains(0))
    throw Error(ErrorKind::Structural, "time-periodic model has no n = 0 mode");
  if (!(model.omega > 0.0))
    throw Error(ErrorKind::Structural, "drive frequency must be positive");
  const BetaMatrix beta = model.beta();
  for (const auto &[n, hn] : model.modes) {
    const auto partner = model.modes.find(-n);
    if (partner == model.modes.end())
      throw Error(ErrorKind::MetricViolation, "mode " + std::to_string(n) + " has no partner");
    const double scale = std::max(frobenius(hn), 1.0);
    if (frobenius(partner->second - adjoint_m(hn, model.metric, beta)) > tol_struct * scale)
      throw Error(ErrorKind::MetricViolation,
                  "mode " + std::to_string(-n) + " is not the adjoint of mode " +
                      std::to_string(n));
  }
}

/// H(t) = alpha.p + beta m + V1 cos(omega t) I
inline TimePeriodicHamiltonian floquet_dirac_scalar(double m, const Momentum &p, double v1,
                                                    double omega) {
  if (!(m > 0.0))
    throw Error(ErrorKind::Structural, "mass must be positive");
  const BlockShape shape{4, 1};
  TimePeriodicHamiltonian model;
  model.omega = omega;
  model.modes.emplace(0, BlockOperator(Matrix(dirac::hamiltonian(m, p)), shape));
  if (v1 != 0.0) {
    const BlockOperator drive = (0.5 * v1) * BlockOperator::identity(shape);
    model.modes.emplace(1, drive);
    model.modes.emplace(-1, drive);
  }
  validate(model);
  return model;
}

/// H(t) = alpha.(p - A(t) z) + beta m with A(t) = A1 cos(omega t)
inline TimePeriodicHamiltonian floquet_dirac_vector(double m, const Momentum &p, double a1,
                                                    double omega) {
  if (!(m > 0.0))
    throw Error(ErrorKind::Structural, "mass must be positive");
  const BlockShape shape{4, 1};
  TimePeriodicHamiltonian model;
  model.omega = omega;
  model.modes.emplace(0, BlockOperator(Matrix(dirac::hamiltonian(m, p)), shape));
  if (a1 != 0.0) {
    const BlockOperator drive(Matrix(-0.5 * a1 * dirac::alpha(2)), shape);
    model.modes.emplace(1, drive);
    model.modes.emplace(-1, drive);
  }
  validate(model);
  return model;
}

// --- model catalog -------------------------------------------------------

enum class ModelKind { FreeDirac, Dirac1D, FeshbachVillars, FloquetDiracScalar, FloquetDiracVector };

struct ParameterInfo {
  std::string name;
  double default_value;
  std::string description;
};

struct ModelInfo {
  ModelKind kind;
  std::string name;
  std::string description;
  std::vector<ParameterInfo> parameters;
  bool time_periodic;
};

inline const std::vector<ModelInfo> &model_catalog() {
  static const std::vector<ModelInfo> catalog = {
      {ModelKind::FreeDirac,
       "free-dirac",
       "Free spin-1/2 Dirac particle, 4x4, H = alpha.p + beta m",
       {{"m", 1.0, "mass"}, {"px", 0.0, "momentum x"}, {"py", 0.0, "momentum y"},
        {"pz", 0.75, "momentum z"}},
       false},
      {ModelKind::Dirac1D,
       "dirac-1d",
       "Dirac particle on a periodic 1-D grid, V(x) = V0 + V1 cos(2 pi x / L)",
       {{"m", 1.0, "mass"}, {"N", 32, "grid points (power of two >= 8)"},
        {"L", 2.0 * std::numbers::pi, "box length"}, {"V0", 0.0, "constant potential"},
        {"V1", 0.2, "cosine potential amplitude"}},
       false},
      {ModelKind::FeshbachVillars,
       "feshbach-villars",
       "Free spin-0 particle in Feshbach-Villars form, 2x2, beta-pseudo-Hermitian",
       {{"m", 1.0, "mass"}, {"p", 0.75, "momentum"}},
       false},
      {ModelKind::FloquetDiracScalar,
       "floquet-dirac-scalar",
       "Dirac particle with scalar drive V1 cos(omega t)",
       {{"m", 1.0, "mass"}, {"px", 0.0, "momentum x"}, {"py", 0.0, "momentum y"},
        {"pz", 0.5, "momentum z"}, {"V1", 0.2, "drive amplitude"},
        {"omega", 0.3, "drive frequency"}, {"nf", 8, "Floquet truncation order"}},
       true},
      {ModelKind::FloquetDiracVector,
       "floquet-dirac-vector",
       "Dirac particle with vector potential A1 cos(omega t) along z",
       {{"m", 1.0, "mass"}, {"px", 0.0, "momentum x"}, {"py", 0.0, "momentum y"},
        {"pz", 0.5, "momentum z"}, {"A1", 0.2, "vector potential amplitude"},
        {"omega", 0.3, "drive frequency"}, {"nf", 8, "Floquet truncation order"}},
       true},
  };
  return catalog;
}

inline const ModelInfo &model_info(ModelKind kind) {
  for (const auto &info : model_catalog())
    if (info.kind == kind)
      return info;
  throw Error(ErrorKind::Usage, "unknown model kind");
}

/// Accepts the catalog name ("free-dirac") or the type name ("FreeDirac").
inline ModelKind parse_model_kind(const std::string &name) {
  static const std::map<std::string, ModelKind> aliases = {
      {"FreeDirac", ModelKind::FreeDirac},
      {"Dirac1D", ModelKind::Dirac1D},
      {"FeshbachVillars", ModelKind::FeshbachVillars},
      {"FloquetDiracScalar", ModelKind::FloquetDiracScalar},
      {"FloquetDiracVector", ModelKind::FloquetDiracVector},
  };
  for (const auto &info : model_catalog())
    if (info.name == name)
      return info.kind;
  if (auto it = aliases.find(name); it != aliases.end())
    return it->second;
  throw Error(ErrorKind::Usage, "unknown model '" + name + "'");
}

struct ModelSpec {
  ModelKind kind = ModelKind::FreeDirac;
  std::map<std::string, double> params;

  /// Parameter value, falling back to the catalog default.
  double get(const std::string &key) const {
    if (auto it = params.find(key); it != params.end())
      return it->second;
    for (const auto &p : model_info(kind).parameters)
      if (p.name == key)
        return p.default_value;
    throw Error(ErrorKind::Usage, "model has no parameter '" + key + "'");
  }
  Momentum momentum() const { return {get("px"), get("py"), get("pz")}; }
};

inline void validate(const ModelSpec &spec) {
  const ModelInfo &info = model_info(spec.kind);
  for (const auto &[key, value] : spec.params) {
    const bool known = std::any_of(info.parameters.begin(), info.parameters.end(),
                                   [&](const ParameterInfo &p) { return p.name == key; });
    if (!known)
      throw Error(ErrorKind::Usage, "model " + info.name + " has no parameter '" + key + "'");
    if (!std::isfinite(value))
      throw Error(ErrorKind::Usage, "parameter '" + key + "' is not finite");
  }
  if (!(spec.get("m") > 0.0))
    throw Error(ErrorKind::Usage, "mass m must be positive");
  if (spec.kind == ModelKind::Dirac1D) {
    const double n = spec.get("N");
    const auto ni = static_cast<long>(n);
    if (n != static_cast<double>(ni) || ni < 8 || (ni & (ni - 1)) != 0)
      throw Error(ErrorKind::Usage, "grid size N must be a power of two >= 8");
  }
  if (info.time_periodic) {
    if (!(spec.get("omega") > 0.0))
      throw Error(ErrorKind::Usage, "omega must be positive");
    const double nf = spec.get("nf");
    if (nf < 1 || nf != std::floor(nf))
      throw Error(ErrorKind::Usage, "nf must be an integer >= 1");
  }
}

inline SplitHamiltonian make_stationary(const ModelSpec &spec) {
  validate(spec);
  switch (spec.kind) {
  case ModelKind::FreeDirac:
    return free_dirac(spec.get("m"), spec.momentum());
  case ModelKind::Dirac1D: {
    const double v0 = spec.get("V0"), v1 = spec.get("V1"), length = spec.get("L");
    return dirac_1d(spec.get("m"), static_cast<int>(spec.get("N")), length,
                    [=](double x) {
                      return Complex(v0 + v1 * std::cos(2.0 * std::numbers::pi * x / length), 0.0);
                    });
  }
  case ModelKind::FeshbachVillars:
    return feshbach_villars(spec.get("m"), spec.get("p"));
  default:
    throw Error(ErrorKind::Usage, model_info(spec.kind).name + " is time-periodic");
  }
}

inline TimePeriodicHamiltonian make_periodic(const ModelSpec &spec) {
  validate(spec);
  switch (spec.kind) {
  case ModelKind::FloquetDiracScalar:
    return floquet_dirac_scalar(spec.get("m"), spec.momentum(), spec.get("V1"),
                                spec.get("omega"));
  case ModelKind::FloquetDiracVector:
    return floquet_dirac_vector(spec.get("m"), spec.momentum(), spec.get("A1"),
                                spec.get("omega"));
  default:
    throw Error(ErrorKind::Usage, model_info(spec.kind).name + " is stationary");
  }
}

} // namespace exactfw
