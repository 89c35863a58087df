#pragma once

// Command implementations behind the `exactfw` executable. Each command
// returns a Report and an exit code; the executable only parses arguments
// and writes files.

#include <exactfw/config.hpp>
#include <exactfw/eriksen.hpp>
#include <exactfw/expgen.hpp>
#include <exactfw/floquet.hpp>
#include <exactfw/io.hpp>
#include <exactfw/models.hpp>

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace exactfw {

namespace exit_codes {
inline constexpr int ok = 0;
inline constexpr int usage = 2;
inline constexpr int spectral_gap = 3;
inline constexpr int invariant = 4;
inline constexpr int io = 5;
} // namespace exit_codes

inline int exit_code(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::SpectralGap:
  case ErrorKind::AdiabaticSignUndefined:
    return exit_codes::spectral_gap;
  case ErrorKind::Io:
    return exit_codes::io;
  case ErrorKind::Usage:
    return exit_codes::usage;
  default:
    return exit_codes::invariant;
  }
}

/// Relation each verdict-bearing diagnostic checks; used in failure messages.
inline std::string invariant_of(const std::string &name) {
  static const std::map<std::string, std::string> table = {
      {"eriksen.lambda_sq_defect", "lambda^2 = 1"},
      {"eriksen.commutator_bl_lb", "[beta lambda, lambda beta] = 0"},
      {"eriksen.commutator_beta_sum", "[beta, beta lambda + lambda beta] = 0"},
      {"eriksen.eriksen_defect", "beta U = U^+ beta"},
      {"eriksen.unitarity_defect", "U U^+ = 1"},
      {"eriksen.alt_form_defect", "(1 + beta lambda) / sqrt(2 + beta lambda + lambda beta) = "
                                  "(1 + beta lambda) [(1 + beta lambda)^+ (1 + beta lambda)]^(-1/2)"},
      {"eriksen.odd_norm", "U H U^-1 is even"},
      {"eriksen.window_odd_norm", "U K U^-1 is even on the central window"},
      {"eriksen.spectrum_defect", "U H U^-1 has the spectrum of H"},
      {"eriksen.numerator_denominator_commutator", "[1 + beta lambda, 2 + beta lambda + lambda beta] = 0"},
      {"eriksen.lambda_commutes_with_h", "[lambda, H] = 0"},
      {"eriksen.projector_defect", "(1 +- lambda)/2 are projectors mapped onto (1 +- beta)/2"},
      {"eriksen.closed_form_defect", "U H U^-1 = beta sqrt(m^2 + p^2)"},
      {"expgen.oddness_defect", "beta S = -S beta"},
      {"expgen.hermiticity_defect", "S is self-adjoint in the metric"},
      {"expgen.form_agreement_defect", "both arcsin forms of S agree"},
      {"expgen.form_a_commutator", "[i(beta lambda - lambda beta), 2 + beta lambda + lambda beta] = 0"},
      {"expgen.sin2s_defect", "sin 2S = -i(beta lambda - lambda beta)/2"},
      {"expgen.cos2s_defect", "cos 2S = (beta lambda + lambda beta)/2"},
      {"expgen.exp_equivalence_defect", "exp(iS) = U"},
  };
  if (auto it = table.find(name); it != table.end())
    return it->second;
  return "";
}

struct Report {
  std::string command;
  Json config;
  std::map<std::string, double> diagnostics;
  std::map<std::string, bool> verdicts;
  std::map<std::string, double> informational;
  std::map<std::string, double> timings;
  std::vector<std::string> warnings;
  std::vector<std::string> matrix_dumps;
  Json extra = Json::object();
  std::optional<std::string> error;
  int exit_code = exit_codes::ok;

  bool all_pass() const {
    for (const auto &[name, pass] : verdicts)
      if (!pass)
        return false;
    return true;
  }

  void check(const std::string &name, double value, double threshold) {
    diagnostics[name] = value;
    verdicts[name] = value <= threshold;
  }

  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto &[name, pass] : verdicts)
      if (!pass) {
        std::string eq = invariant_of(name);
        out.push_back(name + (eq.empty() ? "" : " (" + eq + ")"));
      }
    return out;
  }
};

inline Json to_json(const Report &r, bool include_timings = true) {
  Json j;
  j["schema_version"] = "1";
  j["command"] = r.command;
  j["config"] = r.config;
  j["diagnostics"] = Json::object();
  for (const auto &[k, v] : r.diagnostics)
    j["diagnostics"][k] = std::isfinite(v) ? Json(v) : Json(nullptr);
  j["verdicts"] = Json::object();
  for (const auto &[k, v] : r.verdicts)
    j["verdicts"][k] = v ? "pass" : "fail";
  j["informational"] = Json::object();
  for (const auto &[k, v] : r.informational)
    j["informational"][k] = std::isfinite(v) ? Json(v) : Json(nullptr);
  if (include_timings)
    j["timings"] = r.timings;
  j["warnings"] = r.warnings;
  j["matrix_dumps"] = r.matrix_dumps;
  for (const auto &[k, v] : r.extra.items())
    j[k] = v;
  j["error"] = r.error ? Json(*r.error) : Json(nullptr);
  j["exit_code"] = r.exit_code;
  return j;
}

inline std::string report_text(const Report &r, bool include_timings = true) {
  return to_json(r, include_timings).dump(2) + "\n";
}

namespace detail {

class Stopwatch {
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

inline void finish(Report &r) {
  if (r.error)
    return;
  if (!r.all_pass()) {
    r.exit_code = exit_codes::invariant;
    std::string msg = "invariant failure:";
    for (const auto &f : r.failures())
      msg += " " + f + ";";
    r.error = msg;
  }
}

inline void record_error(Report &r, const Error &e) {
  r.error = e.what();
  r.exit_code = exit_code(e.kind());
}

/// Lowest eigenvalue of the upper-spinor block of an even operator.
inline double upper_block_ground(const BlockOperator &h_fw, const BetaMatrix &beta) {
  std::vector<Eigen::Index> upper;
  for (Eigen::Index i = 0; i < beta.signs().size(); ++i)
    if (beta.sign(static_cast<int>(i)) > 0)
      upper.push_back(i);
  const auto n = static_cast<Eigen::Index>(upper.size());
  Matrix block(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      block(r, c) = h_fw.matrix()(upper[r], upper[c]);
  return sorted_eigenvalues(block)(0).real();
}

/// Closed-form energy sqrt(m^2 + p^2) for the free models, if any.
inline std::optional<double> closed_form_energy(const ModelSpec &spec) {
  switch (spec.kind) {
  case ModelKind::FreeDirac:
    return dispersion(spec.get("m"), spec.momentum());
  case ModelKind::FeshbachVillars:
    return std::hypot(spec.get("m"), spec.get("p"));
  default:
    return std::nullopt;
  }
}

struct CoreResult {
  std::optional<FWResult> fw;
  std::optional<GeneratorResult> generator;
  std::optional<BlockOperator> hamiltonian;
  std::optional<BetaMatrix> beta;
  std::optional<double> energy;
};

/// split -> sign -> eriksen -> expgen -> verification; fills `r`.
inline CoreResult run_core(const RunConfig &config, Report &r) {
  const Tolerances &tol = config.tolerances;
  const ModelInfo &info = model_info(config.model.kind);
  CoreResult core;
  Metric metric = Metric::Hermitian;
  Stopwatch total;

  if (!info.time_periodic) {
    Stopwatch sw;
    const SplitHamiltonian split = make_stationary(config.model);
    r.timings["split_ms"] = sw.ms();
    metric = split.metric;
    core.hamiltonian = split.hamiltonian();
    core.beta = split.beta;
    Stopwatch se;
    core.fw = transform_stationary(split, tol);
    r.timings["eriksen_ms"] = se.ms();
  } else {
    const TimePeriodicHamiltonian model = make_periodic(config.model);
    const int nf = static_cast<int>(config.model.get("nf"));
    metric = model.metric;
    Stopwatch se;
    NonstationaryResult ns = transform_nonstationary(model, nf, tol, config.floquet.window);
    r.timings["eriksen_ms"] = se.ms();
    core.hamiltonian = ns.extended.data;
    core.beta = ns.extended.beta();
    core.fw = std::move(ns.fw);
    core.generator = std::move(ns.generator);
  }

  const FWResult &fw = *core.fw;
  const BetaMatrix &beta = *core.beta;
  for (const auto &[name, value] : fw.diagnostics) {
    const double threshold = name == "spectrum_defect" && info.time_periodic
                                 ? tol.tol_spectrum
                                 : tol.tol_identity;
    r.check("eriksen." + name, value, threshold);
  }
  for (const auto &[name, value] : fw.informational)
    r.informational["eriksen." + name] = value;

  if (const auto energy = closed_form_energy(config.model)) {
    const BlockOperator expected = *energy * beta.as_operator();
    r.check("eriksen.closed_form_defect", frobenius(fw.h_fw - expected) / *energy, tol.tol_forms);
    core.energy = *energy;
  }

  Stopwatch sg;
  if (!core.generator)
    core.generator = generator_from_lambda(fw.lambda, beta, metric, tol);
  const GeneratorResult &g = *core.generator;
  for (const auto &[name, value] : g.diagnostics)
    r.check("expgen." + name, value,
            name == "form_agreement_defect" ? tol.tol_forms : tol.tol_identity);
  for (const auto &[name, value] : g.informational)
    r.informational["expgen." + name] = value;
  for (const auto &[name, value] : verify_trig_identities(g, fw.lambda, beta, metric, tol))
    r.check("expgen." + name, value, tol.tol_identity);
  r.check("expgen.exp_equivalence_defect",
          verify_exp_equivalence(g, fw.u, metric, tol.tol_struct), tol.tol_forms);
  r.timings["expgen_ms"] = sg.ms();
  r.timings["total_ms"] = total.ms();

  if (g.clamped)
    r.warnings.push_back("arcsin argument clamped to [-1, 1]");
  if (g.informational.at("beta_factored_literal_defect") > tol.tol_forms)
    r.warnings.push_back(
        "beta-factored generator (literal arcsin of the odd argument) disagrees with the "
        "canonical generator; see informational expgen.beta_factored_literal_defect");
  return core;
}

inline void write_dumps(const RunConfig &config, const CoreResult &core, Report &r) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.output.dump_dir, ec);
  if (ec)
    throw Error(ErrorKind::Io, "cannot create dump directory '" + config.output.dump_dir + "'");
  const std::vector<std::pair<std::string, const BlockOperator *>> items = {
      {"hamiltonian.csv", &*core.hamiltonian},
      {"lambda.csv", &core.fw->lambda},
      {"u.csv", &core.fw->u},
      {"h_fw.csv", &core.fw->h_fw},
      {"s.csv", &core.generator->s},
  };
  dump_matrix(core.beta->as_operator(), (fs::path(config.output.dump_dir) / "beta.csv").string());
  r.matrix_dumps.push_back("beta.csv");
  for (const auto &[name, op] : items) {
    dump_matrix(*op, (fs::path(config.output.dump_dir) / name).string());
    r.matrix_dumps.push_back(name);
  }
}

inline double worst(const Report &r, const std::vector<std::string> &names) {
  double out = 0.0;
  for (const auto &n : names)
    if (auto it = r.diagnostics.find(n); it != r.diagnostics.end())
      out = std::max(out, it->second);
  return out;
}

} // namespace detail

// --- models list -----------------------------------------------------------

inline std::string models_text() {
  std::ostringstream out;
  for (const auto &info : model_catalog()) {
    out << info.name << (info.time_periodic ? " (time-periodic)" : "") << "\n  "
        << info.description << "\n";
    for (const auto &p : info.parameters)
      out << "    " << p.name << " = " << p.default_value << "  " << p.description << "\n";
  }
  return out.str();
}

inline Json models_json() {
  Json list = Json::array();
  for (const auto &info : model_catalog()) {
    Json params = Json::array();
    for (const auto &p : info.parameters)
      params.push_back(
          {{"name", p.name}, {"default", p.default_value}, {"description", p.description}});
    list.push_back({{"name", info.name},
                    {"description", info.description},
                    {"time_periodic", info.time_periodic},
                    {"parameters", params}});
  }
  return {{"schema_version", "1"}, {"models", list}};
}

// --- transform ---------------------------------------------------------------

inline Report run_transform(const RunConfig &config) {
  Report r;
  r.command = "transform";
  try {
    validate(config);
    r.config = config_to_json(config);
    const detail::CoreResult core = detail::run_core(config, r);
    const BlockOperator &h_fw = core.fw->h_fw;
    if (h_fw.side() <= 16) {
      Json diag = Json::array();
      for (Eigen::Index i = 0; i < h_fw.matrix().rows(); ++i)
        diag.push_back(h_fw.matrix()(i, i).real());
      r.extra["h_fw_diagonal"] = diag;
    }
    if (config.output.dump)
      detail::write_dumps(config, core, r);
  } catch (const Error &e) {
    if (r.config.is_null())
      r.config = Json::object();
    detail::record_error(r, e);
  }
  detail::finish(r);
  return r;
}

// --- sweep ---------------------------------------------------------------------

struct SweepRow {
  double value = 0.0;
  double max_identity_defect = 0.0;
  double odd_norm = 0.0;
  double s_norm2 = 0.0;
  std::optional<double> energy;
  std::optional<double> dispersion_error;
  std::optional<std::string> error;
};

inline std::string sweep_csv(const std::string &parameter, const std::vector<SweepRow> &rows) {
  auto cell = [](const std::optional<double> &v) { return v ? format_real(*v) : std::string(); };
  std::ostringstream out;
  out << parameter << ",max_identity_defect,odd_norm,s_norm2,energy,dispersion_error\n";
  for (const auto &row : rows) {
    if (row.error) {
      out << format_real(row.value) << ",,,,,\n";
      continue;
    }
    out << format_real(row.value) << ',' << format_real(row.max_identity_defect) << ','
        << format_real(row.odd_norm) << ',' << format_real(row.s_norm2) << ','
        << cell(row.energy) << ',' << cell(row.dispersion_error) << "\n";
  }
  return out.str();
}

struct SweepOutput {
  Report report;
  std::vector<SweepRow> rows;
  std::string csv;
};

inline SweepOutput run_sweep(const RunConfig &config) {
  SweepOutput out;
  Report &r = out.report;
  r.command = "sweep";
  std::string parameter = config.sweep ? config.sweep->parameter : "pz";
  try {
    validate(config);
    r.config = config_to_json(config);
    std::vector<double> values;
    if (config.sweep && !config.sweep->values.empty()) {
      values = config.sweep->values;
    } else {
      if (!config.sweep) {
        const auto &params = model_info(config.model.kind).parameters;
        parameter = params.size() > 1 ? params.back().name : params.front().name;
      }
      values = {config.model.get(parameter)};
    }

    static const std::vector<std::string> identity_names = {
        "eriksen.lambda_sq_defect", "eriksen.commutator_bl_lb", "eriksen.commutator_beta_sum",
        "eriksen.eriksen_defect", "eriksen.unitarity_defect", "eriksen.alt_form_defect",
        "expgen.sin2s_defect", "expgen.cos2s_defect", "expgen.exp_equivalence_defect",
        "expgen.oddness_defect", "expgen.hermiticity_defect"};

    int first_error_code = exit_codes::ok;
    Json rows = Json::array();
    for (const double v : values) {
      RunConfig point = config;
      point.model.params[parameter] = v;
      Report pr;
      SweepRow row;
      row.value = v;
      try {
        validate(point.model);
        const detail::CoreResult core = detail::run_core(point, pr);
        row.max_identity_defect = detail::worst(pr, identity_names);
        row.odd_norm = pr.diagnostics.at("eriksen.odd_norm");
        row.s_norm2 = pr.informational.at("expgen.s_norm2");
        if (!model_info(point.model.kind).time_periodic)
          row.energy = detail::upper_block_ground(core.fw->h_fw, *core.beta);
        if (core.energy && row.energy)
          row.dispersion_error = std::abs(*row.energy - *core.energy);
        for (const auto &[name, value] : pr.diagnostics) {
          r.diagnostics[name] = std::max(r.diagnostics[name], value);
          r.verdicts[name] = r.verdicts.contains(name) ? r.verdicts[name] && pr.verdicts[name]
                                                       : pr.verdicts[name];
        }
        for (const auto &w : pr.warnings)
          if (std::find(r.warnings.begin(), r.warnings.end(), w) == r.warnings.end())
            r.warnings.push_back(w);
      } catch (const Error &e) {
        row.error = e.what();
        if (first_error_code == exit_codes::ok)
          first_error_code = exit_code(e.kind());
      }
      Json jr = {{"value", v},
                 {"max_identity_defect", row.max_identity_defect},
                 {"odd_norm", row.odd_norm},
                 {"s_norm2", row.s_norm2},
                 {"energy", row.energy ? Json(*row.energy) : Json(nullptr)},
                 {"dispersion_error",
                  row.dispersion_error ? Json(*row.dispersion_error) : Json(nullptr)},
                 {"error", row.error ? Json(*row.error) : Json(nullptr)}};
      rows.push_back(jr);
      out.rows.push_back(row);
    }
    r.extra["sweep_parameter"] = parameter;
    r.extra["rows"] = rows;
    if (first_error_code != exit_codes::ok) {
      r.exit_code = first_error_code;
      r.error = "one or more sweep points failed; see rows";
    }
  } catch (const Error &e) {
    if (r.config.is_null())
      r.config = Json::object();
    detail::record_error(r, e);
  }
  detail::finish(r);
  out.csv = sweep_csv(parameter, out.rows);
  return out;
}

// --- floquet ---------------------------------------------------------------------

inline Report run_floquet(const RunConfig &config) {
  Report r;
  r.command = "floquet";
  try {
    validate(config);
    r.config = config_to_json(config);
    const TimePeriodicHamiltonian model = make_periodic(config.model);
    const Tolerances &tol = config.tolerances;
    const int nf = static_cast<int>(config.model.get("nf"));
    const int window = config.floquet.window.value_or(default_window(nf));
    if (window > nf)
      throw Error(ErrorKind::Usage, "window exceeds truncation order nf");
    if (window == nf)
      r.warnings.push_back("window equals truncation; edge effects dominate");

    const ExtendedOperator k = build_extended(model, nf);
    std::map<std::string, std::string> errors;
    std::optional<ErrorKind> first_error;
    auto attempt = [&](const std::string &name, auto &&fn) -> std::optional<double> {
      try {
        return fn();
      } catch (const Error &e) {
        errors[name] = e.what();
        if (!first_error)
          first_error = e.kind();
        return std::nullopt;
      }
    };

    detail::Stopwatch sw;
    const auto naive = attempt("odd_norm_lambda_naive", [&] {
      return measure_naive(model, k, window, tol).window_odd_norm;
    });
    const auto capital = attempt("odd_norm_Lambda", [&] {
      return measure_capital(k, window, tol).window_odd_norm;
    });
    r.timings["central_ms"] = sw.ms();

    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.diagnostics["floquet.odd_norm_lambda_naive"] = naive.value_or(nan);
    r.diagnostics["floquet.odd_norm_Lambda"] = capital.value_or(nan);
    const bool both = naive && capital;
    if (model.is_static()) {
      const bool pass = both && *naive <= tol.tol_identity && *capital <= tol.tol_identity;
      r.verdicts["floquet.odd_norm_lambda_naive"] = pass;
      r.verdicts["floquet.odd_norm_Lambda"] = pass;
    } else {
      const bool ordering = both && *naive > 10.0 * *capital;
      r.verdicts["floquet.odd_norm_lambda_naive"] = ordering;
      r.verdicts["floquet.odd_norm_Lambda"] = ordering;
    }

    detail::Stopwatch sd;
    Json table = Json::array();
    std::vector<DecayEntry> decay;
    int previous = 0;
    for (const int n : config.floquet.nf) {
      if (n <= previous)
        throw Error(ErrorKind::Usage, "floquet.nf must be strictly increasing");
      previous = n;
      const std::string name = "floquet.decay.nf=" + std::to_string(n);
      const auto value = attempt(name, [&] {
        return measure_capital(build_extended(model, n), std::min(window, n), tol)
            .window_odd_norm;
      });
      table.push_back({{"nf", n}, {"odd_norm_Lambda", value ? Json(*value) : Json(nullptr)}});
      r.diagnostics[name] = value.value_or(nan);
      if (value)
        decay.push_back({n, *value});
    }
    r.timings["decay_ms"] = sd.ms();
    const bool complete = decay.size() == config.floquet.nf.size();
    if (model.is_static()) {
      // Nothing to converge: every truncation is already exact.
      for (const int n : config.floquet.nf) {
        const std::string name = "floquet.decay.nf=" + std::to_string(n);
        r.verdicts[name] = r.diagnostics[name] <= tol.tol_identity;
      }
    } else {
      const bool monotone = complete && is_nonincreasing(decay);
      for (const int n : config.floquet.nf)
        r.verdicts["floquet.decay.nf=" + std::to_string(n)] = monotone;
    }

    r.extra["floquet"] = {{"nf", nf},
                          {"window", window},
                          {"odd_norm_lambda_naive", naive ? Json(*naive) : Json(nullptr)},
                          {"odd_norm_Lambda", capital ? Json(*capital) : Json(nullptr)},
                          {"decay_table", table},
                          {"errors", errors}};
    if (first_error) {
      r.exit_code = exit_code(*first_error);
      r.error = errors.begin()->second;
    }
  } catch (const Error &e) {
    if (r.config.is_null())
      r.config = Json::object();
    detail::record_error(r, e);
  }
  detail::finish(r);
  return r;
}

} // namespace exactfw
