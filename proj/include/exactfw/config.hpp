#pragma once

// Run configuration for the command-line front end. JSON on disk, with
// `key=value` overrides applied on top:
//
//   {
//     "model":      {"name": "free-dirac", "params": {"m": 1, "pz": 0.75}},
//     "tolerances": {"tol_struct": 1e-12, "tol_identity": 1e-10, "gap_tol": 1e-8, "eps_clamp": 1e-10},
//     "output":     {"report": "report.json", "dump": false, "dump_dir": "dumps"},
//     "sweep":      {"parameter": "pz", "values": [0.25, 0.5, 0.75]},
//     "floquet":    {"nf": [4, 6, 8, 10, 12], "window": 4}
//   }

#include <exactfw/errors.hpp>
#include <exactfw/models.hpp>
#include <exactfw/tolerances.hpp>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace exactfw {

using Json = nlohmann::json;

struct OutputOptions {
  std::string report;
  bool dump = false;
  std::string dump_dir = "dumps";
};

struct SweepOptions {
  std::string parameter;
  std::vector<double> values;
};

struct FloquetOptions {
  std::vector<int> nf = {4, 6, 8, 10, 12};
  std::optional<int> window;
};

struct RunConfig {
  ModelSpec model;
  Tolerances tolerances;
  OutputOptions output;
  std::optional<SweepOptions> sweep;
  FloquetOptions floquet;
};

namespace detail {

inline double parse_number(const std::string &key, const std::string &text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception &) {
    throw Error(ErrorKind::Usage, "value for '" + key + "' is not numeric: '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(value))
    throw Error(ErrorKind::Usage, "value for '" + key + "' is not numeric: '" + text + "'");
  return value;
}

inline int parse_int(const std::string &key, const std::string &text) {
  const double v = parse_number(key, text);
  if (v != std::floor(v))
    throw Error(ErrorKind::Usage, "value for '" + key + "' must be an integer");
  return static_cast<int>(v);
}

inline std::vector<std::string> split_list(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty())
      out.push_back(item);
  return out;
}

inline bool parse_bool(const std::string &key, const std::string &text) {
  if (text == "true" || text == "1")
    return true;
  if (text == "false" || text == "0")
    return false;
  throw Error(ErrorKind::Usage, "value for '" + key + "' must be true or false");
}

inline double json_number(const Json &j, const std::string &key) {
  if (!j.is_number())
    throw Error(ErrorKind::Usage, "'" + key + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v))
    throw Error(ErrorKind::Usage, "'" + key + "' must be finite");
  return v;
}

inline double *tolerance_slot(Tolerances &tol, const std::string &name) {
  if (name == "tol_struct") return &tol.tol_struct;
  if (name == "tol_identity") return &tol.tol_identity;
  if (name == "gap_tol") return &tol.gap_tol;
  if (name == "eps_clamp") return &tol.eps_clamp;
  if (name == "tol_forms") return &tol.tol_forms;
  if (name == "tol_spectrum") return &tol.tol_spectrum;
  throw Error(ErrorKind::Usage, "unknown tolerance '" + name + "'");
}

} // namespace detail

inline void validate(const RunConfig &config) {
  validate(config.model);
  const Tolerances &t = config.tolerances;
  for (const double v : {t.tol_struct, t.tol_identity, t.gap_tol, t.eps_clamp, t.tol_forms,
                         t.tol_spectrum})
    if (!(v > 0.0 && v < 1.0))
      throw Error(ErrorKind::Usage, "tolerances must lie in (0, 1)");
  if (config.sweep) {
    const auto &params = model_info(config.model.kind).parameters;
    const bool known = std::any_of(params.begin(), params.end(), [&](const ParameterInfo &p) {
      return p.name == config.sweep->parameter;
    });
    if (!known)
      throw Error(ErrorKind::Usage, "sweep parameter '" + config.sweep->parameter +
                                        "' is not a parameter of " +
                                        model_info(config.model.kind).name);
    for (const double v : config.sweep->values)
      if (!std::isfinite(v))
        throw Error(ErrorKind::Usage, "sweep values must be finite");
  }
  for (const int n : config.floquet.nf)
    if (n < 1)
      throw Error(ErrorKind::Usage, "floquet.nf entries must be >= 1");
  if (config.floquet.window && *config.floquet.window < 0)
    throw Error(ErrorKind::Usage, "floquet.window must be >= 0");
}

inline RunConfig config_from_json(const Json &j) {
  if (!j.is_object())
    throw Error(ErrorKind::Usage, "configuration must be a JSON object");
  RunConfig c;
  if (j.contains("model")) {
    const Json &m = j.at("model");
    if (m.is_string()) {
      c.model.kind = parse_model_kind(m.get<std::string>());
    } else {
      if (m.contains("name"))
        c.model.kind = parse_model_kind(m.at("name").get<std::string>());
      if (m.contains("params"))
        for (const auto &[key, value] : m.at("params").items())
          c.model.params[key] = detail::json_number(value, key);
    }
  }
  if (j.contains("tolerances"))
    for (const auto &[key, value] : j.at("tolerances").items())
      *detail::tolerance_slot(c.tolerances, key) = detail::json_number(value, key);
  if (j.contains("output")) {
    const Json &o = j.at("output");
    if (o.contains("report"))
      c.output.report = o.at("report").get<std::string>();
    if (o.contains("dump"))
      c.output.dump = o.at("dump").get<bool>();
    if (o.contains("dump_dir"))
      c.output.dump_dir = o.at("dump_dir").get<std::string>();
  }
  if (j.contains("sweep") && !j.at("sweep").is_null()) {
    SweepOptions s;
    s.parameter = j.at("sweep").at("parameter").get<std::string>();
    for (const auto &v : j.at("sweep").value("values", Json::array()))
      s.values.push_back(detail::json_number(v, "sweep.values"));
    c.sweep = s;
  }
  if (j.contains("floquet")) {
    const Json &f = j.at("floquet");
    if (f.contains("nf")) {
      c.floquet.nf.clear();
      for (const auto &v : f.at("nf"))
        c.floquet.nf.push_back(static_cast<int>(detail::json_number(v, "floquet.nf")));
    }
    if (f.contains("window") && !f.at("window").is_null())
      c.floquet.window = static_cast<int>(detail::json_number(f.at("window"), "floquet.window"));
  }
  return c;
}

inline RunConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::Io, "cannot open configuration '" + path + "'");
  try {
    return config_from_json(Json::parse(in));
  } catch (const Json::exception &e) {
    throw Error(ErrorKind::Usage, std::string("invalid configuration: ") + e.what());
  }
}

/// Apply one `key=value` override. Keys are dotted paths into the
/// configuration; a bare key names a model parameter.
inline void apply_override(RunConfig &c, const std::string &assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw Error(ErrorKind::Usage, "override must have the form key=value: '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  auto starts = [&](const std::string &prefix) { return key.rfind(prefix, 0) == 0; };

  if (key == "model" || key == "model.name") {
    c.model.kind = parse_model_kind(value);
  } else if (starts("model.params.")) {
    c.model.params[key.substr(13)] = detail::parse_number(key, value);
  } else if (starts("model.")) {
    c.model.params[key.substr(6)] = detail::parse_number(key, value);
  } else if (starts("tolerances.")) {
    *detail::tolerance_slot(c.tolerances, key.substr(11)) = detail::parse_number(key, value);
  } else if (key == "output.report") {
    c.output.report = value;
  } else if (key == "output.dump") {
    c.output.dump = detail::parse_bool(key, value);
  } else if (key == "output.dump_dir") {
    c.output.dump_dir = value;
  } else if (key == "sweep.parameter") {
    if (!c.sweep)
      c.sweep = SweepOptions{};
    c.sweep->parameter = value;
  } else if (key == "sweep.values") {
    if (!c.sweep)
      c.sweep = SweepOptions{};
    c.sweep->values.clear();
    for (const auto &item : detail::split_list(value))
      c.sweep->values.push_back(detail::parse_number(key, item));
  } else if (key == "floquet.nf") {
    c.floquet.nf.clear();
    for (const auto &item : detail::split_list(value))
      c.floquet.nf.push_back(detail::parse_int(key, item));
  } else if (key == "floquet.window") {
    c.floquet.window = detail::parse_int(key, value);
  } else if (key.find('.') == std::string::npos) {
    c.model.params[key] = detail::parse_number(key, value);
  } else {
    throw Error(ErrorKind::Usage, "unknown configuration key '" + key + "'");
  }
}

inline Json config_to_json(const RunConfig &c) {
  Json j;
  j["model"]["name"] = model_info(c.model.kind).name;
  Json params = Json::object();
  for (const auto &p : model_info(c.model.kind).parameters)
    params[p.name] = c.model.get(p.name);
  j["model"]["params"] = params;
  const Tolerances &t = c.tolerances;
  j["tolerances"] = {{"tol_struct", t.tol_struct}, {"tol_identity", t.tol_identity},
                     {"gap_tol", t.gap_tol},       {"eps_clamp", t.eps_clamp},
                     {"tol_forms", t.tol_forms},   {"tol_spectrum", t.tol_spectrum}};
  j["output"] = {{"report", c.output.report},
                 {"dump", c.output.dump},
                 {"dump_dir", c.output.dump_dir}};
  if (c.sweep)
    j["sweep"] = {{"parameter", c.sweep->parameter}, {"values", c.sweep->values}};
  else
    j["sweep"] = nullptr;
  j["floquet"]["nf"] = c.floquet.nf;
  j["floquet"]["window"] = c.floquet.window ? Json(*c.floquet.window) : Json(nullptr);
  return j;
}

} // namespace exactfw
