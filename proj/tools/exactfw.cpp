// exactfw: command-line front end.
//
//   exactfw models list [--format text|json]
//   exactfw transform --config run.json --set pz=0.5 --report out.json --dump
//   exactfw sweep     --config run.json --set sweep.values=0.25,0.5 --table out.csv
//   exactfw floquet   --config run.json --set floquet.window=4

#include <exactfw/commands.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct CommonArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string report;
  bool dump = false;
};

void add_common(CLI::App *cmd, CommonArgs &args) {
  cmd->add_option("--config", args.config, "JSON configuration file");
  cmd->add_option("--set", args.overrides, "override a configuration value (key=value)")
      ->take_all()
      ->allow_extra_args(false);
  cmd->add_option("--report", args.report, "write the JSON report to this path");
  cmd->add_flag("--dump", args.dump, "write matrix dumps to output.dump_dir");
}

exactfw::RunConfig assemble(const CommonArgs &args) {
  exactfw::RunConfig config;
  if (!args.config.empty())
    config = exactfw::load_config(args.config);
  for (const auto &o : args.overrides)
    exactfw::apply_override(config, o);
  if (!args.report.empty())
    config.output.report = args.report;
  if (args.dump)
    config.output.dump = true;
  return config;
}

void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path);
  if (!out)
    throw exactfw::Error(exactfw::ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out)
    throw exactfw::Error(exactfw::ErrorKind::Io, "write to '" + path + "' failed");
}

// Writes the report to output.report or stdout; returns the final exit code.
int emit(exactfw::Report &report, const std::string &path) {
  if (report.error)
    std::cerr << "exactfw " << report.command << ": " << *report.error << "\n";
  for (const auto &w : report.warnings)
    std::cerr << "warning: " << w << "\n";
  try {
    if (path.empty())
      std::cout << exactfw::report_text(report);
    else
      write_text(path, exactfw::report_text(report));
  } catch (const exactfw::Error &e) {
    std::cerr << "exactfw: " << e.what() << "\n";
    return exactfw::exit_code(e.kind());
  }
  return report.exit_code;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Exact Foldy-Wouthuysen transformation toolkit"};
  app.require_subcommand(1);

  auto *models = app.add_subcommand("models", "model catalog");
  models->require_subcommand(1);
  auto *list = models->add_subcommand("list", "list models and their parameters");
  std::string format = "text";
  list->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));

  CommonArgs transform_args, sweep_args, floquet_args;
  auto *transform = app.add_subcommand("transform", "exact FW transformation of one model");
  add_common(transform, transform_args);
  auto *sweep = app.add_subcommand("sweep", "transform over a list of parameter values");
  add_common(sweep, sweep_args);
  std::string table;
  sweep->add_option("--table", table, "write the CSV table here instead of stdout");
  auto *floquet = app.add_subcommand("floquet", "instantaneous vs extended-space sign operator");
  add_common(floquet, floquet_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exactfw::exit_codes::usage;
  }

  try {
    if (list->parsed()) {
      if (format == "json")
        std::cout << exactfw::models_json().dump(2) << "\n";
      else
        std::cout << exactfw::models_text();
      return exactfw::exit_codes::ok;
    }
    if (transform->parsed()) {
      const auto config = assemble(transform_args);
      auto report = exactfw::run_transform(config);
      return emit(report, config.output.report);
    }
    if (sweep->parsed()) {
      const auto config = assemble(sweep_args);
      auto out = exactfw::run_sweep(config);
      if (table.empty()) {
        std::cout << out.csv;
        if (config.output.report.empty()) {
          if (out.report.error)
            std::cerr << "exactfw sweep: " << *out.report.error << "\n";
          return out.report.exit_code;
        }
      } else {
        write_text(table, out.csv);
      }
      return emit(out.report, config.output.report);
    }
    if (floquet->parsed()) {
      const auto config = assemble(floquet_args);
      auto report = exactfw::run_floquet(config);
      return emit(report, config.output.report);
    }
  } catch (const exactfw::Error &e) {
    std::cerr << "exactfw: " << e.what() << "\n";
    return exactfw::exit_code(e.kind());
  }
  return exactfw::exit_codes::usage;
}
