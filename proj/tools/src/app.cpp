#include "potopt_cli/app.hpp"

#include <fstream>
#include <thread>

#include "CLI11.hpp"
#include "potopt/error.hpp"
#include "potopt_cli/config.hpp"
#include "potopt_cli/runner.hpp"
#include "recipes.hpp"

namespace potopt::cli {
namespace {

int run_config(const ExperimentConfig& config, std::ostream& out) {
  const RunOutput r = run_experiment(config);
  write_outputs(config, r, &out);
  return r.exit_code;
}

std::vector<std::string> split_values(const std::string& s) {
  std::vector<std::string> v;
  std::string cur;
  for (char ch : s + ",") {
    if (ch == ',') {
      if (!cur.empty()) v.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  return v;
}

}  // namespace

std::vector<std::string> recipe_names() {
  std::vector<std::string> names;
  for (const auto& r : kRecipes) names.emplace_back(r.name);
  return names;
}

std::string recipe_text(const std::string& name) {
  for (const auto& r : kRecipes)
    if (name == r.name) return std::string(r.text);
  throw Error(ErrorCode::ConfigError, "unknown recipe " + name);
}

int run_app(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal potentials for Schroedinger operators"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run one experiment from a config file");
  run->add_option("config", config_path, "INI config")->required();

  std::string sweep_path, param, values;
  unsigned jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Run a config over a list of parameter values");
  sweep->add_option("config", sweep_path, "INI config")->required();
  sweep->add_option("--param", param, "numeric key, e.g. problem.p")->required();
  sweep->add_option("--values", values, "comma separated values")->required();
  sweep->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);

  std::string recipe;
  bool list = false, print = false;
  auto* rec = app.add_subcommand("recipe", "Run a built-in recipe");
  rec->add_option("name", recipe, "recipe name");
  rec->add_flag("--list", list, "list recipe names");
  rec->add_flag("--print", print, "print the recipe config instead of running it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return run_config(parse_config_file(config_path), out);
    if (*rec) {
      if (list) {
        for (const auto& n : recipe_names()) out << n << '\n';
        return kOk;
      }
      if (recipe.empty()) throw Error(ErrorCode::ConfigError, "recipe name required");
      const std::string text = recipe_text(recipe);
      if (print) {
        out << text;
        return kOk;
      }
      return run_config(parse_config(text), out);
    }
    const ExperimentConfig base = parse_config_file(sweep_path);
    const std::vector<std::string> vals = split_values(values);
    if (vals.empty()) throw Error(ErrorCode::ConfigError, "--values is empty");
    const std::vector<SweepRow> rows = run_sweep(base, param, vals, jobs);
    int code = kOk;
    for (const SweepRow& row : rows) {
      if (!row.error.empty()) {
        err << "potopt: " << param << "=" << row.value << ": " << row.error << '\n';
      } else {
        KeyValues kv = base.echo;
        kv[param] = row.value;
        kv["experiment.name"] = row.output.record["experiment"].get<std::string>();
        write_outputs(from_key_values(kv), row.output, &out);
      }
      code = std::max(code, row.output.exit_code);
    }
    const std::filesystem::path dir = output_directory(base);
    std::filesystem::create_directories(dir);
    std::ofstream(dir / (base.name + "_sweep.csv")) << sweep_csv(param, rows);
    return code;
  } catch (const std::exception& e) {
    err << "potopt: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace potopt::cli
