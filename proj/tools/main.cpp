// Command-line front end: runs scenario files or built-in scenarios and
// writes CSV/JSON results. Exit codes: 0 success, 1 simulation failure,
// 2 bad input (usage, parse, or validation).
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lops/scenario.hpp"

namespace {

std::map<std::string, double> parse_sets(const std::vector<std::string>& sets) {
  std::map<std::string, double> overrides;
  for (const std::string& s : sets) {
    const size_t eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("--set expects name=value, got '" + s + "'");
    const std::string name = s.substr(0, eq);
    const std::string text = s.substr(eq + 1);
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text.empty())
      throw std::invalid_argument("--set " + name + ": '" + text +
                                  "' is not a number");
    overrides[name] = value;
  }
  return overrides;
}

std::optional<lops::Core> parse_core(const std::string& core) {
  if (core.empty()) return std::nullopt;
  if (core == "direct") return lops::Core::Direct;
  if (core == "permanent") return lops::Core::Permanent;
  throw std::invalid_argument("--core must be direct or permanent");
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "lops: linear-optical circuit simulator with partially distinguishable "
      "photons"};
  app.require_subcommand(1);

  std::string file, name, out_path, core, format = "csv", save_path;
  std::vector<std::string> sets;
  unsigned seed = 0;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "output file (default: stdout)");
    cmd->add_option("--core", core, "override the evaluation core")
        ->check(CLI::IsMember({"direct", "permanent"}));
    cmd->add_option("--format", format, "output format (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--set", sets,
                    "override a declared parameter, name=value (repeatable)");
    cmd->add_option("--seed", seed,
                    "reserved; the simulation is deterministic and ignores it");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run a scenario file");
  run_cmd->add_option("file", file, "scenario file path")->required();
  add_common(run_cmd);

  CLI::App* builtin_cmd =
      app.add_subcommand("builtin", "run a built-in scenario");
  builtin_cmd->add_option("name", name, "one of: hom, hom3, delay_mz, swap")
      ->required();
  builtin_cmd->add_option("--save", save_path,
                          "also write the scenario text to this file");
  add_common(builtin_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    lops::Scenario sc;
    try {
      sc = run_cmd->parsed() ? lops::load_scenario_file(file)
                             : lops::builtin_scenario(name);
    } catch (const lops::ScenarioParseError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    if (builtin_cmd->parsed() && !save_path.empty()) {
      std::ofstream save(save_path);
      if (!save) throw std::runtime_error("cannot open save file: " + save_path);
      save << lops::serialize_scenario(sc);
    }

    std::map<std::string, double> overrides;
    std::optional<lops::Core> core_override;
    try {
      overrides = parse_sets(sets);
      core_override = parse_core(core);
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }

    lops::ScenarioResult result;
    try {
      result = lops::run_scenario(sc, core_override, overrides);
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    const std::string text =
        format == "json" ? lops::format_json(result) : lops::format_csv(result);
    write_output(text, out_path);
    return 0;
  } catch (const lops::ScenarioParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
