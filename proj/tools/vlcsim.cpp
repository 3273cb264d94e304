// vlcsim: run scripted VLC link experiments and write plot-ready CSV/JSON.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vlcsim/errors.hpp"
#include "vlcsim/phy_mcs.hpp"
#include "vlcsim/report.hpp"
#include "vlcsim/scene_config.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr const char* kOutDirEnv = "VLCSIM_OUT_DIR";

std::string default_out_dir() {
  const char* env = std::getenv(kOutDirEnv);
  return env && *env ? env : ".";
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw vlcsim::IoError("cannot write '" + path.string() + "'");
}

int run(const std::string& scenario, const std::string& scene_path, std::uint64_t seed,
        const std::string& out_dir, const std::vector<std::string>& sets) {
  vlcsim::Overrides overrides;
  for (const std::string& s : sets) overrides.push_back(vlcsim::parse_override(s));

  vlcsim::SceneFile file;
  if (!scene_path.empty() && scenario == "oracle-check") {
    // Only the [scenario] section matters here; an empty scene is fine.
    file = vlcsim::read_scene_file(scene_path, overrides);
    if (!file.diagnostics.empty())
      throw vlcsim::ValidationError(file.diagnostics.front().field, file.diagnostics.front().rule);
  } else if (!scene_path.empty()) {
    file = vlcsim::load_scene_file(scene_path, overrides);
  } else if (scenario == "oracle-check") {
    std::istringstream none;
    file = vlcsim::parse_scene_file(none, overrides);
  } else {
    std::cerr << "error: --scene is required for " << scenario << '\n';
    return kExitUsage;
  }

  const vlcsim::ScenarioRun result = vlcsim::run_scenario(scenario, file, seed);
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw vlcsim::IoError("cannot create '" + dir.string() + "': " + ec.message());
  write_file(dir / (scenario + ".csv"), result.csv);
  write_file(dir / "summary.json", result.summary.dump(2) + "\n");

  std::cout << scenario << "  seed " << seed << "  config " << result.summary["config_hash"].get<std::string>()
            << '\n';
  for (const auto& [key, value] : result.summary["aggregate"].items())
    std::cout << "  " << key << " = " << value.dump() << '\n';
  std::cout << "wrote " << (dir / (scenario + ".csv")).string() << " and "
            << (dir / "summary.json").string() << '\n';
  return 0;
}

int validate(const std::string& scene_path, const std::vector<std::string>& sets) {
  vlcsim::Overrides overrides;
  for (const std::string& s : sets) overrides.push_back(vlcsim::parse_override(s));
  const auto diags = vlcsim::validate_scene_file(scene_path, overrides);
  for (const auto& d : diags) std::cout << d.field << ": " << d.rule << '\n';
  if (diags.empty()) std::cout << scene_path << ": ok\n";
  return diags.empty() ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link-level MIMO visible-light communication simulator"};
  app.require_subcommand(1);

  std::string scenario, scene, out_dir = default_out_dir(), table_out;
  std::uint64_t seed = 1;
  std::vector<std::string> sets;

  auto* run_cmd = app.add_subcommand("run", "run one scenario, writing <scenario>.csv and summary.json");
  run_cmd->add_option("--scenario", scenario, "scenario name")
      ->required()
      ->check(CLI::IsMember(vlcsim::scenario_names()));
  run_cmd->add_option("--scene", scene, "scene config file")->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
  run_cmd->add_option("--out", out_dir, std::string("output directory (default $") + kOutDirEnv + " or .)");
  run_cmd->add_option("--set", sets, "override: section.key=value, or key=value for [scenario]");

  auto* val_cmd = app.add_subcommand("validate", "check a scene config and list every problem");
  val_cmd->add_option("--scene", scene, "scene config file")->required();
  val_cmd->add_option("--set", sets, "override applied before validation");

  auto* table_cmd = app.add_subcommand("mcs-table", "print the MCS table as CSV");
  table_cmd->add_option("--out", table_out, "write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << '\n' << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return run(scenario, scene, seed, out_dir, sets);
    if (val_cmd->parsed()) return validate(scene, sets);
    if (table_out.empty()) {
      vlcsim::write_mcs_table_csv(std::cout);
    } else {
      std::ofstream out(table_out);
      vlcsim::write_mcs_table_csv(out);
      if (!out) throw vlcsim::IoError("cannot write '" + table_out + "'");
    }
    return 0;
  } catch (const vlcsim::ValidationError& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kExitFailure;
  } catch (const vlcsim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
