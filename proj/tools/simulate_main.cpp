#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dipolesim/config.hpp"
#include "dipolesim/csv.hpp"
#include "dipolesim/errors.hpp"
#include "dipolesim/manifest.hpp"
#include "dipolesim/scenarios.hpp"

namespace {

using dipolesim::ScenarioConfig;
using dipolesim::ScenarioResult;

struct FileForManifest {
  std::string name;
  std::string content;
};

std::string error_category(const std::exception& e) {
  if (dynamic_cast<const dipolesim::config_error*>(&e)) return "config";
  if (dynamic_cast<const dipolesim::io_error*>(&e)) return "io";
  if (dynamic_cast<const dipolesim::invalid_argument_error*>(&e)) return "invalid_argument";
  if (dynamic_cast<const dipolesim::resource_limit_error*>(&e)) return "resource_limit";
  if (dynamic_cast<const dipolesim::convergence_failure_error*>(&e)) return "convergence_failure";
  if (dynamic_cast<const dipolesim::integration_failure_error*>(&e)) return "integration_failure";
  if (dynamic_cast<const dipolesim::stiffness_error*>(&e)) return "stiffness";
  if (dynamic_cast<const dipolesim::undefined_correlation_error*>(&e))
    return "undefined_correlation";
  if (dynamic_cast<const dipolesim::numeric_error*>(&e)) return "numeric";
  if (dynamic_cast<const dipolesim::singular_input_error*>(&e)) return "singular_input";
  if (dynamic_cast<const dipolesim::error*>(&e)) return "error";
  return "internal";
}

int exit_code_for(const std::string& category) {
  if (category == "config" || category == "io" || category == "invalid_argument") return 2;
  if (category == "internal") return 1;
  return 3;
}

int report_failure(const std::exception& e) {
  const std::string category = error_category(e);
  nlohmann::ordered_json j;
  j["error"]["category"] = category;
  j["error"]["message"] = e.what();
  std::cout << j.dump(2) << "\n";
  std::cerr << "simulate: " << category << ": " << e.what() << "\n";
  return exit_code_for(category);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dipolesim::io_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw dipolesim::io_error("write failed: " + path.string());
}

int run_command(const std::string& config_path, const std::string& out_dir,
                const std::vector<std::string>& overrides, bool seed_given,
                std::uint64_t seed, int threads) {
  ScenarioConfig cfg = dipolesim::parse_config_file(config_path, overrides);
  if (threads > 0) cfg.threads = threads;
  if (seed_given) {
    if (!cfg.disorder)
      std::cerr << "simulate: note: --seed ignored, scenario has no disorder block\n";
    else
      cfg.disorder->seed = seed;
  }

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path out(out_dir);

  const auto t_start = std::chrono::steady_clock::now();
  const ScenarioResult result = dipolesim::run_scenario(cfg);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  std::vector<FileForManifest> files;
  for (const dipolesim::Table& table : result.tables)
    files.push_back({table.name + ".csv", dipolesim::table_to_csv(table)});

  nlohmann::ordered_json summary;
  summary["preset"] = cfg.preset;
  nlohmann::ordered_json values = nlohmann::ordered_json::object();
  for (const auto& [key, value] : result.summary) values[key] = value;
  summary["summary"] = std::move(values);
  summary["notes"] = result.notes;
  files.push_back({"summary.json", summary.dump(2) + "\n"});

  const std::string resolved = dipolesim::serialize_config(cfg);
  files.push_back({"config_resolved.json", resolved});

  dipolesim::RunManifest manifest;
  manifest.version = DIPOLESIM_VERSION;
  manifest.preset = cfg.preset;
  manifest.config_checksum = dipolesim::checksum_string(dipolesim::fnv1a64(resolved));
  if (cfg.disorder) manifest.seeds.push_back(cfg.disorder->seed);
  manifest.wall_time_seconds = wall;
  manifest.tolerances = {{"solver_tol_configured", cfg.solver.tol},
                         {"steady_state_tol_default_per_dim", 1e-10},
                         {"integrator_rel_tol", 1e-8},
                         {"integrator_abs_tol", 1e-10},
                         {"detector_delta_phi", cfg.detector.delta_phi}};
  for (const FileForManifest& f : files) {
    write_file(out / f.name, f.content);
    manifest.outputs.push_back({f.name, dipolesim::checksum_string(dipolesim::fnv1a64(f.content)),
                                f.content.size()});
  }
  dipolesim::write_manifest(manifest, (out / "manifest.json").string());

  std::cerr << "simulate: " << cfg.preset << " finished in " << wall << " s, "
            << files.size() + 1 << " files in " << out_dir << "\n";
  return 0;
}

int presets_command() {
  std::printf("presets:\n");
  for (const auto& [name, description] : dipolesim::preset_catalog())
    std::printf("  %-20s %s\n", name.c_str(), description.c_str());
  std::printf("\nshipped configs (configs/ in the source tree):\n");
  const std::vector<std::pair<const char*, const char*>> shipped = {
      {"fig2.json", "chain_steady, 30-emitter chain, angular scan"},
      {"fig3.json", "chain_steady, chain-length sweep at fixed spacing"},
      {"fig4.json", "chain_steady, chain-length sweep at tight spacing"},
      {"fig5.json", "chain_statistics, 9-emitter chain manifolds"},
      {"figS1.json", "dispersion, 50-emitter chain band structure"},
      {"figS2.json", "pulse_subradiant, 12-emitter chain storage pulse"},
      {"figS3.json", "ring_pair, driven 4-ring with passive tilted ring"},
      {"figS4.json", "tilted_polarization, 14+14 ring pair, circular drive"},
      {"figS5.json", "model_comparison, truncation study on 5 emitters"},
      {"figS6.json", "disorder_sweep, seeded positional-disorder ensemble"},
  };
  for (const auto& [file, what] : shipped) std::printf("  %-14s %s\n", file, what);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dipole-array quantum emission simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  int threads = 0;

  CLI::App* run = app.add_subcommand("run", "run a scenario config and write CSV/JSON outputs");
  run->add_option("config", config_path, "scenario config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory (created if missing)")->required();
  CLI::Option* seed_opt =
      run->add_option("--seed", seed, "override the disorder seed");
  run->add_option("--threads", threads, "worker thread cap (default: DIPOLESIM_THREADS or hardware)");
  run->add_option("--set", overrides, "config override, key.path=value (repeatable)");

  CLI::App* presets = app.add_subcommand("presets", "list presets and shipped figure configs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (presets->parsed()) return presets_command();
    return run_command(config_path, out_dir, overrides, seed_opt->count() > 0, seed,
                       threads);
  } catch (const std::exception& e) {
    return report_failure(e);
  }
}
