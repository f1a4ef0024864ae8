// Copyright 2026 The fdlyap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fdlyap/errors.hpp"
#include "fdlyap/experiment.hpp"
#include "fdlyap/trajectory_io.hpp"
#include "fdlyap/verification.hpp"

namespace {

std::filesystem::path output_dir(const std::optional<std::string>& flag) {
  if (flag) {
    return *flag;
  }
  if (const char* env = std::getenv("FDLYAP_OUT"); env != nullptr && *env != '\0') {
    return env;
  }
  return "fdlyap-out";
}

void print_summary(const std::vector<fdlyap::RunResult>& results, const std::filesystem::path& out) {
  for (const auto& r : results) {
    std::cout << (r.spec.label.empty() ? std::string("run") : r.spec.label) << ": " << r.log.size() - 1
              << " steps, final V " << fdlyap::format_shortest(r.log.rows.back().V_exact) << "\n";
  }
  std::cout << "wrote " << out.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-free sampled-data Lyapunov control of open quantum systems"};
  app.require_subcommand(1);

  std::optional<std::string> out;
  fdlyap::Overrides overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> steps;
  std::optional<int> shots;
  std::optional<double> eta_max;

  auto add_overrides = [&](CLI::App* cmd) {
    cmd->add_option("--out", out, "Output directory (default: $FDLYAP_OUT or ./fdlyap-out)");
    cmd->add_option("--seed", seed, "Seed for the measurement noise stream");
    cmd->add_option("--steps", steps, "Number of sampling intervals")->check(CLI::PositiveNumber);
    cmd->add_option("--shots", shots, "Use shot readout with this many shots")->check(CLI::PositiveNumber);
    cmd->add_option("--eta-max", eta_max, "Use bounded readout noise of this size")->check(CLI::NonNegativeNumber);
  };

  std::string preset;
  auto* run_preset = app.add_subcommand("run-preset", "Run a shipped experiment preset");
  run_preset->add_option("name", preset, "Preset name (see list-presets)")->required();
  add_overrides(run_preset);

  std::string config_path;
  auto* run_config = app.add_subcommand("run-config", "Run a JSON configuration file");
  run_config->add_option("path", config_path, "Configuration file")->required();
  add_overrides(run_config);

  std::optional<int> substeps;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--out", out, "Directory for verify-report.json");
  verify->add_option("--substeps", substeps, "Force rk4 with this many substeps on every run")
      ->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("list-presets", "List the shipped presets");

  CLI11_PARSE(app, argc, argv);

  overrides.seed = seed;
  overrides.steps = steps;
  overrides.shots = shots;
  overrides.eta_max = eta_max;

  try {
    if (list->parsed()) {
      for (const auto& p : fdlyap::presets()) {
        std::cout << p.name << "\t" << p.summary << "\n";
      }
      return 0;
    }
    if (run_preset->parsed()) {
      const auto dir = output_dir(out);
      print_summary(fdlyap::write_runs(preset, fdlyap::preset_runs(preset, overrides), dir), dir);
      return 0;
    }
    if (run_config->parsed()) {
      const auto dir = output_dir(out);
      const auto name = std::filesystem::path(config_path).stem().string();
      print_summary(fdlyap::write_runs(name, {fdlyap::load_run_config(config_path, overrides)}, dir), dir);
      return 0;
    }
    if (verify->parsed()) {
      const auto dir = output_dir(out);
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec) {
        throw fdlyap::Error("cannot create output directory " + dir.string());
      }
      fdlyap::VerifyOptions options{substeps};
      const auto report = fdlyap::run_verification(options, [](const fdlyap::CriterionResult& r) {
        std::cout << fdlyap::format_result_line(r) << std::endl;
      });
      fdlyap::write_text_file(dir / "verify-report.json", fdlyap::verify_report_json(report, options));
      std::cout << (report.passed() ? "all criteria passed" : "some criteria failed") << "\n";
      return report.passed() ? 0 : 1;
    }
  } catch (const fdlyap::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const fdlyap::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 4;
  } catch (const fdlyap::InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 5;
  } catch (const fdlyap::DimensionError& e) {
    std::cerr << "invariant violation (dimension): " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
