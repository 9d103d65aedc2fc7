#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rispoof/scenario.hpp"
#include "rispoof/solver.hpp"
#include "rispoof/table.hpp"

namespace rispoof {

enum class Experiment { Beampattern, MlSpectrum, PebMap, LeakageRatio, RhoUbSweep, Shortlist, Trials, All };

/// Accepts the enum spelling or its snake_case file stem, case-insensitively
/// (e.g. "MlSpectrum", "ml_spectrum").
std::optional<Experiment> parse_experiment(std::string_view name);
/// File stem used for the experiment's table (e.g. "ml_spectrum").
std::string experiment_stem(Experiment e);
/// Concrete experiments in canonical order (All expanded, duplicates removed).
std::vector<Experiment> expand_experiments(const std::vector<Experiment>& requested);

/// Shared state for one run: the scenario, its derived config, and the
/// optimized profile solved once on first use.
class RunContext {
 public:
  explicit RunContext(ScenarioFile scenario, std::optional<std::uint64_t> seed_override = {});

  const ScenarioFile& scenario() const { return scenario_; }
  const SceneConfig& config() const { return config_; }
  const SolverParams& params() const { return params_; }
  std::uint64_t hash() const { return hash_; }
  std::uint64_t seed() const { return config_.seed; }

  const SolveResult& solved();
  RisProfile uniform() const { return RisProfile::uniform(config_.ris_elements); }

 private:
  ScenarioFile scenario_;
  SceneConfig config_;
  SolverParams params_;
  std::uint64_t hash_ = 0;
  std::optional<SolveResult> solved_;
};

/// One table per experiment; the functions are pure given the context.
Table beampattern_table(RunContext& ctx);
Table ml_spectrum_table(RunContext& ctx);
Table peb_map_table(RunContext& ctx);
Table leakage_ratio_table(RunContext& ctx);
Table rho_ub_table(RunContext& ctx);
Table shortlist_table(RunContext& ctx);
/// Also returns summary rates through `summary` (key=value lines for the manifest).
Table trials_table(RunContext& ctx, std::vector<std::pair<std::string, std::string>>* summary);

struct RunOptions {
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<Experiment> experiments;
  /// Progress lines go here unless null.
  std::ostream* log = nullptr;
};

struct RunSummary {
  std::vector<std::filesystem::path> files;
  std::filesystem::path manifest;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

/// Runs the requested experiments and writes <stem>.csv files plus
/// manifest.txt into out_dir (created if missing). An empty experiment list
/// writes only the manifest.
RunSummary run_scenario(const ScenarioFile& scenario, const RunOptions& options);

}  // namespace rispoof
