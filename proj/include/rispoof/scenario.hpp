#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rispoof/channel.hpp"
#include "rispoof/solver.hpp"

namespace rispoof {

inline constexpr const char* kVersion = "0.1.0";

/// Physical scene in file units: degrees, dBm, meters.
struct SceneSection {
  std::string name = "scenario";
  double carrier_hz = 20e9;
  int bs_antennas = 16;
  int ris_elements = 32;
  std::array<double, 2> ris_position_m{48.0, 17.0};
  int pilots = 50;
  double tx_power_dbm = 20.0;
  double noise_power_dbm = -80.0;
  double theta_fake_deg = -48.0;
  std::optional<double> theta_true_deg;
  double window_half_width_deg = 3.0;
  int window_count = 10;
  KernelConvention convention = KernelConvention::FixedIncidence;
  std::uint64_t seed = 1;

  friend bool operator==(const SceneSection&, const SceneSection&) = default;
};

struct SolverSection {
  double gamma = 0.5;
  int i_max = 500;
  /// Defaults to 1e-6 M^2 when absent.
  std::optional<double> eps_null;
  double eps_reg = 1e-9;
  bool polish = true;
  int polish_max_iterations = 40000;

  friend bool operator==(const SolverSection&, const SolverSection&) = default;
};

struct SweepSection {
  double beampattern_step_deg = 0.1;
  double ml_grid_step_deg = 0.1;
  double decoy_grid_step_deg = 1.0;
  std::vector<double> leakage_caps{0.1, 1.0, 10.0};
  std::vector<double> rho_levels{2.0, 5.0, 10.0};
  int trials = 500;
  int shortlist_top_n = 5;
  std::array<double, 2> peb_x_range_m{0.0, 100.0};
  std::array<double, 2> peb_y_range_m{-80.0, 80.0};
  int peb_nx = 200;
  int peb_ny = 200;

  friend bool operator==(const SweepSection&, const SweepSection&) = default;
};

struct OutputSection {
  std::string directory = "results";

  friend bool operator==(const OutputSection&, const OutputSection&) = default;
};

struct ScenarioFile {
  SceneSection scene;
  SolverSection solver;
  SweepSection sweeps;
  OutputSection output;

  SceneConfig scene_config() const;
  SolverParams solver_params() const;

  friend bool operator==(const ScenarioFile&, const ScenarioFile&) = default;
};

/// Parses the [scene] / [solver] / [sweeps] / [output] format. Unknown sections
/// or keys, duplicates, type mismatches and out-of-range values raise
/// SchemaError naming the line.
ScenarioFile parse_scenario(std::string_view text, std::string_view source = "<memory>");
ScenarioFile load_scenario(const std::filesystem::path& path);

/// Canonical text: every key written in a fixed order with shortest round-trip
/// numbers, so parse(serialize(s)) == s.
std::string serialize(const ScenarioFile& scenario);

/// 64-bit FNV-1a of the canonical text.
std::uint64_t config_hash(const ScenarioFile& scenario);
std::string hash_hex(std::uint64_t hash);

/// Schema checks plus feasibility pre-checks (M >= 2K, rank(V), decoy outside
/// the window). Returns the one-line diagnostic; throws SchemaError or
/// InfeasibleError naming the violated condition.
std::string validate_scenario(const ScenarioFile& scenario);

/// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double value);

}  // namespace rispoof
