#include "rispoof/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "rispoof/bounds.hpp"
#include "rispoof/deception.hpp"
#include "rispoof/parallel.hpp"
#include "rispoof/radar_ml.hpp"

namespace rispoof {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct ExperimentName {
  Experiment id;
  const char* enum_name;
  const char* stem;
};

constexpr ExperimentName kNames[] = {
    {Experiment::Beampattern, "Beampattern", "beampattern"},
    {Experiment::MlSpectrum, "MlSpectrum", "ml_spectrum"},
    {Experiment::PebMap, "PebMap", "peb_map"},
    {Experiment::LeakageRatio, "LeakageRatio", "leakage_ratio"},
    {Experiment::RhoUbSweep, "RhoUbSweep", "rho_ub_sweep"},
    {Experiment::Shortlist, "Shortlist", "shortlist"},
    {Experiment::Trials, "Trials", "trials"},
    {Experiment::All, "All", "all"},
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

double db20(double mag, double ref) { return 20.0 * std::log10(mag / ref); }
double db10(double power, double ref) { return 10.0 * std::log10(power / ref); }

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

AngleGrid decoy_grid(const RunContext& ctx) {
  return AngleGrid::interior_degrees(-89.0, 89.0, ctx.scenario().sweeps.decoy_grid_step_deg);
}

}  // namespace

std::optional<Experiment> parse_experiment(std::string_view name) {
  const std::string key = lower(name);
  for (const auto& n : kNames) {
    if (key == lower(n.enum_name) || key == n.stem) return n.id;
  }
  return std::nullopt;
}

std::string experiment_stem(Experiment e) {
  for (const auto& n : kNames) {
    if (n.id == e) return n.stem;
  }
  throw std::logic_error("unknown experiment");
}

std::vector<Experiment> expand_experiments(const std::vector<Experiment>& requested) {
  const bool all = std::find(requested.begin(), requested.end(), Experiment::All) != requested.end();
  std::vector<Experiment> out;
  for (const auto& n : kNames) {
    if (n.id == Experiment::All) continue;
    if (all || std::find(requested.begin(), requested.end(), n.id) != requested.end()) {
      out.push_back(n.id);
    }
  }
  return out;
}

RunContext::RunContext(ScenarioFile scenario, std::optional<std::uint64_t> seed_override)
    : scenario_(std::move(scenario)) {
  if (seed_override) scenario_.scene.seed = *seed_override;
  config_ = scenario_.scene_config();
  config_.validate();
  params_ = scenario_.solver_params();
  params_.validate();
  hash_ = config_hash(scenario_);
}

const SolveResult& RunContext::solved() {
  if (!solved_) solved_ = solve_p3(scene_basis(config_), params_);
  return *solved_;
}

Table beampattern_table(RunContext& ctx) {
  const SceneConfig& c = ctx.config();
  const AngleGrid grid =
      AngleGrid::stepped(Angle::from_degrees(-90.0), Angle::from_degrees(90.0),
                         Angle::from_degrees(ctx.scenario().sweeps.beampattern_step_deg));
  const MonostaticKernel kernel = c.kernel();
  const RisProfile uniform = ctx.uniform();
  const RisProfile& optimized = ctx.solved().profile;

  std::vector<double> u(grid.size()), o(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    u[i] = std::abs(kernel(grid[i], uniform));
    o[i] = std::abs(kernel(grid[i], optimized));
  }
  // Both curves share the uniform profile's peak as 0 dB.
  const double ref = max_of(u);
  Table t("Beampattern", {"angle_deg", "uniform_gain_db", "optimized_gain_db"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    t.add_row(std::vector<double>{grid[i].degrees(), db20(u[i], ref), db20(o[i], ref)});
  }
  return t;
}

Table ml_spectrum_table(RunContext& ctx) {
  const SceneConfig& c = ctx.config();
  const AngleGrid grid =
      AngleGrid::interior_degrees(-89.0, 89.0, ctx.scenario().sweeps.ml_grid_step_deg);
  const CVector pilots = constant_pilots(c.pilots);

  auto spectrum = [&](const RisProfile& profile, bool noisy) {
    const CascadedChannel ch = cascaded_channel(c, profile);
    CMatrix y;
    if (noisy) {
      NoiseStream noise(c.seed, 0);
      y = synthesize_observation(c, ch, pilots, noise).y;
    } else {
      y = mean_observation(c, ch, pilots);
    }
    return ml_spectrum(sample_covariance(y), grid, c.bs_antennas).values;
  };
  const auto u = spectrum(ctx.uniform(), false);
  const auto o = spectrum(ctx.solved().profile, false);
  const auto on = spectrum(ctx.solved().profile, true);
  const double ru = max_of(u), ro = max_of(o), ron = max_of(on);

  Table t("MlSpectrum",
          {"angle_deg", "uniform_db", "optimized_db", "optimized_noisy_db"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    t.add_row(std::vector<double>{grid[i].degrees(), db10(u[i], ru), db10(o[i], ro),
                                  db10(on[i], ron)});
  }
  return t;
}

Table peb_map_table(RunContext& ctx) {
  const auto& sw = ctx.scenario().sweeps;
  PositionGridSpec spec;
  spec.x_min = sw.peb_x_range_m[0];
  spec.x_max = sw.peb_x_range_m[1];
  spec.y_min = sw.peb_y_range_m[0];
  spec.y_max = sw.peb_y_range_m[1];
  spec.nx = sw.peb_nx;
  spec.ny = sw.peb_ny;

  const RisProfile uniform = ctx.uniform();
  const RisProfile& optimized = ctx.solved().profile;
  PositionPebMap maps[4];
  const RisProfile* profiles[4] = {&uniform, &optimized, &uniform, &optimized};
  const BoundVariant variants[4] = {BoundVariant::ClosedForm, BoundVariant::ClosedForm,
                                    BoundVariant::Exact, BoundVariant::Exact};
  parallel_for(4, [&](std::size_t i) {
    maps[i] = position_peb_map(spec, *profiles[i], ctx.config(), variants[i]);
  });

  Table t("PebMap", {"x_m", "y_m", "peb_uniform_closed_m", "peb_optimized_closed_m",
                     "peb_uniform_exact_m", "peb_optimized_exact_m"});
  for (std::size_t iy = 0; iy < maps[0].ys.size(); ++iy) {
    for (std::size_t ix = 0; ix < maps[0].xs.size(); ++ix) {
      const int jx = static_cast<int>(ix), jy = static_cast<int>(iy);
      t.add_row(std::vector<double>{maps[0].xs[ix], maps[0].ys[iy], maps[0].at(jx, jy),
                                    maps[1].at(jx, jy), maps[2].at(jx, jy), maps[3].at(jx, jy)});
    }
  }
  return t;
}

Table leakage_ratio_table(RunContext& ctx) {
  const SceneConfig& c = ctx.config();
  const NullingWindow window = c.window();
  const MonostaticKernel kernel = c.kernel();
  const AngleGrid grid = decoy_grid(ctx).excluding(window.lower(), window.upper());
  const auto& rhos = ctx.scenario().sweeps.rho_levels;
  const double kmin = kappa_min(window, c.bs_antennas);

  struct Row {
    double ratio = kNan, leak = kNan, gain = kNan;
    bool converged = false;
  };
  std::vector<Row> rows(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const KernelBasis b = build_basis(window, grid[i], c.theta_true(), c.ris_elements);
    const SolveResult r = solve_p3(b, ctx.params());
    rows[i].leak = leakage_worst(r.profile, window, kernel);
    rows[i].gain = std::abs(kernel(grid[i], r.profile));
    rows[i].ratio = rows[i].leak / rows[i].gain;
    rows[i].converged = r.converged;
  });

  std::vector<std::string> cols{"theta_fake_deg", "leakage_ratio", "leakage", "decoy_gain",
                                "converged"};
  for (const double rho : rhos) cols.push_back("threshold_rho" + format_number(rho));
  Table t("LeakageRatio", cols);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<std::string> cells{format_number(grid[i].degrees()), format_number(rows[i].ratio),
                                   format_number(rows[i].leak), format_number(rows[i].gain),
                                   rows[i].converged ? "1" : "0"};
    const double kf = kappa(grid[i], c.bs_antennas);
    for (const double rho : rhos) cells.push_back(format_number(std::sqrt(kf / (rho * kmin))));
    t.add_row(std::move(cells));
  }
  return t;
}

Table rho_ub_table(RunContext& ctx) {
  const SceneConfig& c = ctx.config();
  const KernelBasis basis = scene_basis(c);
  const NullingWindow window = c.window();
  const AngleGrid grid = decoy_grid(ctx);
  const auto& caps = ctx.scenario().sweeps.leakage_caps;

  std::vector<std::string> cols{"theta_deg", "in_window", "eta", "phi"};
  for (const double cap : caps) cols.push_back("rho_ub_cap" + format_number(cap));
  Table t("RhoUbSweep", cols);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const DecoyScore base = score_decoy(grid[i], 1.0, c, basis);
    std::vector<std::string> cells{format_number(grid[i].degrees()),
                                   window.contains(grid[i]) ? "1" : "0", format_number(base.eta),
                                   format_number(base.phi)};
    for (const double cap : caps) cells.push_back(format_number(base.rho_ub / (cap * cap)));
    t.add_row(std::move(cells));
  }
  return t;
}

Table shortlist_table(RunContext& ctx) {
  const auto& sw = ctx.scenario().sweeps;
  const double cap = sw.leakage_caps.empty() ? 1.0 : sw.leakage_caps.front();
  const Shortlist s = shortlist_decoys(decoy_grid(ctx), ctx.config(), cap, sw.shortlist_top_n,
                                       ctx.params());
  Table t("Shortlist", {"rank_by_bound", "theta_deg", "eta", "rho_ub", "rank_by_realized",
                        "realized_rho", "leakage", "decoy_gain"});
  for (std::size_t i = 0; i < s.by_bound.size(); ++i) {
    const DecoyScore& d = s.by_bound[i];
    double rank = kNan, rho = kNan, leak = kNan, gain = kNan;
    for (std::size_t j = 0; j < s.by_realized.size(); ++j) {
      if (s.by_realized[j].theta == d.theta) {
        rank = static_cast<double>(j + 1);
        rho = s.by_realized[j].realized_rho;
        leak = s.by_realized[j].leakage;
        gain = s.by_realized[j].decoy_gain;
      }
    }
    t.add_row(std::vector<double>{static_cast<double>(i + 1), d.theta.degrees(), d.eta, d.rho_ub,
                                  rank, rho, leak, gain});
  }
  return t;
}

Table trials_table(RunContext& ctx, std::vector<std::pair<std::string, std::string>>* summary) {
  const SceneConfig& c = ctx.config();
  const int n = ctx.scenario().sweeps.trials;
  const AngleGrid grid =
      AngleGrid::interior_degrees(-89.0, 89.0, ctx.scenario().sweeps.ml_grid_step_deg);
  const std::pair<const char*, RisProfile> runs[] = {{"uniform", ctx.uniform()},
                                                     {"optimized", ctx.solved().profile}};

  Table t("Trials", {"trial", "profile", "estimated_deg", "class"});
  for (const auto& [label, profile] : runs) {
    const TrialAggregate agg = run_trials(c, profile, n, grid);
    for (const TrialResult& r : agg.trials) {
      t.add_row({std::to_string(r.stream), label, format_number(r.estimated_theta.degrees()),
                 to_string(r.classified)});
    }
    if (summary != nullptr) {
      const std::string p = std::string("trials.") + label + ".";
      summary->emplace_back(p + "decoyed_rate", format_number(agg.decoyed_rate));
      summary->emplace_back(p + "revealed_rate", format_number(agg.revealed_rate));
      summary->emplace_back(p + "elsewhere_rate", format_number(agg.elsewhere_rate));
      summary->emplace_back(p + "rmse_to_fake_deg", format_number(rad2deg(agg.rmse_to_fake)));
    }
  }
  return t;
}

RunSummary run_scenario(const ScenarioFile& scenario, const RunOptions& options) {
  RunContext ctx(scenario, options.seed);
  std::filesystem::create_directories(options.out_dir);

  RunSummary summary;
  summary.config_hash = ctx.hash();
  summary.seed = ctx.seed();

  std::vector<std::pair<std::string, std::string>> extra;
  const auto experiments = expand_experiments(options.experiments);
  for (const Experiment e : experiments) {
    if (options.log) *options.log << "running " << experiment_stem(e) << "..." << std::endl;
    Table table = [&] {
      switch (e) {
        case Experiment::Beampattern: return beampattern_table(ctx);
        case Experiment::MlSpectrum: return ml_spectrum_table(ctx);
        case Experiment::PebMap: return peb_map_table(ctx);
        case Experiment::LeakageRatio: return leakage_ratio_table(ctx);
        case Experiment::RhoUbSweep: return rho_ub_table(ctx);
        case Experiment::Shortlist: return shortlist_table(ctx);
        case Experiment::Trials: return trials_table(ctx, &extra);
        case Experiment::All: break;
      }
      throw std::logic_error("unexpanded experiment");
    }();
    const auto path = options.out_dir / (experiment_stem(e) + ".csv");
    table.write(path, ctx.hash(), ctx.seed());
    summary.files.push_back(path);
  }

  summary.manifest = options.out_dir / "manifest.txt";
  std::ofstream m(summary.manifest, std::ios::binary | std::ios::trunc);
  if (!m) throw std::runtime_error("cannot write " + summary.manifest.string());
  m << "tool_version=" << kVersion << "\n"
    << "scenario=" << scenario.scene.name << "\n"
    << "config_hash=" << hash_hex(ctx.hash()) << "\n"
    << "seed=" << ctx.seed() << "\n"
    << "timestamp=" << utc_timestamp() << "\n";
  std::string names;
  for (const Experiment e : experiments) names += (names.empty() ? "" : ",") + experiment_stem(e);
  m << "experiments=" << names << "\n";
  for (const auto& f : summary.files) m << "file=" << f.filename().string() << "\n";
  if (!experiments.empty()) {
    const SolveResult& s = ctx.solved();
    m << "solver.iterations=" << s.iterations << "\n"
      << "solver.polish_iterations=" << s.polish_iterations << "\n"
      << "solver.residual=" << format_number(s.residual) << "\n"
      << "solver.decoy_gain=" << format_number(s.decoy_gain) << "\n"
      << "solver.converged=" << (s.converged ? "true" : "false") << "\n";
  }
  for (const auto& [k, v] : extra) m << k << "=" << v << "\n";
  return summary;
}

}  // namespace rispoof
