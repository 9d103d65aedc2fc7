#include "rispoof/scenario.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "rispoof/bounds.hpp"
#include "rispoof/errors.hpp"

namespace rispoof {

namespace {

using Array = std::vector<double>;
using Value = std::variant<bool, std::int64_t, double, std::string, Array>;

struct Entry {
  Value value;
  int line = 0;
};

[[noreturn]] void schema_fail(std::string_view source, int line, const std::string& what) {
  std::ostringstream msg;
  msg << source;
  if (line > 0) msg << ":" << line;
  msg << ": " << what;
  throw SchemaError(msg.str());
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Drops a trailing comment, ignoring '#' inside double-quoted strings.
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string && c == '\\') {
      ++i;
    } else if (c == '"') {
      in_string = !in_string;
    } else if (c == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

bool is_bare_key(std::string_view key) {
  if (key.empty()) return false;
  for (const char c : key) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

std::optional<double> parse_float(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::optional<std::int64_t> parse_int(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

Value parse_value(std::string_view text, std::string_view source, int line) {
  if (text.empty()) schema_fail(source, line, "missing value");
  if (text.front() == '"') {
    std::string out;
    std::size_t i = 1;
    for (; i < text.size() && text[i] != '"'; ++i) {
      if (text[i] == '\\') {
        if (++i >= text.size()) break;
        switch (text[i]) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: schema_fail(source, line, "unsupported escape in string");
        }
      } else {
        out += text[i];
      }
    }
    if (i >= text.size()) schema_fail(source, line, "unterminated string");
    if (!trim(text.substr(i + 1)).empty()) schema_fail(source, line, "trailing text after string");
    return out;
  }
  if (text.front() == '[') {
    if (text.back() != ']') schema_fail(source, line, "unterminated array");
    Array out;
    std::string_view body = trim(text.substr(1, text.size() - 2));
    while (!body.empty()) {
      const auto comma = body.find(',');
      const std::string_view item = trim(body.substr(0, comma));
      const auto v = parse_float(item);
      if (!v) schema_fail(source, line, "array items must be numbers, got '" + std::string(item) + "'");
      out.push_back(*v);
      if (comma == std::string_view::npos) break;
      body = trim(body.substr(comma + 1));
    }
    return out;
  }
  if (text == "true") return true;
  if (text == "false") return false;
  if (const auto i = parse_int(text)) return *i;
  if (const auto d = parse_float(text)) return *d;
  schema_fail(source, line, "cannot parse value '" + std::string(text) + "'");
}

using Section = std::map<std::string, Entry>;

std::map<std::string, Section> parse_document(std::string_view text, std::string_view source) {
  static const std::set<std::string> kSections{"scene", "solver", "sweeps", "output"};
  std::map<std::string, Section> doc;
  Section* current = nullptr;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view raw = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') schema_fail(source, line_no, "malformed section header");
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (!kSections.count(name)) schema_fail(source, line_no, "unknown section [" + name + "]");
      if (doc.count(name)) schema_fail(source, line_no, "duplicate section [" + name + "]");
      current = &doc[name];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) schema_fail(source, line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    if (!is_bare_key(key)) schema_fail(source, line_no, "invalid key '" + key + "'");
    if (current == nullptr) schema_fail(source, line_no, "key '" + key + "' outside any section");
    if (current->count(key)) schema_fail(source, line_no, "duplicate key '" + key + "'");
    (*current)[key] = Entry{parse_value(trim(line.substr(eq + 1)), source, line_no), line_no};
  }
  return doc;
}

// Typed extraction with line-aware errors.
class Binder {
 public:
  Binder(std::string_view source, std::string section)
      : source_(source), section_(std::move(section)) {}

  template <class T>
  void on(const std::string& key, std::function<void(const T&)> set) {
    handlers_[key] = [this, key, set](const Entry& e) {
      set(this->as<T>(key, e));
    };
  }

  void apply(const Section& section) {
    for (const auto& [key, entry] : section) {
      const auto it = handlers_.find(key);
      if (it == handlers_.end()) {
        schema_fail(source_, entry.line, "unknown key '" + key + "' in [" + section_ + "]");
      }
      it->second(entry);
    }
  }

 private:
  template <class T>
  T as(const std::string& key, const Entry& e) const {
    if constexpr (std::is_same_v<T, double>) {
      if (const auto* d = std::get_if<double>(&e.value)) return *d;
      if (const auto* i = std::get_if<std::int64_t>(&e.value)) return static_cast<double>(*i);
      fail(key, e, "a number");
    } else if constexpr (std::is_same_v<T, std::int64_t>) {
      if (const auto* i = std::get_if<std::int64_t>(&e.value)) return *i;
      fail(key, e, "an integer");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (const auto* b = std::get_if<bool>(&e.value)) return *b;
      fail(key, e, "true or false");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (const auto* s = std::get_if<std::string>(&e.value)) return *s;
      fail(key, e, "a string");
    } else {
      if (const auto* a = std::get_if<Array>(&e.value)) return *a;
      fail(key, e, "an array of numbers");
    }
  }

  [[noreturn]] void fail(const std::string& key, const Entry& e, const char* expected) const {
    schema_fail(source_, e.line, "[" + section_ + "] " + key + " must be " + expected);
  }

  std::string_view source_;
  std::string section_;
  std::map<std::string, std::function<void(const Entry&)>> handlers_;
};

void require(bool ok, std::string_view source, const std::string& what) {
  if (!ok) schema_fail(source, 0, what);
}

int to_int(std::int64_t v, const char* key, std::string_view source) {
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    schema_fail(source, 0, std::string(key) + " out of range");
  }
  return static_cast<int>(v);
}

std::array<double, 2> pair_of(const Array& a, const char* key, std::string_view source) {
  if (a.size() != 2) schema_fail(source, 0, std::string(key) + " needs exactly two numbers");
  return {a[0], a[1]};
}

const char* convention_name(KernelConvention c) {
  return c == KernelConvention::FixedIncidence ? "fixed_incidence" : "specular_plus_pi";
}

void check_ranges(const ScenarioFile& s, std::string_view src) {
  const auto& sc = s.scene;
  require(sc.carrier_hz > 0.0, src, "[scene] carrier_hz must be > 0");
  require(sc.bs_antennas >= 2, src, "[scene] bs_antennas must be >= 2");
  require(sc.ris_elements >= 1, src, "[scene] ris_elements must be >= 1");
  require(sc.pilots >= 1, src, "[scene] pilots must be >= 1");
  require(sc.ris_position_m[0] != 0.0 || sc.ris_position_m[1] != 0.0, src,
          "[scene] ris_position_m must not be the origin");
  require(std::abs(sc.theta_fake_deg) < 90.0, src, "[scene] theta_fake_deg must lie in (-90, 90)");
  require(!sc.theta_true_deg || std::abs(*sc.theta_true_deg) < 90.0, src,
          "[scene] theta_true_deg must lie in (-90, 90)");
  require(sc.window_half_width_deg >= 0.0, src, "[scene] window_half_width_deg must be >= 0");
  require(sc.window_count >= 1, src, "[scene] window_count must be >= 1");

  const auto& so = s.solver;
  require(so.gamma > 0.0 && so.gamma < 1.0, src, "[solver] gamma must lie in (0, 1)");
  require(so.i_max >= 1, src, "[solver] i_max must be >= 1");
  require(!so.eps_null || *so.eps_null > 0.0, src, "[solver] eps_null must be > 0");
  require(so.eps_reg > 0.0, src, "[solver] eps_reg must be > 0");
  require(so.polish_max_iterations >= 0, src, "[solver] polish_max_iterations must be >= 0");

  const auto& sw = s.sweeps;
  require(sw.beampattern_step_deg > 0.0, src, "[sweeps] beampattern_step_deg must be > 0");
  require(sw.ml_grid_step_deg > 0.0, src, "[sweeps] ml_grid_step_deg must be > 0");
  require(sw.decoy_grid_step_deg > 0.0, src, "[sweeps] decoy_grid_step_deg must be > 0");
  for (const double cap : sw.leakage_caps) require(cap > 0.0, src, "[sweeps] leakage_caps must be > 0");
  for (const double rho : sw.rho_levels) require(rho > 1.0, src, "[sweeps] rho_levels must be > 1");
  require(sw.trials >= 1, src, "[sweeps] trials must be >= 1");
  require(sw.shortlist_top_n >= 0, src, "[sweeps] shortlist_top_n must be >= 0");
  require(sw.peb_x_range_m[0] <= sw.peb_x_range_m[1], src, "[sweeps] peb_x_range_m must be ordered");
  require(sw.peb_y_range_m[0] <= sw.peb_y_range_m[1], src, "[sweeps] peb_y_range_m must be ordered");
  require(sw.peb_nx >= 1 && sw.peb_ny >= 1, src, "[sweeps] peb_nx and peb_ny must be >= 1");

  require(!s.output.directory.empty(), src, "[output] directory must not be empty");
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string array_text(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_number(values[i]);
  }
  return out + "]";
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

ScenarioFile parse_scenario(std::string_view text, std::string_view source) {
  const auto doc = parse_document(text, source);
  ScenarioFile s;

  if (const auto it = doc.find("scene"); it != doc.end()) {
    auto& sc = s.scene;
    Binder b(source, "scene");
    b.on<std::string>("name", [&](const std::string& v) { sc.name = v; });
    b.on<double>("carrier_hz", [&](const double& v) { sc.carrier_hz = v; });
    b.on<std::int64_t>("bs_antennas", [&](const std::int64_t& v) { sc.bs_antennas = to_int(v, "bs_antennas", source); });
    b.on<std::int64_t>("ris_elements", [&](const std::int64_t& v) { sc.ris_elements = to_int(v, "ris_elements", source); });
    b.on<Array>("ris_position_m", [&](const Array& v) { sc.ris_position_m = pair_of(v, "ris_position_m", source); });
    b.on<std::int64_t>("pilots", [&](const std::int64_t& v) { sc.pilots = to_int(v, "pilots", source); });
    b.on<double>("tx_power_dbm", [&](const double& v) { sc.tx_power_dbm = v; });
    b.on<double>("noise_power_dbm", [&](const double& v) { sc.noise_power_dbm = v; });
    b.on<double>("theta_fake_deg", [&](const double& v) { sc.theta_fake_deg = v; });
    b.on<double>("theta_true_deg", [&](const double& v) { sc.theta_true_deg = v; });
    b.on<double>("window_half_width_deg", [&](const double& v) { sc.window_half_width_deg = v; });
    b.on<std::int64_t>("window_count", [&](const std::int64_t& v) { sc.window_count = to_int(v, "window_count", source); });
    b.on<std::string>("kernel_convention", [&](const std::string& v) {
      if (v == "fixed_incidence") {
        sc.convention = KernelConvention::FixedIncidence;
      } else if (v == "specular_plus_pi") {
        sc.convention = KernelConvention::SpecularPlusPi;
      } else {
        schema_fail(source, it->second.at("kernel_convention").line,
                    "kernel_convention must be \"fixed_incidence\" or \"specular_plus_pi\"");
      }
    });
    b.on<std::int64_t>("seed", [&](const std::int64_t& v) {
      if (v < 0) schema_fail(source, it->second.at("seed").line, "seed must be >= 0");
      sc.seed = static_cast<std::uint64_t>(v);
    });
    b.apply(it->second);
  }

  if (const auto it = doc.find("solver"); it != doc.end()) {
    auto& so = s.solver;
    Binder b(source, "solver");
    b.on<double>("gamma", [&](const double& v) { so.gamma = v; });
    b.on<std::int64_t>("i_max", [&](const std::int64_t& v) { so.i_max = to_int(v, "i_max", source); });
    b.on<double>("eps_null", [&](const double& v) { so.eps_null = v; });
    b.on<double>("eps_reg", [&](const double& v) { so.eps_reg = v; });
    b.on<bool>("polish", [&](const bool& v) { so.polish = v; });
    b.on<std::int64_t>("polish_max_iterations", [&](const std::int64_t& v) {
      so.polish_max_iterations = to_int(v, "polish_max_iterations", source);
    });
    b.apply(it->second);
  }

  if (const auto it = doc.find("sweeps"); it != doc.end()) {
    auto& sw = s.sweeps;
    Binder b(source, "sweeps");
    b.on<double>("beampattern_step_deg", [&](const double& v) { sw.beampattern_step_deg = v; });
    b.on<double>("ml_grid_step_deg", [&](const double& v) { sw.ml_grid_step_deg = v; });
    b.on<double>("decoy_grid_step_deg", [&](const double& v) { sw.decoy_grid_step_deg = v; });
    b.on<Array>("leakage_caps", [&](const Array& v) { sw.leakage_caps = v; });
    b.on<Array>("rho_levels", [&](const Array& v) { sw.rho_levels = v; });
    b.on<std::int64_t>("trials", [&](const std::int64_t& v) { sw.trials = to_int(v, "trials", source); });
    b.on<std::int64_t>("shortlist_top_n", [&](const std::int64_t& v) {
      sw.shortlist_top_n = to_int(v, "shortlist_top_n", source);
    });
    b.on<Array>("peb_x_range_m", [&](const Array& v) { sw.peb_x_range_m = pair_of(v, "peb_x_range_m", source); });
    b.on<Array>("peb_y_range_m", [&](const Array& v) { sw.peb_y_range_m = pair_of(v, "peb_y_range_m", source); });
    b.on<std::int64_t>("peb_nx", [&](const std::int64_t& v) { sw.peb_nx = to_int(v, "peb_nx", source); });
    b.on<std::int64_t>("peb_ny", [&](const std::int64_t& v) { sw.peb_ny = to_int(v, "peb_ny", source); });
    b.apply(it->second);
  }

  if (const auto it = doc.find("output"); it != doc.end()) {
    Binder b(source, "output");
    b.on<std::string>("directory", [&](const std::string& v) { s.output.directory = v; });
    b.apply(it->second);
  }

  check_ranges(s, source);
  return s;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

std::string serialize(const ScenarioFile& s) {
  std::ostringstream out;
  const auto& sc = s.scene;
  out << "[scene]\n"
      << "name = " << quote(sc.name) << "\n"
      << "carrier_hz = " << format_number(sc.carrier_hz) << "\n"
      << "bs_antennas = " << sc.bs_antennas << "\n"
      << "ris_elements = " << sc.ris_elements << "\n"
      << "ris_position_m = " << array_text({sc.ris_position_m[0], sc.ris_position_m[1]}) << "\n"
      << "pilots = " << sc.pilots << "\n"
      << "tx_power_dbm = " << format_number(sc.tx_power_dbm) << "\n"
      << "noise_power_dbm = " << format_number(sc.noise_power_dbm) << "\n"
      << "theta_fake_deg = " << format_number(sc.theta_fake_deg) << "\n";
  if (sc.theta_true_deg) out << "theta_true_deg = " << format_number(*sc.theta_true_deg) << "\n";
  out << "window_half_width_deg = " << format_number(sc.window_half_width_deg) << "\n"
      << "window_count = " << sc.window_count << "\n"
      << "kernel_convention = " << quote(convention_name(sc.convention)) << "\n"
      << "seed = " << sc.seed << "\n";

  const auto& so = s.solver;
  out << "\n[solver]\n"
      << "gamma = " << format_number(so.gamma) << "\n"
      << "i_max = " << so.i_max << "\n";
  if (so.eps_null) out << "eps_null = " << format_number(*so.eps_null) << "\n";
  out << "eps_reg = " << format_number(so.eps_reg) << "\n"
      << "polish = " << (so.polish ? "true" : "false") << "\n"
      << "polish_max_iterations = " << so.polish_max_iterations << "\n";

  const auto& sw = s.sweeps;
  out << "\n[sweeps]\n"
      << "beampattern_step_deg = " << format_number(sw.beampattern_step_deg) << "\n"
      << "ml_grid_step_deg = " << format_number(sw.ml_grid_step_deg) << "\n"
      << "decoy_grid_step_deg = " << format_number(sw.decoy_grid_step_deg) << "\n"
      << "leakage_caps = " << array_text(sw.leakage_caps) << "\n"
      << "rho_levels = " << array_text(sw.rho_levels) << "\n"
      << "trials = " << sw.trials << "\n"
      << "shortlist_top_n = " << sw.shortlist_top_n << "\n"
      << "peb_x_range_m = " << array_text({sw.peb_x_range_m[0], sw.peb_x_range_m[1]}) << "\n"
      << "peb_y_range_m = " << array_text({sw.peb_y_range_m[0], sw.peb_y_range_m[1]}) << "\n"
      << "peb_nx = " << sw.peb_nx << "\n"
      << "peb_ny = " << sw.peb_ny << "\n";

  out << "\n[output]\n"
      << "directory = " << quote(s.output.directory) << "\n";
  return out.str();
}

std::uint64_t config_hash(const ScenarioFile& scenario) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : serialize(scenario)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

SceneConfig ScenarioFile::scene_config() const {
  SceneConfig c;
  c.carrier_hz = scene.carrier_hz;
  c.bs_antennas = scene.bs_antennas;
  c.ris_elements = scene.ris_elements;
  c.ris_position = {scene.ris_position_m[0], scene.ris_position_m[1]};
  c.pilots = scene.pilots;
  c.tx_power_w = dbm_to_watts(scene.tx_power_dbm);
  c.noise_power_w = dbm_to_watts(scene.noise_power_dbm);
  c.theta_fake = Angle::from_degrees(scene.theta_fake_deg);
  if (scene.theta_true_deg) c.theta_true_pinned = Angle::from_degrees(*scene.theta_true_deg);
  c.window_half_width = Angle::from_degrees(scene.window_half_width_deg);
  c.window_count = scene.window_count;
  c.convention = scene.convention;
  c.seed = scene.seed;
  return c;
}

SolverParams ScenarioFile::solver_params() const {
  SolverParams p = SolverParams::defaults(scene.ris_elements);
  p.gamma = solver.gamma;
  p.i_max = solver.i_max;
  if (solver.eps_null) p.eps_null = *solver.eps_null;
  p.eps_reg = solver.eps_reg;
  p.polish = solver.polish;
  p.polish_max_iterations = solver.polish_max_iterations;
  return p;
}

std::string validate_scenario(const ScenarioFile& scenario) {
  const SceneConfig config = scenario.scene_config();
  try {
    config.validate();
    scenario.solver_params().validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  build_basis(config.window(), config.theta_fake, config.theta_true(), config.ris_elements);

  const auto& sw = scenario.sweeps;
  PositionGridSpec grid{sw.peb_x_range_m[0], sw.peb_x_range_m[1], sw.peb_y_range_m[0],
                        sw.peb_y_range_m[1], sw.peb_nx, sw.peb_ny};
  for (const double x : grid.xs()) {
    for (const double y : grid.ys()) {
      if (x == 0.0 && y == 0.0) {
        throw SchemaError("[sweeps] the PEB grid contains the origin, where the bearing is undefined");
      }
    }
  }

  char buf[160];
  const double derived = config.theta_true_derived().degrees();
  if (config.theta_true_pinned) {
    std::snprintf(buf, sizeof buf,
                  "feasible; derived θ_true = %.2f°, pinned θ_true = %.2f° (pinned wins)", derived,
                  config.theta_true_pinned->degrees());
  } else {
    std::snprintf(buf, sizeof buf, "feasible; derived θ_true = %.2f° (not pinned)", derived);
  }
  return buf;
}

}  // namespace rispoof
