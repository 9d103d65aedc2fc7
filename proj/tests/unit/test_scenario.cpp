#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "../support.hpp"
#include "rispoof/errors.hpp"
#include "rispoof/scenario.hpp"

using namespace rispoof;

namespace {

bool message_contains(const std::string& text, const std::string& needle) {
  try {
    parse_scenario(text, "t.toml");
  } catch (const SchemaError& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("reference file parses into the expected scene") {
    const ScenarioFile s = testing::reference_scenario();
    CHECK(s.scene.name == "reference");
    CHECK(s.scene.bs_antennas == 16);
    CHECK(s.scene.ris_elements == 32);
    REQUIRE(s.scene.theta_true_deg.has_value());
    CHECK(*s.scene.theta_true_deg == 20.0);
    CHECK(s.solver.eps_null.value() == doctest::Approx(1.024e-3));
    CHECK(s.sweeps.leakage_caps == std::vector<double>{0.1, 1.0, 10.0});
    const SceneConfig c = s.scene_config();
    CHECK(c.tx_power_w == doctest::Approx(0.1));
    CHECK(c.noise_power_w == doctest::Approx(1e-11));
    CHECK(c.theta_fake.degrees() == doctest::Approx(-48.0));
    CHECK(c.convention == KernelConvention::FixedIncidence);
  }

  TEST_CASE("empty text yields the defaults") {
    const ScenarioFile s = parse_scenario("");
    CHECK(s == ScenarioFile{});
    CHECK(s.solver_params().eps_null == doctest::Approx(1e-6 * 32 * 32));
  }

  TEST_CASE("serialize round-trips") {
    const ScenarioFile s = testing::reference_scenario();
    const std::string text = serialize(s);
    CHECK(parse_scenario(text) == s);
    CHECK(serialize(parse_scenario(text)) == text);

    ScenarioFile odd;
    odd.scene.name = "quote \" and back\\slash";
    odd.scene.theta_fake_deg = -47.123456789012345;
    odd.scene.convention = KernelConvention::SpecularPlusPi;
    odd.sweeps.rho_levels = {1.5};
    CHECK(parse_scenario(serialize(odd)) == odd);
  }

  TEST_CASE("config hash is stable and sensitive") {
    const ScenarioFile s = testing::reference_scenario();
    CHECK(config_hash(s) == config_hash(parse_scenario(serialize(s))));
    ScenarioFile t = s;
    t.scene.seed = 2;
    CHECK(config_hash(s) != config_hash(t));
    CHECK(hash_hex(0x1234) == "0000000000001234");
  }

  TEST_CASE("comments and whitespace are ignored") {
    const ScenarioFile s = parse_scenario(
        "# leading comment\n\n[scene]   # trailing\n  pilots = 20  # twenty\nname = \"a # b\"\n");
    CHECK(s.scene.pilots == 20);
    CHECK(s.scene.name == "a # b");
  }

  TEST_CASE("schema errors name the problem") {
    CHECK(message_contains("[scene]\nbogus = 1\n", "unknown key 'bogus'"));
    CHECK(message_contains("[nope]\n", "unknown section"));
    CHECK(message_contains("[scene]\npilots = 1\npilots = 2\n", "duplicate key"));
    CHECK(message_contains("[scene]\npilots = 2.5\n", "integer"));
    CHECK(message_contains("[scene]\nname = 3\n", "string"));
    CHECK(message_contains("[solver]\npolish = 1\n", "true or false"));
    CHECK(message_contains("pilots = 3\n", "outside any section"));
    CHECK(message_contains("[scene]\nris_position_m = [1.0]\n", "two numbers"));
    CHECK(message_contains("[scene]\nkernel_convention = \"sideways\"\n", "kernel_convention"));
    CHECK(message_contains("[scene]\npilots = 1\n\n[scene]\n", "duplicate section"));
    CHECK(message_contains("[scene]\nbogus = 1\n", "t.toml:2"));
    CHECK_THROWS_AS(parse_scenario("[scene]\npilots = -4\n"), SchemaError);
  }

  TEST_CASE("validation reports derived and pinned true angles") {
    const std::string line = validate_scenario(testing::reference_scenario());
    CHECK(line.find("feasible") == 0);
    CHECK(line.find("19.50") != std::string::npos);
    CHECK(line.find("pinned wins") != std::string::npos);
    ScenarioFile s = testing::reference_scenario();
    s.scene.theta_true_deg.reset();
    CHECK(validate_scenario(s).find("not pinned") != std::string::npos);
  }

  TEST_CASE("validation rejects infeasible designs by condition") {
    ScenarioFile s = testing::reference_scenario();
    s.scene.ris_elements = 16;
    s.solver.eps_null.reset();
    try {
      validate_scenario(s);
      FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
      CHECK(std::string(e.what()).find("M >= 2K") != std::string::npos);
    }
    s = testing::reference_scenario();
    s.scene.theta_fake_deg = 20.0;
    try {
      validate_scenario(s);
      FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
      CHECK(std::string(e.what()).find("w not in span(V)") != std::string::npos);
    }
  }

  TEST_CASE("a PEB grid through the origin is a schema error") {
    ScenarioFile s = testing::reference_scenario();
    s.sweeps.peb_ny = 5;  // -80..80 in five points hits y = 0 at x = 0
    CHECK_THROWS_AS(validate_scenario(s), SchemaError);
  }

  TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-48.0) == "-48");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_number(std::nan("")) == "nan");
    const double x = 0.1 + 0.2;
    CHECK(std::stod(format_number(x)) == x);
  }

  TEST_CASE("missing files raise") {
    CHECK_THROWS(load_scenario("/nonexistent/scenario.toml"));
  }
}
