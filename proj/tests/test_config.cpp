#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "qfield/qfield.hpp"

using namespace qfield;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_problem(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.problems().front();
  }
  return "";
}

Json default_doc() { return Json::parse(default_config_text()); }

}  // namespace

TEST(ParseConfig, MinimalVacuum) {
  const RunConfig cfg = parse_config(R"({"grid": {"omega_min": 1, "delta_omega": 1, "count": 2}})");
  EXPECT_EQ(cfg.state.kind, StateKind::Vacuum);
  EXPECT_EQ(cfg.line->count(), 2u);
  EXPECT_FALSE(cfg.three_d());
  EXPECT_TRUE(cfg.checks.empty());
  EXPECT_EQ(cfg.medium, Medium::natural());
}

TEST(ParseConfig, ModeIndexOutOfRangeNamesPath) {
  const std::string text = R"({"grid": {"omega_min": 1, "delta_omega": 1, "count": 2},
    "state": {"kind": "coherent", "amplitudes": [{"mode": {"direction": "L", "polarization": 1, "index": 2}, "re": 1}]}})";
  EXPECT_EQ(first_problem(text).rfind("/state/amplitudes/0/mode/index:", 0), 0u) << first_problem(text);
}

TEST(ParseConfig, StrictKeysAndTypes) {
  EXPECT_EQ(first_problem(R"({"grid": {"omega_min": 1, "delta_omega": 1, "count": 2}, "medium": {"colour": 1}})"),
            "/medium/colour: unknown key");
  EXPECT_EQ(first_problem(R"({"grid": {"omega_min": 1, "delta_omega": 1, "count": "two"}})"),
            "/grid/count: expected a non-negative integer");
  EXPECT_EQ(first_problem(R"({"grid": {"omega_min": -1, "delta_omega": 1, "count": 2}})"),
            "/grid/omega_min: must be a positive finite number");
  EXPECT_EQ(first_problem(R"({"medium": {}})"), "/: exactly one of \"grid\" (1D) or \"lattice\" (3D) is required");
  EXPECT_EQ(first_problem(R"({"grid": {"omega_min": 1, "delta_omega": 1, "count": 2}, "checks": ["divergence_3d"]})"),
            "/checks/0/name: check 'divergence_3d' needs a 3D lattice");
  EXPECT_EQ(first_problem(R"({"grid": {"omega_min": 1, "delta_omega": 1, "count": 2},
                             "checks": [{"name": "maxwell_1d", "options": {"courrant": 1}}]})"),
            "/checks/0/options/courrant: unknown key");
  EXPECT_EQ(first_problem(R"({"grid": {"omega_min": 1, "delta_omega": 1, "count": 2}, "checks": ["bogus"]})"),
            "/checks/0/name: unknown check 'bogus'");
  EXPECT_EQ(first_problem(R"({"lattice": {"k_spacing": 1, "half_extent": 1},
                             "state": {"kind": "fock", "occupations": [{"mode": {"k": [0, 0, 0], "polarization": 1}, "count": 1}]}})"),
            "/state/occupations/0/mode/k: lattice point is outside the k grid or is the origin");
  EXPECT_NE(first_problem("{not json").find("malformed JSON"), std::string::npos);
}

TEST(ParseConfig, CollectsEveryProblem) {
  try {
    parse_config(R"({"grid": {"omega_min": 1, "delta_omega": 0, "count": 2}, "n_max": 0, "extra": 1})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.problems().size(), 3u);
  }
}

TEST(ParseConfig, EmitRoundTrip) {
  for (const std::string& text : {std::string(default_config_text()), read_file(QFIELD_CONFIG_DIR "/lattice3d.json"),
                                  read_file(QFIELD_CONFIG_DIR "/default.json")}) {
    const RunConfig cfg = parse_config(text);
    const RunConfig again = parse_config(emit_config(cfg).dump());
    EXPECT_EQ(cfg, again);
    EXPECT_EQ(emit_config(again).dump(), emit_config(cfg).dump());
  }
}

TEST(ParseConfig, ShippedDefaultMatchesBuiltIn) {
  EXPECT_EQ(parse_config(read_file(QFIELD_CONFIG_DIR "/default.json")), parse_config(default_config_text()));
}

TEST(StateJson, BitExactRoundTrip) {
  const auto u = make_universe(FrequencyGrid(0.5, 0.25, 3));
  Rng rng(99);
  const auto psi = random_state(u, 4, {0, 5, 11}, 3, rng);
  const auto text = state_to_json(psi).dump();
  const auto back = state_from_json(Json::parse(text), u);
  EXPECT_EQ(back.n_max(), psi.n_max());
  ASSERT_EQ(back.amplitudes().size(), psi.amplitudes().size());
  for (const auto& [tuple, amp] : psi.amplitudes()) {
    EXPECT_EQ(back.amplitude(tuple).real(), amp.real());
    EXPECT_EQ(back.amplitude(tuple).imag(), amp.imag());
  }
  EXPECT_EQ(state_to_json(back).dump(), text);
}

TEST(StateJson, RejectsUnknownLabelsAndCapViolations) {
  const auto u = make_universe(FrequencyGrid(1.0, 1.0, 1));
  EXPECT_THROW(state_from_json(Json::parse(R"({"n_max": 2, "terms": [{"occupations": [["Q9@ω=1", 1]], "re": 1, "im": 0}]})"), u),
               std::invalid_argument);
  EXPECT_THROW(state_from_json(Json::parse(R"({"n_max": 2, "terms": [{"occupations": [["L1@ω=1", 3]], "re": 1, "im": 0}]})"), u),
               std::invalid_argument);
  const auto ok = state_from_json(Json::parse(R"({"n_max": 2, "terms": [{"occupations": [["R2@ω=1", 2]], "re": 1, "im": 0}]})"), u);
  EXPECT_EQ(number_expectation(ok, u->index_of(ModeId{Direction::R, Polarization::Two, 0})), 2.0);
}

TEST(Suite, EmptyCheckListSucceeds) {
  const auto result = run_suite(parse_config(R"({"grid": {"omega_min": 1, "delta_omega": 1, "count": 1}})"));
  EXPECT_TRUE(result.reports.empty());
  EXPECT_TRUE(result.pass);
  EXPECT_EQ(suite_to_json(result).dump(), R"({"checks":[],"pass":true})");
}

TEST(Suite, DefaultConfigPassesAndIsSorted) {
  const auto result = run_suite(parse_config(default_config_text()));
  EXPECT_TRUE(result.pass);
  for (const auto& r : result.reports) EXPECT_TRUE(r.pass) << r.check << " " << r.relative();
  for (std::size_t i = 1; i < result.reports.size(); ++i) {
    EXPECT_LE(result.reports[i - 1].check, result.reports[i].check);
  }
  for (const auto& r : result.reports) {
    if (r.order) {
      EXPECT_GE(*r.order, 1.9) << r.check;
    }
  }
}

TEST(Suite, LatticeConfigPasses) {
  const auto result = run_suite(parse_config(read_file(QFIELD_CONFIG_DIR "/lattice3d.json")));
  for (const auto& r : result.reports) EXPECT_TRUE(r.pass) << r.check << " " << r.relative();
}

TEST(Suite, Deterministic) {
  const RunConfig cfg = parse_config(default_config_text());
  EXPECT_EQ(suite_to_json(run_suite(cfg)).dump(2), suite_to_json(run_suite(cfg)).dump(2));
}

TEST(Suite, NegativeControlsFail) {
  Json doc = default_doc();
  doc["checks"] = Json::array({Json{{"name", "energy_equivalence"}, {"options", {{"k_scale", 1.01}}}},
                               Json{{"name", "mode_ode"}, {"options", {{"flip_branch", true}}}},
                               Json{{"name", "coherent_state"}, {"n_max", 3}}});
  const auto result = run_suite(parse_config(doc));
  for (const auto& r : result.reports) {
    if (r.check == "energy_equivalence.zpe") continue;  // the vacuum part is scaled too but checked separately
    EXPECT_FALSE(r.pass) << r.check;
  }
  EXPECT_FALSE(result.pass);
}

TEST(Suite, CheckErrorsCarryPosition) {
  Json doc = default_doc();
  doc["state"] = {{"kind", "coherent"},
                  {"amplitudes", {{{"mode", {{"direction", "L"}, {"polarization", 1}, {"index", 0}}}, {"re", 1}},
                                  {{"mode", {{"direction", "R"}, {"polarization", 1}, {"index", 0}}}, {"re", 1}}}}};
  doc["checks"] = Json::array({"spectrum", "direction"});
  try {
    run_suite(parse_config(doc));
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_EQ(std::string(e.what()).rfind("/checks/1 (direction):", 0), 0u) << e.what();
  }
}

TEST(Outputs, ModeTableHasFourRowsPerFrequency) {
  std::ostringstream out;
  write_mode_table(out, parse_config(R"({"grid": {"omega_min": 1, "delta_omega": 1, "count": 1}})"));
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
  EXPECT_NE(text.find("0,L1@ω=1,L,1,1,1,0.28209479177387814"), std::string::npos) << text;
}

TEST(Outputs, VacuumSimulationIsZero) {
  std::ostringstream out;
  write_simulation(out, parse_config(R"({"grid": {"omega_min": 1, "delta_omega": 1, "count": 2},
                                         "sampling": {"x": {"start": 0, "stop": 1, "count": 3}, "t": {"start": 0, "stop": 1, "count": 2}}})"));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,t,Ex,Ey,Ez,Bx,By,Bz");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_NE(line.find(",0,0,0,0,0,0"), std::string::npos) << line;
  }
  EXPECT_EQ(rows, 6);
}

TEST(Outputs, DescribeState) {
  const Json d = describe_state(parse_config(default_config_text()));
  EXPECT_NEAR(d["mean_photon_number"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(d["modes"].size(), 1u);
  EXPECT_EQ(d["modes"][0]["label"], "L1@ω=1");
  EXPECT_EQ(d["zero_point_energy"].get<double>(), 72.0);
  const auto back = state_from_json(d["state"], make_universe(FrequencyGrid(1.0, 1.0, 8)));
  EXPECT_NEAR(back.norm(), 1.0, 1e-14);
}
