#include <gtest/gtest.h>

#include <clocale>
#include <fstream>
#include <locale>
#include <sstream>
#include <string>

#include "coopsec/cli.hpp"
#include "test_support.hpp"

namespace coopsec {
namespace {

using testing::code_of;

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(COOPSEC_TEST_DATA_DIR) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(ParseConfig, EmptyDocumentGivesReferenceDefaults) {
  const SweepConfig c = cli::parse_config("");
  EXPECT_NEAR(c.geometry.noise_power, 1e-9, 1e-24);
  EXPECT_EQ(c.geometry.wavelength, 0.33);
  EXPECT_NEAR(c.geometry.cluster_radius, 1.65, 1e-12);
  EXPECT_NEAR(c.geometry.dest_distance, 33.0, 1e-12);
  EXPECT_EQ(c.geometry.path_loss_exponent, 4.0);
  EXPECT_NEAR(c.power_budget, 3.1622776601683794e-3, 1e-15);
  EXPECT_EQ(c.target_secrecy, 3.0);
  EXPECT_EQ(c.trials, 1000u);
}

TEST(ParseConfig, DbmConversion) {
  EXPECT_NEAR(cli::parse_config("noise_power_dbm = -60").geometry.noise_power, 1e-9, 1e-24);
  EXPECT_NEAR(cli::parse_config("power_budget_dbm = 0").power_budget, 1e-3, 1e-18);
  EXPECT_EQ(cli::parse_config("noise_power_w = 2e-9").geometry.noise_power, 2e-9);
}

TEST(ParseConfig, CommentsListsAndWavelengthScaling) {
  const SweepConfig c = cli::parse_config(
      "# header\n"
      "wavelength = 1   # metres\n"
      "\n"
      "grid_n = 10, 20\n"
      "strategies = coop_min_power,direct_min_power\n"
      "phase_model = uniform_random\n"
      "stage1_enabled = true\n"
      "stage1_power_w = 1e-4\n");
  EXPECT_EQ(c.geometry.cluster_radius, 5.0);
  EXPECT_EQ(c.geometry.dest_distance, 100.0);
  EXPECT_EQ(c.grid_n, (std::vector<std::size_t>{10, 20}));
  ASSERT_EQ(c.strategies.size(), 2u);
  EXPECT_EQ(c.strategies[1], Strategy::DirectMinPower);
  EXPECT_EQ(c.geometry.phase_model, PhaseModel::UniformRandom);
  EXPECT_TRUE(c.stage1.enabled);
  EXPECT_EQ(c.stage1.stage1_power, 1e-4);
}

TEST(ParseConfig, ZeroNodesIsParseError) {
  EXPECT_EQ(code_of([] { (void)cli::parse_config("n_nodes = 0"); }), Errc::ParseError);
}

TEST(ParseConfig, ErrorsCarryLineAndColumn) {
  try {
    (void)cli::parse_config("trials = 10\nwavelength =  abc\n");
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 2, column 15"), std::string::npos) << e.what();
  }
  EXPECT_EQ(code_of([] { (void)cli::parse_config("just words"); }), Errc::ParseError);
  EXPECT_EQ(code_of([] { (void)cli::parse_config("trials = 1\ntrials = 2"); }), Errc::ParseError);
  EXPECT_EQ(code_of([] { (void)cli::parse_config("strategies = coop_magic"); }), Errc::ParseError);
}

TEST(ParseConfig, UnknownKey) {
  EXPECT_EQ(code_of([] { (void)cli::parse_config("noise_power = 1"); }), Errc::UnknownKey);
}

TEST(ParseConfig, UnitErrors) {
  EXPECT_EQ(code_of([] { (void)cli::parse_config("noise_power_w = 0"); }), Errc::UnitError);
  EXPECT_EQ(code_of([] { (void)cli::parse_config("power_budget_w = -1"); }), Errc::UnitError);
  EXPECT_EQ(code_of([] { (void)cli::parse_config("noise_power_w = 1e-9\nnoise_power_dbm = -60"); }), Errc::UnitError);
}

TEST(ParseConfig, PresetsResolve) {
  for (const char* name : {"fig2", "fig3", "fig4", "fig5"}) {
    const auto doc = cli::preset_document(name);
    ASSERT_TRUE(doc.has_value()) << name;
    EXPECT_NO_THROW((void)cli::parse_config(*doc));
  }
  EXPECT_FALSE(cli::preset_document("fig9").has_value());
  const auto merged = cli::merge_entries(cli::parse_document(*cli::preset_document("fig2")),
                                         cli::parse_document("trials = 7"));
  EXPECT_EQ(cli::resolve_config(merged).trials, 7u);
}

SweepResult one_row() {
  SweepResult r;
  SweepRow row;
  row.n_nodes = 10;
  row.n_eavesdroppers = 1;
  row.strategy = Strategy::CoopMinPower;
  row.metric_name = "transmit_power_w";
  row.mean = 1.234567890123456e-3;
  row.std_error = 2.5e-5;
  row.infeasible = 2;
  row.trials = 100;
  r.rows.push_back(row);
  return r;
}

TEST(EmitResults, SingleRowCsv) {
  const std::string csv = cli::emit_results(one_row(), cli::Format::Csv);
  EXPECT_EQ(csv,
            "n_nodes,n_eavesdroppers,strategy,metric_name,mean,stderr,infeasible,trials\n"
            "10,1,coop_min_power,transmit_power_w,0.00123456789012,2.5e-05,2,100\n");
}

TEST(EmitResults, JsonRoundTrip) {
  SweepResult r = one_row();
  SweepRow nan_row = r.rows[0];
  nan_row.strategy = Strategy::DirectMinPower;
  nan_row.mean = NAN;
  nan_row.std_error = NAN;
  nan_row.infeasible = 100;
  r.rows.push_back(nan_row);
  cli::RunManifest m;
  m.base_seed = 9;
  m.prng_id = std::string(rng::kPrngId);
  const std::string json = cli::emit_results(r, cli::Format::Json, m);
  const auto back = cli::parse_rows_json(json);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], r.rows[0]);
  EXPECT_TRUE(std::isnan(back[1].mean));
  EXPECT_EQ(back[1].infeasible, 100u);
  EXPECT_EQ(nlohmann::json::parse(json).at("manifest").at("base_seed"), 9);
}

TEST(EmitResults, LocaleIndependent) {
  const std::string before = cli::emit_csv(one_row());
  const char* old = std::setlocale(LC_ALL, nullptr);
  const std::string saved = old ? old : "C";
  bool switched = false;
  for (const char* name : {"de_DE.UTF-8", "de_DE.utf8", "fr_FR.UTF-8", "fr_FR.utf8"})
    if (std::setlocale(LC_ALL, name)) {
      switched = true;
      break;
    }
  const std::string after = cli::emit_csv(one_row());
  std::setlocale(LC_ALL, saved.c_str());
  EXPECT_EQ(before, after);
  EXPECT_EQ(after.find(';'), std::string::npos);
  if (!switched) GTEST_LOG_(INFO) << "no comma-decimal locale installed; checked C locale only";
}

TEST(EmitResults, DemoConfigMatchesGoldenFile) {
  const std::string golden = read_data("demo_golden.csv");
  ASSERT_FALSE(golden.empty());
  const SweepConfig c = cli::parse_config(read_data("demo.cfg"));
  EXPECT_EQ(cli::emit_csv(run_sweep(c)), golden);
}

TEST(EchoConfig, RecordsResolvedValues) {
  const auto j = cli::echo_config(cli::parse_config("trials = 3\nseed = 5"));
  EXPECT_EQ(j.at("trials"), 3);
  EXPECT_EQ(j.at("seed"), 5);
  EXPECT_EQ(j.at("noise_power_w"), cli::parse_config("").geometry.noise_power);
}

}  // namespace
}  // namespace coopsec
