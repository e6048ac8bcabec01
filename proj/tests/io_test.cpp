#include <gtest/gtest.h>

#include "foilex/errors.hpp"
#include "foilex/io.hpp"

namespace foilex {
namespace {

const std::string kData = FOILEX_DATA_DIR;

TEST(Io, NormalizeActionName) {
  EXPECT_EQ(normalize_action_name("navigate w0 w1"), "navigate_w0_w1");
  EXPECT_EQ(normalize_action_name("(Navigate  W0 w1)"), "navigate_w0_w1");
  EXPECT_EQ(normalize_action_name(" navigate_w0_w1 "), "navigate_w0_w1");
  EXPECT_THROW(normalize_action_name("(navigate w0"), InputError);
  EXPECT_THROW(normalize_action_name("  "), InputError);
}

TEST(Io, FoilFileForms) {
  auto f = parse_foil_file(R"j({"plan": ["a x"], "foils": [["b"], {"name": "mine", "actions": ["(c y)"]}]})j");
  EXPECT_EQ(f.plan.actions, (std::vector<std::string>{"a_x"}));
  ASSERT_EQ(f.foils.size(), 2U);
  EXPECT_EQ(f.foils[0].name, "foil1");
  EXPECT_EQ(f.foils[1].name, "mine");
  EXPECT_EQ(f.foils[1].actions, (std::vector<std::string>{"c_y"}));
}

TEST(Io, FoilFileErrors) {
  EXPECT_THROW(parse_foil_file("not json"), InputError);
  EXPECT_THROW(parse_foil_file("[]"), InputError);
  EXPECT_THROW(parse_foil_file(R"j({"plan": []})j"), InputError);
  EXPECT_THROW(parse_foil_file(R"j({"foils": [3]})j"), InputError);
  EXPECT_TRUE(parse_foil_file(R"j({"foils": []})j").foils.empty());
}

TEST(Io, LatticeFileForms) {
  auto explicit_units = parse_lattice_file(R"j({"granularity": "fluent", "units": {"u": ["(full store1)"]}})j");
  ASSERT_TRUE(explicit_units.config);
  EXPECT_EQ(explicit_units.config->granularity, Granularity::kFluent);
  EXPECT_EQ(explicit_units.config->units.at("u"), (std::vector<std::string>{"full_store1"}));
  auto random = parse_lattice_file(R"j({"fraction": 0.25, "seed": 9})j");
  EXPECT_FALSE(random.config);
  EXPECT_DOUBLE_EQ(random.fraction, 0.25);
  EXPECT_EQ(random.seed, 9U);
  EXPECT_THROW(parse_lattice_file("{}"), InputError);
  EXPECT_THROW(parse_lattice_file(R"j({"granularity": "schema", "units": {}})j"), InputError);
}

TEST(Io, Manifest) {
  auto entries = parse_manifest(read_text_file(kData + "/suite/manifest.json"), kData + "/suite");
  ASSERT_EQ(entries.size(), 150U);
  EXPECT_EQ(entries.front().domain, "rover");
  EXPECT_TRUE(entries.front().lattice.config.has_value());
  EXPECT_THROW(parse_manifest(R"j({"problems": [{"domain": "x"}]})j", "."), InputError);
}

TEST(Io, MissingFile) { EXPECT_THROW(read_text_file(kData + "/nope.pddl"), InputError); }

}  // namespace
}  // namespace foilex
