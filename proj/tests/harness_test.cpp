#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "foilex/errors.hpp"
#include "foilex/harness.hpp"

namespace foilex {
namespace {

const std::string kData = FOILEX_DATA_DIR;

ExplainRequest mini_request(Method method = Method::kBlind) {
  ExplainRequest r;
  r.domain_file = kData + "/mini_rover/domain.pddl";
  r.problem_file = kData + "/mini_rover/problem.pddl";
  r.foils_file = kData + "/mini_rover/foils.json";
  r.lattice_file = kData + "/mini_rover/lattice.json";
  r.method = method;
  return r;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("foilex_harness_" + name);
  std::filesystem::create_directories(dir);
  return dir;
}

void write(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

TEST(Harness, ParseFormat) {
  EXPECT_EQ(parse_format("text"), OutputFormat::kText);
  EXPECT_EQ(parse_format("json"), OutputFormat::kJson);
  EXPECT_EQ(parse_format("csv"), OutputFormat::kCsv);
  EXPECT_THROW(parse_format("xml"), InputError);
}

TEST(Harness, RunExplainMiniRover) {
  auto report = run_explain(mini_request());
  EXPECT_EQ(report.domain, "mini-rover");
  EXPECT_EQ(report.total_cost, 16U);
  ASSERT_TRUE(report.plan_valid.has_value());
  EXPECT_TRUE(*report.plan_valid);
  EXPECT_EQ(report.mmin.size(), 2U);
  EXPECT_EQ(report.explanation.ids, (std::vector<std::string>{"battery_level_above_75_perc"}));
  EXPECT_EQ(report.explanation.cost, 3U);
  EXPECT_EQ(report.messages.size(), 3U);

  auto text = format_report(report, OutputFormat::kText);
  EXPECT_NE(text.find("explanation: {battery_level_above_75_perc}, cost 3"), std::string::npos);
  EXPECT_NE(text.find("sample_rock-has-precondition-battery_level_above_75_perc"), std::string::npos);

  auto doc = nlohmann::json::parse(format_report(report, OutputFormat::kJson));
  EXPECT_EQ(doc["explanation"]["cost"], 3);
  EXPECT_EQ(doc["messages"].size(), 3U);
  EXPECT_EQ(doc["total_cost"], 16);

  auto csv = format_report(report, OutputFormat::kCsv);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(csv.rfind("unit,kind,action,fluent,message\n", 0), 0U);
}

TEST(Harness, FractionOverridesLatticeFile) {
  auto request = mini_request();
  request.fraction = 1.0;
  request.seed = 3;
  auto report = run_explain(request);
  EXPECT_GT(report.unit_ids.size(), 4U);
  EXPECT_TRUE(report.explanation.verified);
}

TEST(Harness, EmptyFoilsRejected) {
  auto dir = scratch_dir("empty");
  write(dir / "foils.json", R"j({"foils": []})j");
  auto request = mini_request();
  request.foils_file = dir / "foils.json";
  EXPECT_THROW(run_explain(request), InputError);
}

TEST(Harness, PoolSample) {
  auto loaded = load_model(kData + "/suite/rover/domain.pddl", kData + "/suite/rover/p01.pddl");
  auto lattice = make_lattice(
      loaded.model, parse_lattice_file(read_text_file(kData + "/suite/rover/p01_lattice.json")), 0);
  auto pool = parse_foil_file(read_text_file(kData + "/suite/rover/p01_foils.json")).foils;
  ASSERT_EQ(pool.size(), 8U);
  EXPECT_EQ(foil_pool_sample(lattice, pool, pool.size(), 5), pool);

  auto a = foil_pool_sample(lattice, pool, 4, 11);
  EXPECT_EQ(a, foil_pool_sample(lattice, pool, 4, 11));
  ASSERT_EQ(a.size(), 4U);
  std::vector<std::size_t> positions;
  for (const auto& f : a) {
    auto it = std::find(pool.begin(), pool.end(), f);
    ASSERT_NE(it, pool.end());
    positions.push_back(static_cast<std::size_t>(it - pool.begin()));
  }
  EXPECT_TRUE(std::is_sorted(positions.begin(), positions.end()));
  EXPECT_EQ(std::adjacent_find(positions.begin(), positions.end()), positions.end());

  EXPECT_THROW(foil_pool_sample(lattice, pool, 9, 1), InputError);
}

TEST(Harness, PoolRejectsFoilNamed) {
  auto loaded = load_model(kData + "/mini_rover/domain.pddl", kData + "/mini_rover/problem.pddl");
  auto lattice = make_lattice(
      loaded.model, parse_lattice_file(read_text_file(kData + "/mini_rover/lattice.json")), 0);
  auto file = parse_foil_file(read_text_file(kData + "/mini_rover/foils.json"));
  FoilSet pool = file.foils;
  Foil plan = file.plan;
  plan.name = "the_plan";
  pool.push_back(plan);
  try {
    foil_pool_sample(lattice, pool, 1, 0);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("the_plan"), std::string::npos);
  }
}

TEST(Harness, CsvRoundTrip) {
  BenchmarkRow row{"ro,ver", "p\"1\"", 7, 7, 52, 4, "greedy", 3.5, 2, 3, 0.125};
  BenchmarkRow avg{"rover", "*", std::nullopt, 6.5, 40, 4, "blind", 2.25, 1.5, 2, 1e-5};
  std::string text = bench_csv_header() + "\n" + to_csv_line(row) + "\n" + to_csv_line(avg) + "\n";
  auto parsed = parse_bench_csv(text);
  ASSERT_EQ(parsed.size(), 2U);
  EXPECT_EQ(parsed[0], row);
  EXPECT_EQ(parsed[1], avg);
  EXPECT_THROW(parse_bench_csv("nope\n"), InputError);
  EXPECT_THROW(parse_bench_csv(bench_csv_header() + "\na,b\n"), InputError);
}

TEST(Harness, AverageRows) {
  std::vector<BenchmarkRow> rows{
      {"d", "p1", 1, 4, 10, 2, "blind", 2, 1, 1, 1.0},
      {"d", "p2", 1, 6, 20, 2, "blind", 4, 3, 3, 3.0},
      {"d", "p1", 1, 4, 10, 2, "greedy", 5, 2, 1, 0.5},
      {"e", "p1", 1, 4, 10, 2, "blind", 1, 1, 1, 0.0},
  };
  auto avg = average_rows(rows);
  ASSERT_EQ(avg.size(), 3U);
  EXPECT_EQ(avg[0].domain, "d");
  EXPECT_EQ(avg[0].method, "blind");
  EXPECT_TRUE(avg[0].average());
  EXPECT_DOUBLE_EQ(avg[0].cost, 3);
  EXPECT_DOUBLE_EQ(avg[0].units, 5);
  EXPECT_DOUBLE_EQ(avg[0].seconds, 2);
  EXPECT_EQ(avg[1].method, "greedy");
  EXPECT_EQ(avg[2].domain, "e");
}

std::filesystem::path mini_manifest() {
  auto dir = scratch_dir("bench");
  nlohmann::json doc;
  doc["problems"] = {{{"domain", "mini"},
                      {"domain_file", kData + "/mini_rover/domain.pddl"},
                      {"problem_file", kData + "/mini_rover/problem.pddl"},
                      {"foils", kData + "/mini_rover/foils.json"},
                      {"lattice", kData + "/mini_rover/lattice.json"}}};
  write(dir / "manifest.json", doc.dump());
  return dir / "manifest.json";
}

TEST(Harness, BenchOneRowPlusAverage) {
  BenchOptions options;
  options.manifest = mini_manifest();
  options.foil_sizes = {1};
  options.methods = {Method::kBlind};
  auto result = run_bench(options);
  EXPECT_TRUE(result.failures.empty());
  ASSERT_EQ(result.rows.size(), 2U);
  EXPECT_FALSE(result.rows[0].average());
  EXPECT_TRUE(result.rows[1].average());
  EXPECT_DOUBLE_EQ(result.rows[0].cost, 3);
  EXPECT_DOUBLE_EQ(result.rows[0].total_cost, 16);
}

TEST(Harness, BenchDeterministicExceptTime) {
  BenchOptions options;
  options.manifest = mini_manifest();
  options.seeds = {1, 2};
  options.foil_sizes = {1};
  options.methods = {Method::kBlind, Method::kAStar, Method::kGreedy};
  auto a = run_bench(options).rows;
  auto b = run_bench(options).rows;
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i].seconds = b[i].seconds = 0;
    EXPECT_EQ(a[i], b[i]);
  }
  EXPECT_EQ(a[1].method, "heuristic");
}

TEST(Harness, BenchReportsShortPool) {
  BenchOptions options;
  options.manifest = mini_manifest();
  options.foil_sizes = {2};
  auto result = run_bench(options);
  EXPECT_FALSE(result.failures.empty());
}

}  // namespace
}  // namespace foilex
