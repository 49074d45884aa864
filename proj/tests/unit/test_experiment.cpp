#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "paulilab/experiment.hpp"
#include "paulilab/pauli.hpp"
#include "paulilab/sweep.hpp"

using namespace paulilab;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  return d;
}

ExperimentConfig tiny() {
  return parse_config(R"({"grid": {"dims": [6, 6, 6], "box": [4.2, 4.2, 4.2]},
                          "h": [1.0, 0.97, 0.95], "kappa": [0.5]})");
}

int count_lines(const fs::path& p) {
  std::ifstream in(p);
  int n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

TEST(Config, EmptyDocumentTakesDefaults) {
  const ExperimentConfig c = parse_config("{}");
  EXPECT_EQ(c.dims, (std::array<int, 3>{16, 16, 16}));
  EXPECT_EQ(c.potential.preset, "gaussian_well");
  EXPECT_EQ(c.h_values.size(), 3u);
  EXPECT_EQ(c.solver, "auto");
}

TEST(Config, UnknownKeyReportsLineAndColumn) {
  const std::string text = "{\n  \"grid\": {\"dims\": [8, 8, 8],\n    \"bogus\": 1}\n}\n";
  try {
    parse_config(text, "cfg");
    FAIL() << "no error";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 14);
    EXPECT_EQ(e.path(), "/grid/bogus");
    EXPECT_NE(std::string(e.what()).find("cfg:3:14"), std::string::npos) << e.what();
  }
}

TEST(Config, RejectsUnresolvedH) {
  const Grid g({8, 8, 8}, {6, 6, 6});
  const double bad = 0.9 * min_resolved_h(g);
  const std::string text = R"({"grid": {"dims": [8, 8, 8], "box": [6, 6, 6]}, "h": [)" +
                           std::to_string(bad) + "]}";
  EXPECT_THROW(parse_config(text), ConfigError);
}

TEST(Config, RejectsMalformedJson) {
  EXPECT_THROW(parse_config("{\"h\": [0.9,"), ConfigError);
  EXPECT_THROW(parse_config(R"({"kappa": [-1]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"grid": {"dims": [8, 8]}})"), ConfigError);
}

TEST(Config, JsonRoundTrip) {
  const ExperimentConfig c = tiny();
  const nlohmann::json j = to_json(c);
  EXPECT_EQ(to_json(parse_config(j.dump())), j);
}

TEST(Config, LocatesValues) {
  const auto loc = locate_json_values("{\n \"a\": [1,\n  {\"b\": 2}]\n}");
  EXPECT_EQ(loc.at("/a/0"), std::make_pair(2, 8));
  EXPECT_EQ(loc.at("/a/1/b"), std::make_pair(3, 9));
}

TEST(Sweep, PointHashIgnoresOutputAndWorkers) {
  ExperimentConfig a = tiny(), b = tiny();
  b.output = "elsewhere";
  b.workers = 4;
  const SweepPoint p{1.0, 0.5};
  EXPECT_EQ(point_hash(a, p), point_hash(b, p));
  EXPECT_EQ(point_hash(a, p).size(), 16u);
  b.mixing = 0.25;
  EXPECT_NE(point_hash(a, p), point_hash(b, p));
  EXPECT_NE(point_hash(a, p), point_hash(a, {0.97, 0.5}));
}

TEST(Sweep, RunSkipAndResumeAreIdempotent) {
  const ExperimentConfig c = tiny();
  const fs::path out = fresh_dir("paulilab_sweep_test");
  const SweepSummary first = run_sweep(c, out, 2, false);
  EXPECT_TRUE(first.failures.empty());
  EXPECT_EQ(first.computed, 3);
  EXPECT_EQ(count_lines(out / "index.csv"), 4);
  const SweepSummary second = run_sweep(c, out, 1, true);
  EXPECT_EQ(second.computed, 0);
  EXPECT_EQ(second.skipped, 3);
  EXPECT_EQ(count_lines(out / "index.csv"), 4);

  const auto records = load_records(out);
  ASSERT_EQ(records.size(), 3u);
  EXPECT_GT(records[0].h, records[1].h);
  for (const auto& r : records) {
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.energy, r.energy_zero);
    EXPECT_EQ(to_json(record_from_json(to_json(r))), to_json(r));
  }
  fs::remove_all(out);
}

TEST(Sweep, IndexColumnsMatchRows) {
  SweepRecord r;
  r.h = 0.5;
  r.kappa = 1.0;
  r.diagnostics = {{"mu", 0.0}};
  std::string row = index_row(r);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), static_cast<long>(index_columns().size()) - 1);
  EXPECT_EQ(index_columns().front(), "h");
}

TEST(Report, EmptyRecordsStillWriteAHeader) {
  const fs::path out = fresh_dir("paulilab_report_test");
  fs::create_directories(out);
  std::ostringstream table;
  write_report({}, ConstantsConfig{}, out, table);
  EXPECT_TRUE(fs::exists(out / "report.csv"));
  EXPECT_GE(count_lines(out / "report.csv"), 1);
  fs::remove_all(out);
}

TEST(Report, FitsNeedThreeDistinctH) {
  SweepRecord r;
  r.kappa = 0.5;
  r.h = 0.9;
  const FitReport f = fit_records({r});
  EXPECT_TRUE(f.fits.empty());
  EXPECT_FALSE(f.skipped.empty());
}

TEST(EndToEnd, DefaultSweepConverges) {
  const ExperimentConfig c = parse_config("{}");
  const fs::path out = fresh_dir("paulilab_default_sweep");
  const SweepSummary s = run_sweep(c, out, 1, false);
  EXPECT_TRUE(s.failures.empty());
  ASSERT_EQ(s.records.size(), 3u);
  for (const auto& r : s.records) {
    EXPECT_TRUE(r.converged) << r.h;
    EXPECT_LE(r.el_residual, c.tolerance);
    EXPECT_LE(r.energy, r.energy_zero);
    EXPECT_LT(r.trace_zero, 0.0);
    EXPECT_LT(r.weyl1, 0.0);
  }
  std::ostringstream table;
  write_report(s.records, c.constants, out, table);
  EXPECT_EQ(count_lines(out / "report.csv"), 4);
  fs::remove_all(out);
}
