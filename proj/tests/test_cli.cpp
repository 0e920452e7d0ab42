#include <gtest/gtest.h>

#include <sstream>

#include "../tools/cli.hpp"
#include "json.hpp"
#include "test_util.hpp"
#include "vcd/media_io.hpp"
#include "vcd/reward_opt.hpp"

using vcd::testing::read_file;
using vcd::testing::TempDir;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = vcd::cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path write_video(const TempDir& dir, const std::string& name, int n, unsigned seed) {
  const fs::path p = dir / name;
  fs::create_directories(p);
  const vcd::Frame cond = vcd::make_textured_frame(16, 16, 3, seed);
  for (int i = 0; i < n; ++i) {
    vcd::save_vcdf(p / ("f" + std::to_string(i) + ".vcdf"), vcd::circular_shift(cond, i, 0));
  }
  return p;
}

}  // namespace

TEST(Cli, ScoreWritesReports) {
  TempDir dir;
  const auto video = write_video(dir, "v", 4, 1);
  const auto r = run({"score", "--video", video.string(), "--out", (dir / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(read_file(dir / "out" / "report.json"));
  EXPECT_EQ(j["variant"], "vcd");
  EXPECT_EQ(j["frames"].size(), 3u);
  EXPECT_EQ(j["frames"][0]["i"], 2);
  EXPECT_EQ(j["frames"][0]["amp"].get<double>() <= 1e-9, true);
  const std::string csv = read_file(dir / "out" / "report.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "i,amp,phase,weight,total");
  EXPECT_FALSE(fs::exists(dir / "out" / "report.svg"));
}

TEST(Cli, FormatSelection) {
  TempDir dir;
  const auto video = write_video(dir, "v", 3, 1);
  ASSERT_EQ(run({"score", "--video", video.string(), "--format", "csv", "--out", (dir / "o").string()}).code, 0);
  EXPECT_TRUE(fs::exists(dir / "o" / "report.csv"));
  EXPECT_FALSE(fs::exists(dir / "o" / "report.json"));
}

TEST(Cli, AblateWritesAllVariants) {
  TempDir dir;
  const auto video = write_video(dir, "v", 3, 2);
  const auto r = run({"ablate", "--video", video.string(), "--out", (dir / "out").string(), "--plot"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* v : {"vcd", "amp_only", "phase_only", "vcd_l2", "vcd_feat"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / (std::string(v) + ".json"))) << v;
    EXPECT_TRUE(fs::exists(dir / "out" / (std::string(v) + ".csv"))) << v;
  }
  EXPECT_TRUE(fs::exists(dir / "out" / "summary.csv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "ablate.svg"));
}

TEST(Cli, SingleFrameVideoFails) {
  TempDir dir;
  const auto video = write_video(dir, "v", 1, 3);
  const auto r = run({"score", "--video", video.string(), "--out", (dir / "out").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("N >= 2"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  TempDir dir;
  const auto video = write_video(dir, "v", 3, 3);
  EXPECT_EQ(run({"score", "--video", video.string(), "--out", dir.path().string(), "--bogus"}).code, 2);
  EXPECT_EQ(run({"score", "--video", video.string()}).code, 2);
  EXPECT_EQ(run({"score", "--video", video.string(), "--out", dir.path().string(), "--order", "3"}).code, 2);
}

TEST(Cli, MissingInputIsError) {
  TempDir dir;
  const auto r = run({"score", "--video", (dir / "nope").string(), "--out", (dir / "o").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  TempDir dir;
  const auto video = write_video(dir, "v", 5, 4);
  for (const char* o : {"a", "b"}) {
    ASSERT_EQ(run({"score", "--video", video.string(), "--encoder", "random", "--seed", "3", "--out",
                   (dir / o).string()})
                  .code,
              0);
  }
  EXPECT_EQ(read_file(dir / "a" / "report.json"), read_file(dir / "b" / "report.json"));
  EXPECT_EQ(read_file(dir / "a" / "report.csv"), read_file(dir / "b" / "report.csv"));
}

TEST(Cli, PlotDoesNotChangeReports) {
  TempDir dir;
  const auto video = write_video(dir, "v", 4, 5);
  ASSERT_EQ(run({"score", "--video", video.string(), "--out", (dir / "a").string()}).code, 0);
  ASSERT_EQ(run({"score", "--video", video.string(), "--out", (dir / "b").string(), "--plot"}).code, 0);
  EXPECT_EQ(read_file(dir / "a" / "report.json"), read_file(dir / "b" / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "b" / "report.svg"));
  EXPECT_NE(read_file(dir / "b" / "report.svg").find("<svg"), std::string::npos);
}

TEST(Cli, Compare) {
  TempDir dir;
  const auto a = write_video(dir, "a", 3, 6);
  const auto b = write_video(dir, "b", 3, 7);
  const auto r = run({"compare", "--video", a.string(), "--video", b.string(), "--out", (dir / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "o" / "report_a.json"));
  EXPECT_TRUE(fs::exists(dir / "o" / "report_b.json"));
  EXPECT_TRUE(fs::exists(dir / "o" / "compare.json"));
}

TEST(Cli, OptimizeDemo) {
  TempDir dir;
  const auto r = run({"optimize-demo", "--budget", "30", "--size", "8", "--out", (dir / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(read_file(dir / "o" / "trace.json"));
  EXPECT_EQ(j["budget"], 30);
  EXPECT_LE(j["objectives"].size(), 30u);
  EXPECT_LE(j["best"]["objective"].get<double>(), j["initial_objective"].get<double>());
}

TEST(Cli, InspectSpectrum) {
  TempDir dir;
  const auto frame = dir / "f.vcdf";
  vcd::save_vcdf(frame, vcd::make_textured_frame(8, 8, 3, 1));
  const auto r = run({"inspect-spectrum", "--frame", frame.string(), "--out", (dir / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "o" / "spectrum_input.json"));
  EXPECT_TRUE(fs::exists(dir / "o" / "spectrum_input.csv"));
}

TEST(Cli, ConfigFileWithFlagOverride) {
  TempDir dir;
  const auto video = write_video(dir, "v", 3, 8);
  vcd::testing::write_bytes(dir / "c.cfg", "# test\nalpha = 0\ntemporal_weight = false\n");
  ASSERT_EQ(run({"score", "--video", video.string(), "--config", (dir / "c.cfg").string(), "--out",
                 (dir / "a").string()})
                .code,
            0);
  auto j = nlohmann::json::parse(read_file(dir / "a" / "report.json"));
  EXPECT_EQ(j["frames"][0]["total"].get<double>(), j["frames"][0]["amp"].get<double>());
  ASSERT_EQ(run({"score", "--video", video.string(), "--config", (dir / "c.cfg").string(), "--alpha", "1",
                 "--out", (dir / "b").string()})
                .code,
            0);
  j = nlohmann::json::parse(read_file(dir / "b" / "report.json"));
  EXPECT_GT(j["frames"][0]["total"].get<double>(), j["frames"][0]["amp"].get<double>());

  vcd::testing::write_bytes(dir / "bad.cfg", "alpha = banana\n");
  const auto r = run({"score", "--video", video.string(), "--config", (dir / "bad.cfg").string(), "--out",
                      (dir / "c").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 1"), std::string::npos) << r.err;
}
