#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "report.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(ELASTICA_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("elastica_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Report, Fnv1aVectors) {
  EXPECT_EQ(elastica::cli::fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(elastica::cli::fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(elastica::cli::hex64(0xafULL), "00000000000000af");
  EXPECT_EQ(elastica::cli::format_double(0.1), "0.10000000000000001");
}

TEST(Report, CsvLayout) {
  elastica::cli::CsvTable t({"a", "b"});
  t.add({1.0, 0.5});
  EXPECT_EQ(t.render("abc"), "# manifest_hash=abc\na,b\n1,0.5\n");
}

TEST(Cli, PrintsM0) {
  const auto r = run("maps --m0");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0.826114765985\n");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("nosuch").code, 1);
  EXPECT_EQ(run("fbp --orient sideways").code, 1);
  EXPECT_EQ(run("fbp --mode fixed --ell 2 --L 1").code, 2);
  EXPECT_EQ(run("solve --ell 2,0 --L 1").code, 2);
  EXPECT_EQ(run("straighten --theta0 0 --theta1 1").code, 2);
  EXPECT_EQ(run("solve --ell 0.3,0 --L 1 --max-outer 1 --max-inner 5 --out csv").code, 3);
  EXPECT_EQ(run("verify --suite 1,6").code, 0);
}

TEST(Cli, NonConvergenceStillWritesOutput) {
  const auto r = run("solve --ell 0.3,0 --L 1 --max-outer 1 --max-inner 5 --out json");
  EXPECT_EQ(r.code, 3);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_FALSE(j["report"]["converged"].get<bool>());
}

TEST(Cli, FigureEightHalfSvg) {
  const auto r = run("fbp --mode fixed --ell 0 --L 1 --orient same --out svg");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("<polyline"), std::string::npos);
  std::size_t lines = 0;
  for (auto p = r.out.find("<line"); p != std::string::npos; p = r.out.find("<line", p + 1)) ++lines;
  EXPECT_EQ(lines, 2u);
}

TEST(Cli, FigureEightHalfJson) {
  const auto j = nlohmann::json::parse(run("fbp --mode fixed --ell 0 --L 1 --orient same").out);
  EXPECT_EQ(j["family"], "wavelike");
  EXPECT_NEAR(j["m"].get<double>(), 0.8261147659849704, 1e-12);
  EXPECT_NEAR(j["energies"]["bending_exact"].get<double>(), 28.1099024353303, 1e-9);
}

TEST(Cli, PenalisedZeroEllReportsBothBranches) {
  const auto j = nlohmann::json::parse(run("fbp --mode penalised --ell 0 --lambda 2").out);
  ASSERT_TRUE(j.contains("zero_ell_candidates"));
  EXPECT_GT(j["zero_ell_candidates"]["figure_eight"].get<double>(), 0.0);
  EXPECT_EQ(j["zero_ell_candidates"]["segment_limit"].get<double>(), 0.0);
}

TEST(Cli, DeterministicFilesWithEmbeddedHash) {
  const std::string args = "solve --ell 0.5,0.1 --theta0 0.3 --theta1 -0.2 --L 1 --n 200 --restarts 3 --seed 11 "
                           "--out json,csv,svg --output-dir ";
  const auto a = scratch("a"), b = scratch("b");
  ASSERT_EQ(run(args + a.string()).code, 0);
  ASSERT_EQ(run(args + b.string()).code, 0);
  for (const char* f : {"solve.json", "solve.csv", "solve.svg"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  const auto manifest = nlohmann::json::parse(slurp(a / "solve.manifest.json"));
  const std::string hash = manifest["manifest_hash"];
  EXPECT_EQ(hash.size(), 16u);
  EXPECT_EQ(manifest["seed"], 11);
  EXPECT_TRUE(manifest.contains("wall_seconds"));
  EXPECT_EQ(slurp(a / "solve.csv").rfind("# manifest_hash=" + hash + "\n", 0), 0u);
  EXPECT_NE(slurp(a / "solve.svg").find("<!-- manifest_hash: " + hash + " -->"), std::string::npos);
  EXPECT_EQ(nlohmann::json::parse(slurp(a / "solve.json"))["manifest"]["manifest_hash"], hash);

  // A different seed changes the hash.
  const auto c = scratch("c");
  std::string other = args + c.string();
  other.replace(other.find("--seed 11"), 9, "--seed 12");
  ASSERT_EQ(run(other).code, 0);
  EXPECT_NE(nlohmann::json::parse(slurp(c / "solve.manifest.json"))["manifest_hash"], hash);
  fs::remove_all(a);
  fs::remove_all(b);
  fs::remove_all(c);
}

TEST(Cli, FamilyCsvColumns) {
  const auto r = run("family --kind wavelike --m 0.7 --from 0 --to auto-half-period --h 1e-3 --out csv");
  EXPECT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string first, header;
  std::getline(in, first);
  std::getline(in, header);
  EXPECT_EQ(first.rfind("# manifest_hash=", 0), 0u);
  EXPECT_EQ(header, "s,x,y,theta,k");
}

TEST(Cli, StraightenScanIncreasing) {
  const auto j = nlohmann::json::parse(
      run("straighten-scan --theta0 1.5707963267948966 --theta1 1.5707963267948966 --eps 0.05,0.02,0.01").out);
  EXPECT_TRUE(j["strictly_increasing"].get<bool>());
  EXPECT_EQ(j["rows"].size(), 3u);
}
