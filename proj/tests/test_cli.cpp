#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run lab(const std::string& args) {
  const std::string cmd = std::string(DILATATION_LAB_EXE) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string config(const std::string& name) { return std::string(DILATATION_CONFIG_DIR) + "/" + name; }

class Scratch {
 public:
  Scratch() : dir_(fs::temp_directory_path() / ("dilatation_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  std::string write(const std::string& name, const nlohmann::json& j) const {
    const auto p = dir_ / name;
    std::ofstream(p) << j.dump();
    return p.string();
  }
  fs::path path(const std::string& name) const { return dir_ / name; }

 private:
  fs::path dir_;
};

std::string meta(const std::string& csv, const std::string& key) {
  std::smatch m;
  const std::regex re("# " + key + "=([^\n]*)");
  return std::regex_search(csv, m, re) ? m[1].str() : "";
}

}  // namespace

TEST(Cli, ShippedConfigsPass) {
  for (const auto& entry : fs::directory_iterator(DILATATION_CONFIG_DIR)) {
    const auto r = lab("run --quiet " + entry.path().string());
    EXPECT_EQ(r.code, 0) << entry.path();
    EXPECT_EQ(meta(r.out, "verdict"), "pass") << entry.path();
    EXPECT_EQ(meta(r.out, "tool_version"), "0.1.0");
    EXPECT_TRUE(std::regex_match(meta(r.out, "config_hash"), std::regex("[0-9a-f]{16}")));
  }
}

TEST(Cli, OutputIsDeterministic) {
  const auto a = lab("run " + config("heisenberg_axioms.json"));
  const auto b = lab("run " + config("heisenberg_axioms.json"));
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(a.out.empty());
}

TEST(Cli, SeedOverride) {
  const auto a = lab("run " + config("euclidean_barycentric.json"));
  const auto b = lab("run --seed 99 " + config("euclidean_barycentric.json"));
  EXPECT_EQ(meta(b.out, "seed"), "99");
  EXPECT_NE(a.out, b.out);
  EXPECT_NE(meta(a.out, "config_hash"), meta(b.out, "config_hash"));
}

TEST(Cli, MenelaosRow) {
  const auto r = lab("run " + config("heisenberg_menelaos.json"));
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "w,iterations,residual,rate,probe_defect,banach_gap");
  std::smatch m;
  ASSERT_TRUE(std::regex_search(row, m, std::regex(R"(^\(([^;]+);([^;]+);([^)]+)\),(\d+),)")));
  EXPECT_NEAR(std::stod(m[1]), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(std::stod(m[2]), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(std::stod(m[3]), 1.0 / 15.0, 1e-12);
}

TEST(Cli, OutputPaths) {
  Scratch s;
  const auto out = s.path("a.csv");
  const auto r = lab("run --out " + out.string() + " " + config("heisenberg_ratio.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(text.str(), lab("run " + config("heisenberg_ratio.json")).out);

  auto cfg = nlohmann::json::parse(std::ifstream(config("heisenberg_ratio.json")));
  cfg["output"] = s.path("b.csv").string();
  EXPECT_EQ(lab("run " + s.write("b.json", cfg)).code, 0);
  EXPECT_TRUE(fs::exists(s.path("b.csv")));
}

TEST(Cli, ConfigErrorsExitWithOne) {
  Scratch s;
  auto cfg = nlohmann::json::parse(std::ifstream(config("heisenberg_menelaos.json")));
  cfg["colour"] = "blue";
  EXPECT_EQ(lab("run " + s.write("unknown.json", cfg)).code, 1);

  auto noseed = nlohmann::json::parse(std::ifstream(config("heisenberg_axioms.json")));
  noseed.erase("seed");
  EXPECT_EQ(lab("run " + s.write("noseed.json", noseed)).code, 1);

  auto badmodel = cfg;
  badmodel.erase("colour");
  badmodel["model"] = {{"model", "octonion"}};
  EXPECT_EQ(lab("run " + s.write("badmodel.json", badmodel)).code, 1);

  std::ofstream(s.path("broken.json")) << "{\"model\": ";
  EXPECT_EQ(lab("run " + s.path("broken.json").string()).code, 1);
  EXPECT_EQ(lab("run " + s.path("missing.json").string()).code, 1);
  EXPECT_EQ(lab("frobnicate").code, 1);
}

TEST(Cli, FailingVerdictExitsWithTwo) {
  Scratch s;
  auto cfg = nlohmann::json::parse(std::ifstream(config("counterexample.json")));
  cfg["mu"] = 2;
  const auto r = lab("run " + s.write("translation.json", cfg));
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(meta(r.out, "verdict"), "fail");
}

TEST(Cli, ComputationErrorsBecomeARow) {
  Scratch s;
  const nlohmann::json cfg = {{"model", {{"model", "pullback"}, {"base", {{"model", "euclidean"}, {"n", 2}}}, {"chart", "cubic"}}},
                              {"command", "menelaos"},
                              {"x", {0, 0}},
                              {"y", {10, 0}},
                              {"eps", 0.5},
                              {"mu", 0.5}};
  const auto r = lab("run " + s.write("far.json", cfg));
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.out.rfind("error,message\nDomainViolation,", 0), 0u) << r.out;
}
