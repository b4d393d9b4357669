#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "holodyn/io.hpp"

using namespace holodyn;
using io::json;

namespace {

struct Result {
  int code;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Result run(const std::vector<std::string>& args) {
  std::string cmd = quote(HOLODYN_CLI_PATH);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

cplx as_complex(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

std::map<std::string, std::string> csv_rows(const std::string& text) {
  std::map<std::string, std::string> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    auto comma = line.find(',');
    rows[line.substr(0, comma)] = line.substr(comma + 1);
  }
  return rows;
}

const std::string kMobius = R"j({"type":"mobius","coeffs":[2,1,1,2]})j";

}  // namespace

TEST(Cli, ClassifyMobius) {
  Result r = run({"classify", "--map", kMobius});
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["kind"], "hyperbolic");
  EXPECT_NEAR(std::abs(as_complex(j["dw"]) - 1.0), 0.0, 1e-8);
  EXPECT_NEAR(as_complex(j["multiplier"]).real(), 1.0 / 3.0, 1e-6);
  ASSERT_EQ(j["boundary_fixed_points"].size(), 2u);
  EXPECT_NEAR(j["boundary_fixed_points"][1]["angular_derivative"].get<double>(), 3.0, 1e-6);
}

TEST(Cli, FlowKoebe) {
  Result r = run({"flow", "--semigroup", "koebe-zero-step", "--t", "2", "--z", "0"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(std::abs(as_complex(json::parse(r.out)["value"]) - 0.5), 0.0, 1e-12);
}

TEST(Cli, BackwardFlowUndefined) {
  Result r = run({"flow", "--semigroup", "koebe-zero-step", "--t", "0.5", "--z", "0", "--backward"});
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_FALSE(j["defined"].get<bool>());
  EXPECT_TRUE(j["value"].is_null());
}

TEST(Cli, DemoComb) {
  Result r = run({"demo", "comb"});
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(as_complex(j["witness"]), cplx(-1.0, 0.5));
}

TEST(Cli, CatalogList) {
  Result r = run({"catalog", "list"});
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  ASSERT_TRUE(j["entries"].is_array());
  EXPECT_EQ(j["entries"].size(), catalog::names().size());
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"classify"}).code, 1);
  EXPECT_EQ(run({"--format", "xml", "catalog", "list"}).code, 1);
  EXPECT_EQ(run({"cascade", "--semigroup", "koebe-zero-step"}).code, 1);
  EXPECT_EQ(run({"classify", "--map", "{not json"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, PreconditionErrors) {
  Result r = run({"koenigs", "--map", R"j({"type":"catalog","name":"koebe-zero-step"})j"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(json::parse(r.out)["error"], "WrongClass");
  EXPECT_EQ(run({"flow", "--semigroup", "no-such-entry", "--t", "1", "--z", "0"}).code, 3);
  EXPECT_EQ(run({"commute", "--phi", "z/(2-z", "--psi", "z"}).code, 3);
}

TEST(Cli, NumericalFailureKeepsPartialReport) {
  Result r = run({"koenigs", "--map", R"j({"type":"catalog","name":"phs-halfplane"})j", "--depth", "16"});
  EXPECT_EQ(r.code, 2);
  json j = json::parse(r.out);
  EXPECT_FALSE(j["converged"].get<bool>());
  EXPECT_EQ(j["n_used"], 16);
}

TEST(Cli, SameSeedSameBytes) {
  std::vector<std::string> args = {"--seed", "17", "commute", "--phi", kMobius, "--psi", "z/(2-z)"};
  Result a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  args[1] = "18";
  EXPECT_NE(run(args).out, a.out);
}

TEST(Cli, CsvMatchesJson) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"classify", "--map", kMobius},
           {"flow", "--semigroup", "strip-minus-slits", "--t", "1.3", "--z", "[0.2,0.1]"},
           {"criteria", "--phi", R"j({"type":"semigroup_element","semigroup":"koebe-zero-step","t":1.3})j",
            "--semigroup", "koebe-zero-step"}}) {
    Result j = run(args);
    std::vector<std::string> csv_args = {"--format", "csv"};
    csv_args.insert(csv_args.end(), args.begin(), args.end());
    Result c = run(csv_args);
    ASSERT_EQ(j.code, 0);
    ASSERT_EQ(c.code, 0);
    std::vector<std::pair<std::string, std::string>> flat;
    io::flatten(json::parse(j.out), "", flat);
    auto rows = csv_rows(c.out);
    ASSERT_EQ(rows.size(), flat.size());
    for (const auto& [k, v] : flat) EXPECT_EQ(rows[k], v) << k;
  }
}

TEST(Cli, OutFile) {
  auto path = std::filesystem::temp_directory_path() / "holodyn_cli_out.json";
  std::filesystem::remove(path);
  Result r = run({"--out", path.string(), "flow", "--semigroup", "koebe-zero-step", "--t", "2", "--z", "0"});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, run({"flow", "--semigroup", "koebe-zero-step", "--t", "2", "--z", "0"}).out);
  std::filesystem::remove(path);
}

TEST(MapSpec, CanonicalRoundTrip) {
  const std::vector<std::string> specs = {
      R"j({"coeffs":[2.0,1.0,1.0,2.0],"domain":"disc","type":"mobius"})j",
      R"j({"coeffs":[[0.0,1.0],0.0,0.0,1.0],"domain":"disc","type":"mobius"})j",
      R"j({"domain":"right-half-plane","expr":"z+i+1/(z+1)","type":"formula"})j",
      R"j({"domain":"disc","inner":{"domain":"upper-half-plane","expr":"z+1","type":"formula"},"outer":[[0.0,1.0],[0.0,1.0],-1.0,1.0],"type":"conjugate"})j",
      R"j({"maps":[{"domain":"disc","expr":"z^2","type":"formula"},{"coeffs":[2.0,1.0,1.0,2.0],"domain":"disc","type":"mobius"}],"type":"compose"})j",
      R"j({"map":{"domain":"disc","expr":"z/(2-z)","type":"formula"},"n":3,"type":"iterate"})j",
      R"j({"semigroup":"strip-minus-slits","t":0.5,"type":"semigroup_element"})j",
      R"j({"semigroup":{"generator":"(1-z)^3/(1+z)"},"t":1.25,"type":"semigroup_element"})j",
      R"j({"type":"identity"})j"};
  for (const auto& s : specs) {
    std::string once = io::map_json(io::parse_map(json::parse(s))).dump();
    EXPECT_EQ(once, s);
    EXPECT_EQ(io::map_json(io::parse_map(json::parse(once))).dump(), once);
  }
}

TEST(MapSpec, NonCanonicalInputNormalizes) {
  json j = json::parse(R"j({"type":"catalog","name":"koebe-zero-step"})j");
  std::string once = io::map_json(io::parse_map(j)).dump();
  EXPECT_EQ(once, R"j({"semigroup":"koebe-zero-step","t":1.0,"type":"semigroup_element"})j");
  MapDescriptor m = io::parse_map(json("z/(2-z)"));
  EXPECT_NEAR(std::abs(m(0.5) - 1.0 / 3.0), 0.0, 1e-15);
}
