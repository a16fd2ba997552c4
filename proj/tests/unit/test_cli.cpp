#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include "json.hpp"
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"

using nlohmann::json;

namespace {

const std::string kFixtures = UNCERT_FIXTURES_DIR;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  args.insert(args.begin(), "uncert");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = uncert::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"nonsense"}).code, 2);
  EXPECT_EQ(call({"verify", "--relation", "EQ99"}).code, 2);
  EXPECT_EQ(call({"bound", "--format", "csv"}).code, 2);
  EXPECT_EQ(call({"search", "--grid-step", "0.5"}).code, 2);
}

TEST(Cli, MalformedJsonIsUsageError) {
  const Outcome o = call({"verify", "--relation", "EQ23", "--state", fixture("malformed.json")});
  EXPECT_EQ(o.code, 2);
  EXPECT_FALSE(o.err.empty());
  EXPECT_EQ(call({"verify", "--relation", "EQ23", "--state", fixture("missing.json")}).code, 2);
}

TEST(Cli, VerifyRandomIsReproducible) {
  const std::vector<std::string> args = {"verify", "--relation", "EQ10", "--trials", "20", "--seed", "42"};
  const Outcome a = call(args), b = call(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const json doc = json::parse(a.out);
  EXPECT_EQ(doc.at("summary").at("violations").get<int>(), 0);
  EXPECT_GE(doc.at("summary").at("min_gap").get<double>(), -1e-9);
}

TEST(Cli, VerifyCsv) {
  const Outcome o = call({"verify", "--relation", "EQ23", "--trials", "3", "--seed", "1", "--format", "csv"});
  EXPECT_EQ(o.code, 0);
  std::istringstream in(o.out);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 4);
}

TEST(Cli, VerifyStateFile) {
  const Outcome o = call({"verify", "--relation", "EQ23", "--state", fixture("bell_ab.json")});
  EXPECT_EQ(o.code, 0);
  EXPECT_NEAR(json::parse(o.out).at("summary").at("min_gap").get<double>(), 0.0, 1e-10);
}

TEST(Cli, BoundQutritProjected) {
  const Outcome o = call({"bound", "--basis", fixture("qutrit_v.json"), "--basis", fixture("qutrit_w.json"),
                          "--projector", fixture("qutrit_projector.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  const json doc = json::parse(o.out);
  EXPECT_NEAR(doc.at("r").at("value").get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(doc.at("r_projected").at("value").get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(doc.at("r_projected").at("neg_log2").get<double>(), 1.0, 1e-12);
}

TEST(Cli, BoundFourierDefault) {
  const Outcome o = call({"bound", "--dims", "5"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NEAR(json::parse(o.out).at("r").at("value").get<double>(), 0.2, 1e-12);
}

TEST(Cli, MusConstructAndCheck) {
  const Outcome o = call({"mus", "construct", "--spec", fixture("omega_qubit.json")});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(call({"mus", "construct", "--family", "thm4iii", "--dims", "4", "--factor", "2", "--seed", "3"}).code, 0);
  EXPECT_EQ(call({"mus", "construct", "--family", "s33"}).code, 0);
  EXPECT_EQ(call({"mus", "check", "--state", fixture("bell_ab.json")}).code, 0);
  EXPECT_EQ(call({"mus", "bogus"}).code, 2);
}

TEST(Cli, MusClassify) {
  const Outcome o = call({"mus", "classify", "--state", fixture("bell_ab.json")});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("Upsilon"), std::string::npos);
}

TEST(Cli, SearchAndTrace) {
  const Outcome s = call({"search", "--relation", "EQ20", "--dims", "2", "--restarts", "2", "--seed", "9"});
  EXPECT_EQ(s.code, 0) << s.err;
  EXPECT_LE(json::parse(s.out).at("summary").at("min_gap").get<double>(), 1e-6);
  const Outcome g = call({"search", "--grid-step", "0.1", "--format", "csv"});
  EXPECT_EQ(g.code, 0);
  EXPECT_EQ(g.out.rfind("r_x,r_y,r_z,zeta", 0), 0u);
  EXPECT_EQ(call({"trace", "--trials", "5", "--seed", "2"}).code, 0);
}

TEST(Cli, OutFileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "uncert_cli_roundtrip.json";
  std::filesystem::remove(path);
  const Outcome o = call({"bound", "--dims", "3", "--out", path.string()});
  ASSERT_EQ(o.code, 0);
  EXPECT_TRUE(o.out.empty());
  std::ifstream in(path);
  const json doc = json::parse(in);
  EXPECT_NEAR(doc.at("r").at("value").get<double>(), 1.0 / 3.0, 1e-12);
  EXPECT_EQ(doc.at("tool"), "uncert");
  std::filesystem::remove(path);
}
