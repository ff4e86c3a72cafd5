#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include "oriented/cli.hpp"

using namespace oriented;

namespace {

struct Outcome {
  int exit;
  std::string out;
  std::string err;
};

Outcome run_in_process(std::vector<std::string> args) {
  args.insert(args.begin(), "oriented");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// Runs the installed binary; stderr is discarded.
Outcome run_binary(const std::vector<std::string>& args, const std::string& env = "") {
  std::string cmd = env.empty() ? "" : env + " ";
  cmd += quote(ORIENTED_CLI_PATH);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, "", "popen failed"};
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, ""};
}

std::string sample(const std::string& name) { return std::string(ORIENTED_SAMPLES_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, GrassmannianRanksAsCsv) {
  Outcome o = run_binary({"cohomology", "--space", R"({"Grassmannian":{"m":2,"n":4}})", "--theory", "additive",
                          "--truncation", "8", "--format", "csv"});
  EXPECT_EQ(o.exit, 0);
  EXPECT_EQ(o.out, "weight,rank,torsion\n0,1,\n1,1,\n2,2,\n3,1,\n4,1,\n");
}

TEST(Cli, MultiplicativeSampleChecks) {
  Outcome o = run_binary({"fgl-check", "--input", sample("multiplicative.json")});
  EXPECT_EQ(o.exit, 0);
  Outcome j = run_in_process({"fgl-check", "--input", sample("multiplicative.json"), "--format", "json"});
  ASSERT_EQ(j.exit, 0);
  Json doc = parse_json(j.out, "output");
  EXPECT_TRUE(doc["pass"].get<bool>());
  EXPECT_TRUE(doc["axioms"]["allPass"].get<bool>());
  // the law is echoed in canonical form, which is the sample file itself
  EXPECT_EQ(canonical_text(doc["law"]), slurp(sample("multiplicative.json")));
  // over Z the logarithm of x + y - beta*x*y needs division by 2
  EXPECT_FALSE(doc["logarithm"]["available"].get<bool>());
  EXPECT_EQ(doc["logarithm"]["weight"], 2);
}

TEST(Cli, ConnerFloydProjectivePlane) {
  Outcome o = run_binary({"conner-floyd", "--space", R"({"Pn":2})", "--truncation", "6", "--format", "json"});
  EXPECT_EQ(o.exit, 0);
  Json doc = parse_json(o.out, "output");
  EXPECT_EQ(doc["verdict"], "isomorphism");
  EXPECT_EQ(doc["schemaVersion"], 1);
}

TEST(Cli, ExitCodes) {
  Outcome unknown = run_in_process({"frobnicate"});
  EXPECT_EQ(unknown.exit, 2);
  EXPECT_NE(unknown.err.find("usage: oriented"), std::string::npos);

  Outcome none = run_in_process({});
  EXPECT_EQ(none.exit, 2);
  EXPECT_NE(none.err.find("usage: oriented"), std::string::npos);

  Outcome malformed = run_in_process({"cohomology", "--space", R"({"Pn":)"});
  EXPECT_EQ(malformed.exit, 2);
  EXPECT_NE(malformed.err.find("at byte 7"), std::string::npos) << malformed.err;

  EXPECT_EQ(run_in_process({"cohomology", "--space", R"({"Pn":2})", "--format", "xml"}).exit, 2);
  EXPECT_EQ(run_in_process({"cohomology", "--space", R"({"Sphere":2})"}).exit, 2);
  EXPECT_EQ(run_in_process({"cohomology", "--space", R"({"Pn":2})", "--theory", "elliptic"}).exit, 2);
  EXPECT_EQ(run_in_process({"tower"}).exit, 2);
  EXPECT_EQ(run_in_process({"tower", "--input", sample("missing.json")}).exit, 2);
  EXPECT_EQ(run_in_process({"conner-floyd", "--space", R"({"BGL":2})"}).exit, 2);
  EXPECT_EQ(run_in_process({"cohomology", "--space", R"({"Pn":2})", "--element", "nu^2"}).exit, 2);

  Outcome help = run_in_process({"--help"});
  EXPECT_EQ(help.exit, 0);
  EXPECT_NE(help.out.find("conner-floyd"), std::string::npos);
}

TEST(Cli, VerificationFailuresExitOne) {
  // x + y + x^2 y^2 is unital and commutative but not associative
  Json law = fgl_to_json(make_additive(BaseRing::integers(), 6));
  law["series"].push_back(Json::array({Json::array({2, 2}), "1"}));
  const std::string path = ::testing::TempDir() + "oriented_bad_law.json";
  std::ofstream(path) << canonical_text(law);
  Outcome o = run_in_process({"fgl-check", "--input", path, "--format", "json"});
  EXPECT_EQ(o.exit, 1);
  Json doc = parse_json(o.out, "output");
  EXPECT_FALSE(doc["axioms"]["associativity"]["pass"].get<bool>());
  EXPECT_TRUE(doc["axioms"]["commutativity"]["pass"].get<bool>());

  // its classifying map to the Lazard ring does not exist
  Outcome c = run_in_process({"fgl-lazard", "--input", path, "--truncation", "5", "--format", "json"});
  EXPECT_EQ(c.exit, 1);
  EXPECT_FALSE(parse_json(c.out, "output")["classifying"]["wellDefined"].get<bool>());

  // P^2 is not a subspace of P^1: bad input, not a failed check
  EXPECT_EQ(run_in_process({"restriction", "--space", R"({"Pn":1})", "--target", R"({"Pn":2})"}).exit, 2);
}

TEST(Cli, TowerSamples) {
  Outcome t = run_in_process({"tower", "--input", sample("tower.json"), "--format", "json"});
  ASSERT_EQ(t.exit, 0) << t.err;
  Json doc = parse_json(t.out, "output");
  EXPECT_EQ(doc["kind"], "tower");
  ASSERT_EQ(doc["weights"].size(), 2u);
  EXPECT_FALSE(doc["weights"][0]["lim1Zero"].get<bool>());
  EXPECT_TRUE(doc["weights"][1]["lim1Zero"].get<bool>());

  Outcome s = run_in_process({"tower", "--input", sample("split.json"), "--format", "json"});
  ASSERT_EQ(s.exit, 0) << s.err;
  EXPECT_EQ(parse_json(s.out, "output")["kind"], "split");

  Outcome c = run_in_process({"telescope", "--input", sample("telescope.json"), "--format", "csv"});
  ASSERT_EQ(c.exit, 0) << c.err;
  EXPECT_NE(c.out.find("0,1,,2,"), std::string::npos) << c.out;
  EXPECT_NE(c.out.find("1,0,,,"), std::string::npos) << c.out;
}

TEST(Cli, SchemaIsVersioned) {
  Outcome o = run_in_process({"schema"});
  ASSERT_EQ(o.exit, 0);
  EXPECT_EQ(o.out, canonical_text(all_schemas()));
  EXPECT_EQ(parse_json(o.out, "schema")["schemaVersion"], 1);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const std::vector<std::vector<std::string>> commands = {
      {"thom-decompose", "--truncation", "6", "--format", "json"},
      {"hopf-primitives", "--truncation", "6", "--format", "json"},
      {"telescope", "--truncation", "5", "--format", "json"},
      {"tower", "--input", sample("tower.json"), "--format", "json"},
      {"fgl-check", "--theory", "multiplicative", "--seed", "7", "--format", "json"},
      {"cohomology", "--space", R"({"Flag":3})", "--format", "pretty"},
  };
  for (const auto& cmd : commands) {
    Outcome a = run_binary(cmd, "ORIENTED_WORKERS=1");
    Outcome b = run_binary(cmd, "ORIENTED_WORKERS=4");
    Outcome c = run_binary(cmd);
    EXPECT_EQ(a.exit, 0) << cmd[0];
    EXPECT_FALSE(a.out.empty()) << cmd[0];
    EXPECT_EQ(a.out, b.out) << cmd[0];
    EXPECT_EQ(a.out, c.out) << cmd[0];
  }
  EXPECT_EQ(run_binary({"schema"}, "ORIENTED_WORKERS=zero").exit, 2);
}

TEST(Cli, SeedSelectsTheSampledChecks) {
  auto samples = [](const char* seed) {
    Outcome o = run_in_process({"fgl-check", "--theory", "multiplicative", "--seed", seed, "--format", "json"});
    return parse_json(o.out, "output")["nSeries"]["samples"].dump();
  };
  EXPECT_EQ(samples("3"), samples("3"));
  EXPECT_NE(samples("3"), samples("4"));
}

// Arguments that exercise each coverage row's report key.
std::vector<std::string> coverage_args(const cli::Coverage& c) {
  const std::string sub = c.subcommand, key = c.key;
  std::vector<std::string> args{sub, "--format", "json"};
  auto add = [&](std::initializer_list<std::string> more) { args.insert(args.end(), more); };
  if (sub == "cohomology") add({"--space", R"({"BGL":2})", "--truncation", "4", "--element", "sigma1^3"});
  if (sub == "restriction") add({"--space", R"({"Pn":3})", "--target", R"({"Pn":1})", "--element", "lambda^2"});
  if (sub == "conner-floyd") add({"--space", R"({"Pn":1})", "--truncation", "4"});
  if (sub == "fgl-lazard") add({"--truncation", "5"});
  if (sub == "fgl-check") add({"--theory", c.operation == std::string("make_additive") ? "additive" : "multiplicative"});
  if (sub == "hopf-primitives" || sub == "thom-decompose") add({"--truncation", "4"});
  if (sub == "telescope") add({"--truncation", "3"});
  if (sub == "tower") add({"--input", sample(key == "split" ? "split.json" : "tower.json")});
  return args;
}

TEST(Cli, EveryOperationHasExactlyOneSubcommand) {
  std::set<std::string> ops, subs;
  for (const auto& c : cli::coverage_table()) {
    EXPECT_TRUE(ops.insert(c.operation).second) << c.operation << " listed twice";
    subs.insert(c.subcommand);
    const auto& known = cli::subcommands();
    EXPECT_NE(std::find(known.begin(), known.end(), c.subcommand), known.end()) << c.subcommand;

    Outcome o = run_in_process(coverage_args(c));
    ASSERT_EQ(o.exit, 0) << c.operation << ": " << o.err;
    Json doc = parse_json(o.out, "output");
    EXPECT_TRUE(doc.contains(c.key)) << c.operation << " missing key " << c.key;
  }
  // every subcommand but schema reaches at least one operation
  EXPECT_EQ(subs.size() + 1, cli::subcommands().size());
  EXPECT_EQ(ops.size(), 33u);
}

TEST(Cli, OperationOutputsCarryContent) {
  // BGL_2 is free on sigma1, sigma2: ranks count partitions with parts <= 2
  Json coh = parse_json(run_in_process(coverage_args({"", "", "cohomology", ""})).out, "output");
  Json expected = Json::array();
  for (int w = 0; w <= 4; ++w) expected.push_back(w / 2 + 1);
  EXPECT_EQ(coh["ranks"], expected);
  EXPECT_TRUE(coh["invariance"]["pass"].get<bool>());
  EXPECT_EQ(coh["symmetricDecomposition"]["output"], "e1^2 - 2*e2");
  EXPECT_EQ(coh["normalForm"]["result"], "sigma1^3");

  Json res = parse_json(run_in_process(coverage_args({"", "", "restriction", ""})).out, "output");
  EXPECT_EQ(res["image"]["result"], "0");  // lambda^2 vanishes on P^1
  EXPECT_TRUE(res["surjectiveEverywhere"].get<bool>());
}
