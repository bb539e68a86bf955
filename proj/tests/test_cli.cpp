#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qlab/cli.hpp"

using namespace qlab;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json strip_time(json j) {
  j.erase("generated_at");
  return j;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("verify over the whole catalog on a homogeneous pair") {
  auto r = run({"verify", "--all", "--n", "2", "--homog", "--spin", "1/2", "--degree", "3", "--trials", "20", "--seed",
                "1"});
  CHECK(r.code == cli::kExitPass);
  auto j = json::parse(r.out);
  CHECK(j["summary"]["failed"] == 0);
  CHECK(j["summary"]["passed"].get<int>() > 0);
  CHECK(j["summary"]["total"] == 34 * 20);
}

TEST_CASE("verify a single identity") {
  auto r = run({"verify", "--identity", "YBE", "--degree", "4", "--seed", "7"});
  CHECK(r.code == cli::kExitPass);
  auto j = json::parse(r.out);
  for (const char* key : {"schema_version", "run_config", "results", "summary", "generated_at"}) CHECK(j.contains(key));
  CHECK(j["schema_version"] == cli::kSchemaVersion);
  REQUIRE(j["results"].size() == 1);
  CHECK(j["results"][0]["identity"] == "YBE");
  CHECK(j["results"][0]["verdict"] == "exact-pass");
  CHECK(j["results"][0]["degree"] == 4);
  for (const auto& [name, v] : j["results"][0]["params"]["values"].items()) CHECK(v.is_string());
}

TEST_CASE("mutation hook makes verify fail with a witness") {
  auto r = run({"verify", "--identity", "DEGEN_RMINUS", "--mutate-pochhammer"});
  CHECK(r.code == cli::kExitFail);
  auto j = json::parse(r.out);
  CHECK(j["results"][0]["verdict"] == "fail");
  CHECK(j["results"][0].contains("witness"));
  CHECK(r.err.find("DEGEN_RMINUS") != std::string::npos);
}

TEST_CASE("spectrum of the spin-1/2 pair") {
  auto r = run({"spectrum", "--n", "2", "--homog", "--spin", "1/2", "--dmax", "1"});
  CHECK(r.code == cli::kExitPass);
  auto j = json::parse(r.out);
  std::set<std::string> qs;
  for (const auto& sector : j["results"])
    for (const auto& p : sector["eigenpairs"]) {
      qs.insert(p["q_text"].get<std::string>());
      CHECK(p["tq"] == "exact-zero");
    }
  CHECK(qs == std::set<std::string>{"1", "u"});
}

TEST_CASE("spectrum of a single site") {
  auto r = run({"spectrum", "--n", "1", "--spin", "1", "--dmax", "3"});
  CHECK(r.code == cli::kExitPass);
  auto j = json::parse(r.out);
  REQUIRE(j["results"].size() == 4);
  for (const auto& sector : j["results"]) {
    REQUIRE(sector["eigenpairs"].size() == 1);
    CHECK(sector["eigenpairs"][0]["lambda_text"] == "2*u");
    CHECK(sector["eigenpairs"][0]["q_text"] == "1");
  }
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"spectrum", "--n", "2", "--spin", "1/0", "--dmax", "1"}).code == cli::kExitUsage);
  CHECK(run({"verify", "--identity", "NOPE"}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"spectrum", "--n", "3", "--homog", "--spin", "1/2", "--dmax", "4"}).code == cli::kExitUsage);
  CHECK(run({"spectrum", "--n", "3", "--homog", "--spin", "1/2", "--dmax", "4", "--float"}).code == cli::kExitPass);
  CHECK(run({"--help"}).code == cli::kExitPass);
}

TEST_CASE("bethe tables") {
  auto r = run({"bethe", "--n", "2", "--spin", "1/2", "--dmax", "1"});
  CHECK(r.code == cli::kExitPass);
  auto rows = lines(r.out);
  REQUIRE(rows.size() >= 2);
  CHECK(rows[0] == "d,eigen-index,root-re,root-im,bethe-residual,tq-exact");
  bool found = false;
  for (const auto& row : rows)
    if (row.rfind("1,", 0) == 0 && row.find(",0,0,0,yes") != std::string::npos) found = true;
  CHECK(found);

  auto three = run({"bethe", "--n", "3", "--spin", "1/2", "--dmax", "1"});
  CHECK(three.code == cli::kExitPass);
  for (const auto& row : lines(three.out)) {
    if (row.rfind("1,", 0) != 0) continue;
    std::vector<std::string> f;
    std::stringstream ss(row);
    for (std::string c; std::getline(ss, c, ',');) f.push_back(c);
    REQUIRE(f.size() >= 5);
    if (!f[4].empty()) CHECK(std::stod(f[4]) < 1e-10);
  }

  auto vac = run({"bethe", "--n", "2", "--spin", "1/2", "--dmax", "0"});
  auto vrows = lines(vac.out);
  REQUIRE(vrows.size() == 2);
  CHECK(vrows[1].rfind("0,0,,,", 0) == 0);
}

TEST_CASE("determinism: identical runs differ only in the timestamp") {
  std::vector<std::string> args{"verify", "--all", "--n", "3", "--spins", "1/2,3/2,5/2", "--deltas", "0,1/3,-2/3",
                                "--degree", "2", "--trials", "3", "--seed", "11"};
  auto a = run(args), b = run(args);
  CHECK(a.code == b.code);
  CHECK(strip_time(json::parse(a.out)) == strip_time(json::parse(b.out)));
  auto s1 = run({"spectrum", "--n", "3", "--homog", "--spin", "1/2", "--dmax", "2"});
  auto s2 = run({"spectrum", "--n", "3", "--homog", "--spin", "1/2", "--dmax", "2"});
  CHECK(strip_time(json::parse(s1.out)).dump() == strip_time(json::parse(s2.out)).dump());
}

TEST_CASE("run_config round-trips the flags") {
  auto r = run({"verify", "--identity", "F1", "--identity", "F2", "--degree", "2", "--seed", "5", "--trials", "2"});
  auto cfg = json::parse(r.out)["run_config"];
  CHECK(cfg["command"] == "verify");
  CHECK(cfg["identities"] == json::array({"F1", "F2"}));
  CHECK(cfg["degree"] == 2);
  CHECK(cfg["seed"] == 5);
  CHECK(cfg["trials"] == 2);
}

TEST_CASE("output file") {
  std::string path = "test_cli_out.json";
  auto r = run({"verify", "--identity", "SL2_R", "--out", path});
  CHECK(r.code == cli::kExitPass);
  CHECK(r.out.empty());
  std::ifstream in(path);
  auto j = json::parse(in);
  CHECK(j["results"][0]["identity"] == "SL2_R");
  std::remove(path.c_str());
}
