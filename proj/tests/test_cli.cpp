#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"

using nlohmann::json;

namespace {

std::string g_cli;

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  RunResult r;
  std::string cmd = g_cli + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  size_t nr;
  while ((nr = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, nr);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

bool starts_with(const std::string& s, const std::string& p) {
  return s.rfind(p, 0) == 0;
}

}  // namespace

TEST_CASE("omega emits a JSON run report") {
  RunResult r = run("omega --discriminant=-163 --digits=100 --json");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["command"] == "omega");
  CHECK(j["digits"] == 100);
  CHECK(j["status"] == "ok");
  CHECK(j.contains("elapsed_ms"));
  CHECK(j["params"]["D"] == "-163");
  std::string om = j["results"]["omega"];
  CHECK(starts_with(om, "4.9335689624395657717355655306"));
  CHECK(om.find("e-2") != std::string::npos);
  std::string err = j["results"]["err"];
  CHECK(err.find("e-1") != std::string::npos);  // ~1e-1xx
}

TEST_CASE("omega rejects a non-fundamental discriminant with exit 2") {
  RunResult r = run("omega --discriminant=-9");
  CHECK(r.code == 2);
  CHECK(r.out.find("not a valid discriminant") != std::string::npos);
}

TEST_CASE("verify single case produces three passing rows") {
  RunResult r = run("verify --case=-163 --digits=150 --json");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["command"] == "verify");
  CHECK(j["status"] == "ok");
  CHECK(j["results"]["all_pass"] == true);
  REQUIRE(j["results"]["rows"].size() == 3);
  for (const auto& row : j["results"]["rows"]) {
    CHECK(row["D"] == -163);
    CHECK(row["pass"] == true);
    CHECK(row["tolerance_exp10"] == -100);
  }
}

TEST_CASE("verify refuses digits below 100") {
  RunResult r = run("verify --case=all --digits=60");
  CHECK(r.code == 2);
  CHECK(r.out.find("digits >= 100 required") != std::string::npos);
}

TEST_CASE("verify rejects a malformed case selector") {
  RunResult r = run("verify --case=nonsense --digits=150");
  CHECK(r.code == 2);
}

TEST_CASE("find-relation rediscovers the simplest identity") {
  RunResult r = run("find-relation --case=-232 --which=0 --digits=150 --json");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["status"] == "ok");
  CHECK(j["results"]["matches_catalog"] == true);
  REQUIRE(j["results"]["m"].size() == 2);
  CHECK(j["results"]["m"][0] == "1");
  CHECK(j["results"]["m"][1] == "-99");
}

TEST_CASE("find-relation reports insufficient precision with exit 3") {
  RunResult r = run("find-relation --case=-163 --which=2 --digits=120");
  CHECK(r.code == 3);
  CHECK(r.out.find("184") != std::string::npos);
}

TEST_CASE("probe reports the frozen height-10 minimum") {
  RunResult r = run("probe --case=-163 --height=10 --eps=0.5 --digits=120 --json");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["status"] == "ok");
  CHECK(j["results"]["method"] == "exhaustive");
  const auto& full = j["results"]["full"];
  CHECK(full["argmin"] == json::array({4, 1, 10, -5}));
  CHECK(full["argmin_height"] == 10);
  CHECK(full["bound_satisfied"] == true);
  std::string mf = full["min_form"];
  CHECK(starts_with(mf, "5.38202714819016435"));
  const auto& slice = j["results"]["m1_zero"];
  CHECK(slice["argmin"] == json::array({0, 0, 1, 0}));
  CHECK(slice["bound_satisfied"] == false);  // height-1 argmin, bound 1
  std::string ms = slice["min_form"];
  CHECK(starts_with(ms, "1.5704037749140204"));
}

TEST_CASE("probe rejects a non-positive height") {
  RunResult r = run("probe --case=-163 --height=0 --digits=120");
  CHECK(r.code == 2);
}

TEST_CASE("j at the main CM point") {
  RunResult r = run("j --tau-D=-163 --digits=200 --json");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["status"] == "ok");
  std::string jv = j["results"]["j"];
  CHECK(starts_with(jv, "-2.62537412640768"));
  CHECK(jv.find("e17") != std::string::npos);
}

TEST_CASE("pade decay rows") {
  RunResult r =
      run("pade --s=1/6 --n=2 --Z=-151931373056000 --digits=150 --json");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["status"] == "ok");
  REQUIRE(j["results"]["rows"].size() == 2);
  CHECK(j["results"]["rows"][0]["order"] == 7);
  CHECK(j["results"]["rows"][1]["order"] == 11);
  CHECK(j["results"]["strictly_decreasing"] == true);
  CHECK(j["results"]["rows"][0]["resolved"] == true);
  CHECK(j["results"]["rows"][0]["consistent"] == true);
}

TEST_CASE("JSON output is deterministic apart from elapsed_ms") {
  const std::string cmd =
      "probe --case=-163 --height=10 --eps=0.5 --digits=120 --json";
  RunResult a = run(cmd);
  RunResult b = run(cmd);
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  json ja = json::parse(a.out);
  json jb = json::parse(b.out);
  ja.erase("elapsed_ms");
  jb.erase("elapsed_ms");
  CHECK(ja.dump() == jb.dump());
}

TEST_CASE("usage errors exit with code 2, help with 0") {
  CHECK(run("").code == 2);              // missing subcommand
  CHECK(run("omega").code == 2);         // missing required -D
  CHECK(run("frobnicate").code == 2);    // unknown subcommand
  CHECK(run("--help").code == 0);
  CHECK(run("omega --help").code == 0);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-cli> [doctest args]\n", argv[0]);
    return 64;
  }
  g_cli = argv[1];
  std::vector<char*> args;
  args.push_back(argv[0]);
  for (int i = 2; i < argc; ++i) args.push_back(argv[i]);
  doctest::Context ctx(static_cast<int>(args.size()), args.data());
  return ctx.run();
}
