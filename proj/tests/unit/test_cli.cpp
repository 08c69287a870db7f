#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

using json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(STABLEKIT_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> strings(const json& arr) {
  std::vector<std::string> out;
  for (const auto& x : arr) out.push_back(x.is_string() ? x.get<std::string>() : x.dump());
  return out;
}

}  // namespace

TEST_CASE("full pipeline on the simplest denominator") {
  Run r = run("full --den \"2 - z1 - z2\" --domain disk");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["version"] == "0.1.0");
  CHECK(strings(j["integrability"]["indices"]) == std::vector<std::string>{"3/2", "3", "inf"});
  CHECK(r.out.find("\"K\": 2") != std::string::npos);
}

TEST_CASE("puiseux from a file") {
  auto path = std::filesystem::temp_directory_path() / "stablekit_cli_sextic.txt";
  std::ofstream(path) << "4 - 5z1 - 2z2 + 2z1z2 + 3z1^2 - z1^2z2 - z1^3z2\n";
  Run r = run("puiseux --den " + path.string() + " --domain disk --center 1,1 --order 8");
  std::filesystem::remove(path);
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  const auto& branches = j["puiseux"]["branches"];
  REQUIRE(branches.size() == 1);
  CHECK(branches[0]["cutoff"] == 6);
  CHECK(branches[0]["segment_poly"] == "24*z1^5 + 4*z1^3 + z1");
}

TEST_CASE("homog report keys") {
  Run r = run("homog --fixture twin_tangent");
  REQUIRE(r.code == 0);
  json h = json::parse(r.out)["homog"];
  for (const char* key : {"M", "mu", "A_M", "B_next", "slopes_A", "slopes_B", "interlaced"})
    CHECK(h.contains(key));
  CHECK(h["M"] == 2);
  CHECK(h["interlaced"] == true);
}

TEST_CASE("errors and exit codes") {
  Run zero = run("homog --den 0");
  CHECK(zero.code == 1);
  CHECK(zero.out.find("zero polynomial") != std::string::npos);

  CHECK(run("frobnicate").code == 64);
  CHECK(run("homog --den \"z1 +\"").code == 1);
  CHECK(run("stability --den \"z1 z2 - 1/4\" --domain disk").code == 0);
}

TEST_CASE("trace csv") {
  Run r = run("trace --fixture uhp_simple --t -1,0,1 --window 0.1,1");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("t,x1,branch_index,x2\n", 0) == 0);
}

TEST_CASE("realize from json") {
  auto path = std::filesystem::temp_directory_path() / "stablekit_cli_pip.json";
  std::ofstream(path) << R"({"n": 1, "c": {"re": 0, "im": 1}, "alpha": [{"re": 1, "im": 0}],
    "beta": [{"re": 1, "im": 0}], "S": [[{"re": 0, "im": 1}]], "P": [[{"re": 1, "im": 0}]]})";
  Run r = run("realize --file " + path.string() + " --check --split");
  std::filesystem::remove(path);
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["validation"]["valid"] == true);
}

TEST_CASE("identical invocations give identical bytes") {
  Run a = run("full --fixture twin_tangent --threads 1");
  Run b = run("full --fixture twin_tangent --threads 8");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}
