#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(LPWAVE_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("bound") {
  const auto r = run("bound --phi gaussian --c 1 --p 2 --eps 4");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("bound").get<double>() == doctest::Approx(0.27067).epsilon(1e-5));
  CHECK(j.at("valid") == true);
  CHECK(run("bound --phi gaussian --c 1 --p 2 --eps abc").code == 2);
  CHECK(run("bound --phi cauchy --c 1 --p 2 --eps 4").code == 2);
}

TEST_CASE("threshold") {
  const auto r = run("threshold --phi power:1.5 --c 1 --p 2");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("1.5874", 0) == 0);
}

TEST_CASE("usage errors") {
  CHECK(run("").code == 2);
  CHECK(run("bound --c 1 --p 2 --eps 4 --bogus 3").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("experiment --config /nonexistent/missing.json --out /tmp/x").code == 2);
}

TEST_CASE("plan") {
  auto r = run("plan --model ou:0.01 --basis meyer --p 2 --T 1 --eps 0.5 --delta 0.1 --alpha 0.9");
  CHECK(r.code == 0);
  const auto nl = r.out.find('\n');
  REQUIRE(nl != std::string::npos);
  CHECK(r.out.rfind("k0'=", 0) == 0);
  const auto j = nlohmann::json::parse(r.out.substr(nl + 1));
  CHECK(j.at("bound").get<double>() <= 0.1);
  CHECK(j.at("route") == "uniform");
  r = run("plan --model ou:1 --basis meyer --p 2 --T 1 --eps 0.5 --delta 0.1");
  CHECK(r.code == 1);
  CHECK(nlohmann::json::parse(r.out).at("feasible") == false);
}

TEST_CASE("basis-info") {
  auto r = run("basis-info --basis daubechies:3 --T 1 --k1 3");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("C_phi").get<double>() > 0.0);
  CHECK(j.contains("C_psi_tail"));
  CHECK(j.at("lipschitz").contains("order"));
  CHECK(run("basis-info --basis haar").code == 0);
  CHECK(run("basis-info --basis haar --T 1").code == 2);
  CHECK(run("basis-info --basis haar --T 2 --k1 2").code == 2);
}

TEST_CASE("simulate") {
  const auto dir = std::filesystem::temp_directory_path() / "lpwave_cli_sim";
  std::filesystem::remove_all(dir);
  const auto r = run("simulate --model ou:1 --L 1 --h 0.25 --paths 2 --seed 3 --out " + dir.string());
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(dir / "path_0.csv"));
  CHECK(std::filesystem::exists(dir / "path_1.csv"));
  std::ifstream in(dir / "path_1.csv");
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 10);
  CHECK(run("simulate --model ou:1 --L 1 --h 0.3 --out " + dir.string()).code == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("experiment") {
  const auto dir = std::filesystem::temp_directory_path() / "lpwave_cli_exp";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  nlohmann::json cfg{{"model", "ou:1"},   {"basis", "haar"}, {"phi", "gaussian"}, {"schemes", {"k0'=2;k=", "k0'=2;k=2"}},
                     {"p", 2},            {"T", 1},          {"grid_L", 4},        {"grid_h", 0.015625},
                     {"n_paths", 100},    {"epsilons", {1}}, {"seed", 1}};
  std::ofstream(dir / "cfg.json") << cfg.dump();
  const auto r = run("experiment --config " + (dir / "cfg.json").string() + " --out " + (dir / "out").string());
  CHECK(r.code == 0);
  for (const char* f : {"results.csv", "tails.csv", "report.json"}) CHECK(std::filesystem::exists(dir / "out" / f));
  cfg["unknown"] = 1;
  std::ofstream(dir / "bad.json") << cfg.dump();
  CHECK(run("experiment --config " + (dir / "bad.json").string() + " --out " + (dir / "out").string()).code == 2);
  std::filesystem::remove_all(dir);
}
