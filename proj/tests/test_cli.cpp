#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(TLAB_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), f)) r.out += buf.data();
  const int status = pclose(f);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_config(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("tlab_cli_" + name + ".json");
  std::ofstream(path) << body;
  return path.string();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("empty grid gives a header-only CSV") {
  const Result r = run("compare --config " + write_config("empty", R"({"compare": {"delta": []}})"));
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 1);
  CHECK(ls[0].rfind("delta,eps,purifier_L", 0) == 0);
}

TEST_CASE("config errors exit with 2") {
  CHECK(run("compare --config " + write_config("bad", "{not json")).code == 2);
  CHECK(run("qsp --config " + write_config("type", R"({"qsp": {"eps": "x"}})")).code == 2);
  CHECK(run("purify --config /nonexistent/file.json").code == 2);
  CHECK(run("purify --format xml").code == 2);
  CHECK(run("").code == 2);
}

TEST_CASE("contract violations exit with 1") {
  CHECK(run("purify --config " + write_config("half", R"({"purify": {"p": [0.5]}})")).code == 1);
}

TEST_CASE("compare at delta = 0.25, eps = 0.01") {
  const Result r = run("compare --format json --config " +
                       write_config("cmp", R"({"compare": {"delta": [0.25], "eps": [0.01]}})"));
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.size() == 1);
  const auto& row = j[0];
  CHECK(std::abs(row["purifier_L"].get<double>() - 2.0) < 1e-9);
  CHECK(row["qsp_degree"].get<long long>() > 2);
  CHECK(row["majority_queries"].get<long long>() > row["qsp_degree"].get<long long>());
}

TEST_CASE("CSV cells carry 17 significant digits and reruns are identical") {
  const std::string cfg = write_config("qsp", R"({"qsp": {"eps": [0.3], "p": [0.1, 0.9]}, "seed": 5})");
  const Result a = run("qsp --config " + cfg);
  const Result b = run("qsp --config " + cfg);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto ls = lines(a.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[1].rfind("0.29999999999999999,", 0) == 0);
  CHECK(run("qsp --seed 6 --config " + cfg).out != a.out);
}

TEST_CASE("output file") {
  const auto path = std::filesystem::temp_directory_path() / "tlab_cli_out.csv";
  std::filesystem::remove(path);
  const Result r = run("majority --out " + path.string() + " --config " +
                       write_config("maj", R"({"majority": {"ell": [3], "p": [0.2]}})"));
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header.rfind("ell,p,dW,imprecision_exact", 0) == 0);
  CHECK(row.rfind("3,0.20000000000000001,1,0.45607", 0) == 0);
}
