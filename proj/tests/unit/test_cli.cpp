#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "fracmc/cli.hpp"

namespace fs = std::filesystem;
using fracmc::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / "fracmc_cli_test";
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("solve writes a header and one row per point") {
  const Result r = call({"solve", "--preset", "rc", "--beta", "0.5", "--t-max", "5", "--points", "50", "--m", "2000",
                         "--seed", "42"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("t,mc_mean,mc_stderr,closed_form,abs_err\n", 0) == 0);
  CHECK(count_lines(r.out) == 51);
}

TEST_CASE("numbers carry 17 significant digits") {
  CHECK(fracmc::cli::format_number(0.1) == "0.10000000000000001");
  CHECK(fracmc::cli::format_number(2.0) == "2");
  CHECK(fracmc::cli::format_number(std::nan("")) == "nan");
}

TEST_CASE("same seed, different threads, identical files") {
  const fs::path d = scratch();
  for (const char* cmd : {"solve", "wave"}) {
    const std::string a = (d / (std::string(cmd) + "_a.csv")).string();
    const std::string b = (d / (std::string(cmd) + "_b.csv")).string();
    const std::vector<std::string> base = std::string(cmd) == "solve"
                                              ? std::vector<std::string>{"solve", "--preset", "lc-cos", "--m", "500", "--points", "8"}
                                              : std::vector<std::string>{"wave", "--m", "300", "--nx", "9", "--nt", "3"};
    auto with = [&](const std::string& out, const char* threads) {
      auto v = base;
      v.insert(v.end(), {"--seed", "7", "--threads", threads, "--output", out});
      return v;
    };
    REQUIRE(call(with(a, "1")).code == 0);
    REQUIRE(call(with(b, "6")).code == 0);
    CHECK(slurp(a) == slurp(b));
    auto echo = [](const std::string& path) {
      auto j = nlohmann::json::parse(slurp(path + ".config.json"));
      j.erase("output");
      return j;
    };
    CHECK(echo(a) == echo(b));
  }
}

TEST_CASE("config echo replays the run") {
  const fs::path d = scratch();
  const std::string a = (d / "echo_a.csv").string();
  const std::string b = (d / "echo_b.csv").string();
  REQUIRE(call({"solve", "--preset", "nonhom-sin", "--beta", "0.7", "--m", "300", "--points", "4", "--param", "omega=3",
                "--coupled", "--output", a})
              .code == 0);
  REQUIRE(call({"solve", "--config", a + ".config.json", "--output", b}).code == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("errors are JSON with exit codes") {
  Result r = call({"solve", "--preset", "nope"});
  CHECK(r.code == 1);
  CHECK(r.err.find("\"error\"") != std::string::npos);
  CHECK(call({"solve", "--beta", "1.5"}).code == 1);
  CHECK(call({"solve", "--bogus"}).code == 1);
  CHECK(call({"solve", "--output", "/nonexistent-dir/x.csv"}).code == 1);
  CHECK(call({"solve", "--param", "R"}).code == 1);
  CHECK(call({}).code == 1);
  // E_{1/2}(1e6) is far past the double range
  r = call({"ml", "--beta", "0.5", "--z", "1e6"});
  CHECK(r.code == 2);
}

TEST_CASE("list-presets") {
  const Result r = call({"list-presets"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\nrc,") != std::string::npos);
  CHECK(r.out.find("beam-uniform") != std::string::npos);
  CHECK(r.out.find("L=1") != std::string::npos);
  CHECK(count_lines(r.out) >= 9);
  const Result j = call({"list-presets", "--format", "json"});
  CHECK(j.out.find("\"EI\"") != std::string::npos);
}

TEST_CASE("other subcommands") {
  Result r = call({"ml", "--beta", "0.5", "--z", "-1"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "z,value\n-1,0.427583576155807\n");
  r = call({"sample", "--beta", "0.5", "--t", "2", "--m", "5"});
  CHECK(r.code == 0);
  CHECK(count_lines(r.out) == 6);
  r = call({"transform", "--pair", "cos", "--beta", "0.5", "--points", "3", "--m", "100"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("t,f,f_beta,mc_mean,mc_stderr\n", 0) == 0);
  r = call({"transform", "--list"});
  CHECK(count_lines(r.out) == 17);
  r = call({"solve", "--coeffs", "1,1", "--ics", "1", "--m", "100", "--points", "2", "--format", "json"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"rows\"") != std::string::npos);
  CHECK(call({"solve", "--preset", "rc", "--coeffs", "1,1", "--ics", "1"}).code == 1);
}

TEST_CASE("ffnn train and predict") {
  const fs::path d = scratch();
  const std::string model = (d / "model.json").string();
  Result r = call({"ffnn", "train", "--preset", "rc", "--beta", "0.8", "--trajectories", "6", "--points", "20", "--m",
                   "200", "--epochs", "50", "--output", model});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("test_mse") != std::string::npos);
  CHECK(fs::exists(model + ".loss.csv"));
  r = call({"ffnn", "predict", "--model", model, "--window-values", "0.5,0.45,0.42", "--steps", "4"});
  REQUIRE(r.code == 0);
  CHECK(count_lines(r.out) == 5);
  CHECK(call({"ffnn", "predict", "--model", model, "--window-values", "0.5", "--steps", "4"}).code == 1);
}
