#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(FBP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("fbp_cli_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("reports are byte-identical across runs") {
    const auto d = scratch("det");
    const std::string a = (d / "a.json").string(), b = (d / "b.json").string();
    REQUIRE(run("flatness --field cone --rotation 20 --n 129 --r 0.3 --out " + a) == 0);
    REQUIRE(run("flatness --field cone --rotation 20 --n 129 --r 0.3 --out " + b) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).find("\"schema_version\": 1") != std::string::npos);
  }

  TEST_CASE("flags override config values") {
    const auto d = scratch("override");
    std::ofstream(d / "c.ini") << "[problem]\nA = 2\n";
    const std::string out = (d / "o.json").string();
    REQUIRE(run("oracle example1 --config " + (d / "c.ini").string() + " --A 4 --out " + out) == 0);
    CHECK(slurp(out).find("\"kind\": \"fb\"") != std::string::npos);
    REQUIRE(run("oracle example1 --config " + (d / "c.ini").string() + " --out " + out) == 0);
    CHECK(slurp(out).find("\"kind\": \"no_fb\"") != std::string::npos);
  }

  TEST_CASE("solve writes its outputs and a resolved config that reproduces them") {
    const auto d = scratch("solve");
    REQUIRE(run("solve --A 4 --nodes 129 --dir " + (d / "1").string()) == 0);
    for (const char* f : {"solution.csv", "solve_report.json", "resolved_config.ini"}) CHECK(fs::exists(d / "1" / f));
    REQUIRE(run("solve --config " + (d / "1" / "resolved_config.ini").string() + " --dir " + (d / "2").string()) == 0);
    CHECK(slurp(d / "1" / "solution.csv") == slurp(d / "2" / "solution.csv"));
  }

  TEST_CASE("exit codes") {
    const auto d = scratch("codes");
    CHECK(run("") == 2);
    CHECK(run("solve --set nosuch.key=1") == 2);
    CHECK(run("solve --set problem.nodes=abc") == 2);
    CHECK(run("flatness --field cone --r 5") == 2);
    CHECK(run("whitney --mask " + (d / "missing.txt").string()) == 4);
    CHECK(run("oracle example1 --out /nonexistent/dir/x.json") == 4);
    CHECK(run("solve --A 4 --nodes 129 --set solve.max_iters=1 --dir " + (d / "nc").string()) == 3);
    CHECK(fs::exists(d / "nc" / "solve_report.json"));
  }
}
