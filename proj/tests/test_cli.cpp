#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = ENDCERT_CLI_PATH;
const std::string kFixtures = ENDCERT_FIXTURES_DIR;

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() / ("endcert-cli-" + std::to_string(::getpid()) + "-" +
                                       std::to_string(counter()++));
    fs::create_directories(dir);
  }
  ~Workspace() { std::error_code ec; fs::remove_all(dir, ec); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

int run_in(const fs::path& cwd, const std::string& args) {
  const std::string cmd = "cd '" + cwd.string() + "' && '" + kCli + "' " + args + " >cli.out 2>cli.err";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("certify exit codes") {
  Workspace ws;
  CHECK(run_in(ws.dir, "certify '" + kFixtures + "/example1.json'") == 0);
  CHECK(run_in(ws.dir, "certify '" + kFixtures + "/example2.json'") == 2);
  CHECK(run_in(ws.dir, "certify '" + kFixtures + "/example2-interior.json'") == 0);
  CHECK(run_in(ws.dir, "certify no-such-file.json") == 1);
  CHECK_FALSE(slurp(ws.dir / "cli.err").empty());  // diagnostic on stderr
}

TEST_CASE("config validation failures exit 1") {
  Workspace ws;
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream out(ws.dir / name);
    out << body;
  };
  write("bad-json.json", "{ not json");
  CHECK(run_in(ws.dir, "certify bad-json.json") == 1);

  write("bad-dsl.json", R"({"domain":[0,1],"T":"otherwise -> [x/4,","gauges":{"f":{"kind":"identity"},"phi":{"kind":"linear","k":0.25}}})");
  CHECK(run_in(ws.dir, "certify bad-dsl.json") == 1);
  const auto err = slurp(ws.dir / "cli.err");
  CHECK(err.find("line") != std::string::npos);  // positioned DSL diagnostic

  write("bad-gauge.json", R"({"domain":[0,1],"T":"otherwise -> [0, x]","gauges":{"f":{"kind":"cubic"},"phi":{"kind":"linear","k":0.25}}})");
  CHECK(run_in(ws.dir, "certify bad-gauge.json") == 1);

  // phi = t^2 fails its class check at load time
  write("bad-phi.json", R"({"domain":[0,1],"T":"otherwise -> [0, x]","gauges":{"f":{"kind":"identity"},"phi":{"kind":"power","p":2}}})");
  CHECK(run_in(ws.dir, "certify bad-phi.json") == 1);

  // guards that do not cover the domain are rejected up front
  write("uncovered.json", R"({"domain":[0,1],"T":"if x <= 0.5 -> [0, x]","gauges":{"f":{"kind":"identity"},"phi":{"kind":"linear","k":0.25}}})");
  CHECK(run_in(ws.dir, "certify uncovered.json") == 1);

  write("bad-domain.json", R"({"domain":[1,0],"T":"otherwise -> [0, x]","gauges":{"f":{"kind":"identity"},"phi":{"kind":"linear","k":0.25}}})");
  CHECK(run_in(ws.dir, "certify bad-domain.json") == 1);
}

TEST_CASE("solve exit codes and outputs") {
  Workspace ws;
  CHECK(run_in(ws.dir, "solve '" + kFixtures + "/example1.json'") == 0);
  CHECK(fs::exists(ws.dir / "result.json"));
  CHECK(fs::exists(ws.dir / "trace.csv"));
  {
    std::ifstream in(ws.dir / "trace.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "step,x,set_lo,set_hi,delta_gap,step_dist");
  }

  // forced truncation
  CHECK(run_in(ws.dir, "solve '" + kFixtures + "/example1.json' --max-iter 3") == 3);

  // multistart traces fan out per start
  CHECK(run_in(ws.dir, "solve '" + kFixtures + "/example2.json'") == 0);
  CHECK(fs::exists(ws.dir / "trace-0.csv"));
  CHECK(fs::exists(ws.dir / "trace-1.csv"));
}

TEST_CASE("gauge-check exit codes") {
  Workspace ws;
  CHECK(run_in(ws.dir, "gauge-check '{\"kind\":\"linear\",\"k\":0.25}' --class phi") == 0);
  CHECK(run_in(ws.dir, "gauge-check '{\"kind\":\"power\",\"p\":2}' --class phi") == 2);
  CHECK(run_in(ws.dir, "gauge-check '{\"kind\":\"power\",\"p\":2}' --class omega") == 2);
  CHECK(run_in(ws.dir, "gauge-check '{\"kind\":\"quad-scale\",\"c\":2}' --class psi") == 0);
  CHECK(run_in(ws.dir, "gauge-check '{\"kind\":\"cubic\"}' --class phi") == 1);
  CHECK(run_in(ws.dir, "gauge-check '{\"kind\":\"linear\",\"k\":0.25}' --class sigma") == 1);
  CHECK(run_in(ws.dir, "gauge-check 'not json' --class phi") == 1);
  // report lands on stdout
  CHECK(run_in(ws.dir, "gauge-check '{\"kind\":\"linear\",\"k\":0.25}' --class phi") == 0);
  CHECK(slurp(ws.dir / "cli.out").find("\"verdict\"") != std::string::npos);
}

TEST_CASE("flag overrides take precedence over the config") {
  Workspace ws;
  // a tolerance far looser than any residual turns example 2 green
  CHECK(run_in(ws.dir, "certify '" + kFixtures + "/example2.json' --tol 1") == 0);
  // an unknown strategy is a usage error
  CHECK(run_in(ws.dir, "solve '" + kFixtures + "/example1.json' --strategy sideways") == 1);
  // --out redirects the report
  CHECK(run_in(ws.dir, "certify '" + kFixtures + "/example1.json' --out custom.json") == 0);
  CHECK(fs::exists(ws.dir / "custom.json"));
}

TEST_CASE("repeated runs are byte identical") {
  Workspace a, b;
  REQUIRE(run_in(a.dir, "certify '" + kFixtures + "/example2.json'") == 2);
  REQUIRE(run_in(b.dir, "certify '" + kFixtures + "/example2.json'") == 2);
  CHECK(slurp(a.dir / "report.json") == slurp(b.dir / "report.json"));

  REQUIRE(run_in(a.dir, "solve '" + kFixtures + "/example2.json'") == 0);
  REQUIRE(run_in(b.dir, "solve '" + kFixtures + "/example2.json'") == 0);
  CHECK(slurp(a.dir / "result.json") == slurp(b.dir / "result.json"));
  CHECK(slurp(a.dir / "trace-0.csv") == slurp(b.dir / "trace-0.csv"));

  REQUIRE(run_in(a.dir, "gauge-check '{\"kind\":\"log1p\"}' --class phi") == 0);
  REQUIRE(run_in(b.dir, "gauge-check '{\"kind\":\"log1p\"}' --class phi") == 0);
  CHECK(slurp(a.dir / "cli.out") == slurp(b.dir / "cli.out"));
}
