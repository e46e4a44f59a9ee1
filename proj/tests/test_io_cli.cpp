#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>

#include "helpers.hpp"
#include "nvmix/cli_commands.hpp"
#include "nvmix/io.hpp"

using nvmix::ingest_observations;
using test::TempFile;

namespace {

// Runs the command-line binary with stdout and stderr captured; returns the
// exit code.
int run_cli(const std::string& args, std::string* out = nullptr, std::string* err = nullptr) {
  const TempFile out_file, err_file;
  const std::string cmd = std::string(NVMIX_CLI_PATH) + " " + args + " > " + out_file.path() +
                          " 2> " + err_file.path();
  const int status = std::system(cmd.c_str());
  if (out) *out = test::read_file(out_file.path());
  if (err) *err = test::read_file(err_file.path());
  if (status < 0) return -1;
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("ingestion of plain and decorated files") {
  {
    const TempFile f("1.0\n2.0\n");
    const nvmix::Sample s = ingest_observations(f.path(), false);
    REQUIRE(s.n() == 2);
    CHECK(s.values[0] == 1.0);
    CHECK(s.values[1] == 2.0);
    CHECK(s.provenance == f.path());

    const nvmix::Sample logged = ingest_observations(f.path(), true);
    CHECK(logged.values[0] == 0.0);
    CHECK(logged.values[1] == std::log(2.0));
    CHECK(logged.provenance == f.path() + " (log)");
  }
  {
    const TempFile f("value\r\n1.5\r\n2.5\r\n");  // header plus CRLF endings
    const nvmix::Sample s = ingest_observations(f.path(), false);
    REQUIRE(s.n() == 2);
    CHECK(s.values[0] == 1.5);
    CHECK(s.values[1] == 2.5);
  }
  {
    const TempFile f("\xEF\xBB\xBF" "7.5\n");  // UTF-8 byte order mark
    CHECK(ingest_observations(f.path(), false).values[0] == 7.5);
  }
  {
    const TempFile f("value,\n1.25,\n");  // single column with trailing commas
    CHECK(ingest_observations(f.path(), false).values[0] == 1.25);
  }
  {
    const TempFile f("+3.5\n\n   \n-0.25\n");  // leading plus, blank lines
    const nvmix::Sample s = ingest_observations(f.path(), false);
    REQUIRE(s.n() == 2);
    CHECK(s.values[0] == 3.5);
    CHECK(s.values[1] == -0.25);
  }
  {
    std::string big;
    for (int i = 0; i < 1022; ++i) big += nvmix::format_double(0.001 * i) + "\n";
    const TempFile f(big);
    CHECK(ingest_observations(f.path(), false).n() == 1022);
  }
}

TEST_CASE("ingestion errors name the offending line") {
  {
    const TempFile f("1.0\n2.0\nxyz\n");
    try {
      ingest_observations(f.path(), false);
      FAIL("expected an ingestion error");
    } catch (const std::invalid_argument& e) {
      const std::string what = e.what();
      CHECK(what.find(":3:") != std::string::npos);
      CHECK(what.find("cannot parse 'xyz'") != std::string::npos);
    }
  }
  {
    const TempFile f("1.0\n-2.0\n");
    try {
      ingest_observations(f.path(), true);
      FAIL("expected a log-transform error");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
  }
  {
    const TempFile f("1.0,2.0\n");
    CHECK_THROWS_WITH_AS(ingest_observations(f.path(), false),
                         doctest::Contains("expected a single column"), std::invalid_argument);
  }
  {
    const TempFile f("inf\n");
    CHECK_THROWS_WITH_AS(ingest_observations(f.path(), false),
                         doctest::Contains("not finite"), std::invalid_argument);
  }
  {
    const TempFile f("");
    CHECK_THROWS_WITH_AS(ingest_observations(f.path(), false),
                         doctest::Contains("no observations"), std::invalid_argument);
  }
  CHECK_THROWS_WITH_AS(ingest_observations("/nonexistent/nvmix/input.txt", false),
                       doctest::Contains("cannot open"), std::invalid_argument);
}

TEST_CASE("shortest round-trip formatting") {
  for (double v : {0.0, 1.0, -1.5, 0.1, 1e-300, 123456.789, 3.141592653589793,
                   -2.2250738585072014e-308}) {
    const std::string s = nvmix::format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(nvmix::format_double(0.1) == "0.1");
  CHECK(nvmix::format_double(1.0) == "1");
}

TEST_CASE("csv writer quotes exactly the fields that need it") {
  const TempFile f;
  nvmix::write_csv(f.path(), {"a,b", "c\"d", "plain"}, {{"x\ny", "-1.5", ""}});
  CHECK(test::read_file(f.path()) ==
        "\"a,b\",\"c\"\"d\",plain\r\n\"x\ny\",-1.5,\r\n");
}

TEST_CASE("csv round trip preserves doubles bitwise") {
  const std::vector<double> values{0.5, -1.25, 3.141592653589793, 1e-12, 42.0};
  std::vector<std::vector<std::string>> rows;
  for (double v : values) rows.push_back({nvmix::format_double(v)});
  const TempFile f;
  nvmix::write_csv(f.path(), {"value"}, rows);

  const nvmix::Sample s = ingest_observations(f.path(), false);
  REQUIRE(s.n() == values.size());
  for (std::size_t i = 0; i < values.size(); ++i) CHECK(s.values[i] == values[i]);
}

TEST_CASE("drift command runs in process and writes its envelope") {
  const TempFile input("2\n-1\n");
  const TempFile out;
  nvmix::EstimateMuOptions opt;
  opt.input = input.path();
  opt.output = out.path();
  const nvmix::Envelope env = nvmix::cmd_estimate_mu(opt);

  CHECK(env["version"] == "1.0.0");
  CHECK(env["command"] == "estimate-mu");
  CHECK(env.contains("config"));
  CHECK(env.contains("outputs"));
  CHECK(env.contains("diagnostics"));
  CHECK(std::fabs(env["outputs"]["mu_hat"].get<double>() - 0.025840236724643682423) <= 1e-8);
  CHECK(env["outputs"]["bracket_found"] == true);
  CHECK(env["diagnostics"]["n"] == 2);

  const nvmix::Envelope reread = nvmix::Envelope::parse(test::read_file(out.path()));
  CHECK(reread == env);
}

TEST_CASE("cli: simulate is byte-for-byte reproducible") {
  const TempFile a, b;
  const std::string args = "simulate --model gig --mu 0.5 --n 50 --seed 7 --output ";
  std::string out1, out2;
  REQUIRE(run_cli(args + a.path() + ".csv", &out1) == 0);
  REQUIRE(run_cli(args + b.path() + ".csv", &out2) == 0);
  const std::string csv1 = test::read_file(a.path() + ".csv");
  const std::string csv2 = test::read_file(b.path() + ".csv");
  CHECK(!csv1.empty());
  CHECK(csv1 == csv2);
  CHECK(csv1.compare(0, 7, "value\r\n") == 0);
  std::remove((a.path() + ".csv").c_str());
  std::remove((b.path() + ".csv").c_str());

  // The envelopes echo the same config and land on stdout.
  const nvmix::Envelope env = nvmix::Envelope::parse(out1);
  CHECK(env["command"] == "simulate");
  CHECK(env["config"]["seed"] == 7);
}

TEST_CASE("cli: drift estimation to stdout") {
  std::string out;
  REQUIRE(run_cli("estimate-mu --model gig --mu 0.5 --n 500 --seed 3", &out) == 0);
  const nvmix::Envelope env = nvmix::Envelope::parse(out);
  CHECK(env["command"] == "estimate-mu");
  CHECK(env["outputs"]["bracket_found"] == true);
  const double mu_hat = env["outputs"]["mu_hat"].get<double>();
  CHECK(std::isfinite(mu_hat));
  CHECK(std::fabs(mu_hat - 0.5) < 0.5);
}

TEST_CASE("cli: usage and domain errors set distinct exit codes") {
  std::string err;

  CHECK(run_cli("estimate-mu --bogus-flag 1", nullptr, &err) == 1);

  err.clear();
  CHECK(run_cli("simulate --model weibull", nullptr, &err) == 1);
  CHECK(err.find("error") != std::string::npos);

  CHECK(run_cli("fit", nullptr, &err) == 1);  // missing --input

  // Unwritable output path: the run itself succeeds, writing fails.
  CHECK(run_cli("estimate-mu --model gig --n 20 --seed 1 --output /nonexistent_dir/x.json",
                nullptr, &err) == 2);

  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("simulate --help") == 0);
}

TEST_CASE("cli: density estimate lands in a csv table") {
  const TempFile base;
  const std::string csv = base.path() + ".csv";
  REQUIRE(run_cli("estimate-density --model gig --mu 0.5 --n 200 --seed 2 --known-mu 0.5 "
                  "--grid-min 0.5 --grid-max 2.0 --grid-step 0.5 --output " +
                  csv) == 0);
  const std::string body = test::read_file(csv);
  CHECK(body.compare(0, 9, "s,g_hat\r\n") == 0);
  // header + 4 grid rows, CRLF terminated
  std::size_t lines = 0;
  for (std::size_t pos = body.find("\r\n"); pos != std::string::npos;
       pos = body.find("\r\n", pos + 2))
    ++lines;
  CHECK(lines == 5);
  std::remove(csv.c_str());
}

TEST_CASE("cli: study emits one csv row per replicate") {
  const TempFile base;
  const std::string csv = base.path() + ".csv";
  REQUIRE(run_cli("study --model gig --mu 0.5 --sizes 30,60 --replicates 2 --target mu "
                  "--seed 5 --output " +
                  csv) == 0);
  const std::string body = test::read_file(csv);
  CHECK(body.compare(0, 2, "n,") == 0);
  std::size_t lines = 0;
  for (std::size_t pos = body.find("\r\n"); pos != std::string::npos;
       pos = body.find("\r\n", pos + 2))
    ++lines;
  CHECK(lines == 5);  // header + 2 sizes x 2 replicates
  std::remove(csv.c_str());
}

TEST_CASE("cli: noiseless pipeline check with a reduced contour") {
  std::string out;
  REQUIRE(run_cli("oracle-check --u-max 10 --v-max 2 --grid-min 0.5 --grid-max 2.0 "
                  "--grid-step 0.5",
                  &out) == 0);
  const nvmix::Envelope env = nvmix::Envelope::parse(out);
  CHECK(env["command"] == "oracle-check");
  CHECK(env["outputs"]["max_grid_error"].is_number());
  CHECK(env["outputs"]["mellin_at_gamma"]["abs_error"].is_number());
}
