#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "nderiv/csv.hpp"
#include "nderiv/grid.hpp"

namespace {

struct CliResult {
  int code = -1;
  std::string stdout_text;
};

CliResult run_cli(const std::string& args) {
  const std::string out = "cli_stdout.tmp";
  const std::string cmd =
      std::string(NDERIV_CLI_PATH) + " " + args + " >" + out + " 2>&1";
  const int raw = std::system(cmd.c_str());
  CliResult r;
#ifdef _WIN32
  r.code = raw;
#else
  r.code = WEXITSTATUS(raw);
#endif
  std::ifstream in(out);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.stdout_text = ss.str();
  std::remove(out.c_str());
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool exists(const std::string& path) {
  std::ifstream in(path);
  return static_cast<bool>(in);
}

void write_parabola_csv(const std::string& path, bool header = true) {
  std::ofstream out(path);
  if (header) out << "x,y\n";
  for (int i = 0; i <= 100; ++i) {
    const double x = i / 100.0;
    out << nderiv::csv::format_double(x) << ','
        << nderiv::csv::format_double(x * x) << '\n';
  }
}

}  // namespace

TEST_CASE("differentiate: recovers 2x from x^2 samples") {
  write_parabola_csv("cli_in.csv");
  CliResult r = run_cli(
      "differentiate -i cli_in.csv -o cli_out.csv --gradient cg-h1h1 "
      "--stop discrepancy --delta 1e-6");
  REQUIRE_MESSAGE(r.code == 0, r.stdout_text);

  nderiv::csv::Table t = nderiv::csv::read_table("cli_out.csv");
  REQUIRE(t.header.size() == 3);
  REQUIRE(t.rows.size() == 101);
  double num = 0.0, den = 0.0;
  for (const auto& row : t.rows) {
    double x = 0, d = 0;
    REQUIRE(nderiv::csv::parse_double(row[0], x));
    REQUIRE(nderiv::csv::parse_double(row[1], d));
    num += (d - 2 * x) * (d - 2 * x);
    den += 4 * x * x;
  }
  CHECK(std::sqrt(num / den) < 1e-2);
  CHECK(exists("cli_out_history.csv"));

  std::remove("cli_in.csv");
  std::remove("cli_out.csv");
  std::remove("cli_out_history.csv");
}

TEST_CASE("differentiate: constant data yields the zero derivative at once") {
  {
    std::ofstream out("cli_const.csv");
    for (int i = 0; i <= 50; ++i) out << i * 0.02 << ",3.5\n";
  }
  CliResult r = run_cli("differentiate -i cli_const.csv -o cli_const_out.csv");
  REQUIRE_MESSAGE(r.code == 0, r.stdout_text);
  nderiv::csv::Table t = nderiv::csv::read_table("cli_const_out.csv");
  for (const auto& row : t.rows) {
    double d = 1.0;
    REQUIRE(nderiv::csv::parse_double(row[1], d));
    CHECK(d == 0.0);
  }
  // zero iterations: the history holds only the initialization record
  nderiv::csv::Table h = nderiv::csv::read_table("cli_const_out_history.csv");
  CHECK(h.rows.size() == 1);
  std::remove("cli_const.csv");
  std::remove("cli_const_out.csv");
  std::remove("cli_const_out_history.csv");
}

TEST_CASE("differentiate: validation failures") {
  SUBCASE("non-uniform x exits 2 without output") {
    {
      std::ofstream out("cli_bad.csv");
      out << "0,0\n0.1,1\n0.15,2\n0.3,3\n0.4,4\n";
    }
    CliResult r = run_cli("differentiate -i cli_bad.csv -o cli_bad_out.csv");
    CHECK(r.code == 2);
    CHECK(r.stdout_text.find("resample") != std::string::npos);
    CHECK_FALSE(exists("cli_bad_out.csv"));
    std::remove("cli_bad.csv");
  }
  SUBCASE("missing input exits 1") {
    CliResult r = run_cli("differentiate -i does_not_exist.csv -o x.csv");
    CHECK(r.code == 1);
  }
  SUBCASE("discrepancy stop without delta exits 2") {
    write_parabola_csv("cli_in2.csv");
    CliResult r = run_cli(
        "differentiate -i cli_in2.csv -o x.csv --stop discrepancy");
    CHECK(r.code == 2);
    std::remove("cli_in2.csv");
  }
  SUBCASE("dirichlet bc without phi values exits 2") {
    write_parabola_csv("cli_in3.csv");
    CliResult r = run_cli(
        "differentiate -i cli_in3.csv -o x.csv --bc dirichlet");
    CHECK(r.code == 2);
    std::remove("cli_in3.csv");
  }
}

TEST_CASE("experiment command") {
  SUBCASE("unknown name exits 2 and lists valid names") {
    CliResult r = run_cli("experiment bogus");
    CHECK(r.code == 2);
    CHECK(r.stdout_text.find("example1_dense_s001") != std::string::npos);
  }
  SUBCASE("summary carries one row per seed") {
    CliResult r = run_cli("experiment example1_sparse_s001 --seeds 3 --out .");
    REQUIRE_MESSAGE(r.code == 0, r.stdout_text);
    nderiv::csv::Table t =
        nderiv::csv::read_table("example1_sparse_s001_summary.csv");
    CHECK(t.rows.size() == 3);
  }
  SUBCASE("identical invocations are byte-identical") {
    REQUIRE(run_cli("experiment example1_sparse_s001 --seeds 3 --out .").code ==
            0);
    const std::string first = slurp("example1_sparse_s001_summary.csv");
    REQUIRE(run_cli("experiment example1_sparse_s001 --seeds 3 --out .").code ==
            0);
    CHECK(first == slurp("example1_sparse_s001_summary.csv"));
  }
}

TEST_CASE("sweep command") {
  SUBCASE("single-cell sweep equals the experiment output") {
    REQUIRE(run_cli("sweep example1_sparse_s001 --gradients sobolev "
                    "--stops discrepancy --seeds 3 --out .")
                .code == 0);
    REQUIRE(run_cli("experiment example1_sparse_s001 --gradient sobolev "
                    "--stop discrepancy --seeds 3 --out .")
                .code == 0);
    CHECK(slurp("example1_sparse_s001__sobolev__discrepancy_summary.csv") ==
          slurp("example1_sparse_s001_summary.csv"));
    CHECK(exists("example1_sparse_s001_sweep_index.csv"));
  }
  SUBCASE("parallel jobs produce the same index as serial") {
    REQUIRE(run_cli("sweep example1_sparse_s001 --seeds 2 --out . --jobs 3")
                .code == 0);
    const std::string parallel = slurp("example1_sparse_s001_sweep_index.csv");
    REQUIRE(run_cli("sweep example1_sparse_s001 --seeds 2 --out . --jobs 1")
                .code == 0);
    CHECK(parallel == slurp("example1_sparse_s001_sweep_index.csv"));
  }
  SUBCASE("unknown experiment exits 2") {
    CHECK(run_cli("sweep bogus").code == 2);
  }
  SUBCASE("empty gradient list exits 2") {
    CHECK(run_cli("sweep example1_sparse_s001 --gradients \"\"").code == 2);
  }
  SUBCASE("unknown gradient exits 2") {
    CHECK(run_cli("sweep example1_sparse_s001 --gradients newton").code == 2);
  }
}

TEST_CASE("help output enumerates the experiment names") {
  CliResult r = run_cli("experiment --help");
  CHECK(r.code == 0);
  CHECK(r.stdout_text.find("example4_kink") != std::string::npos);
  CHECK(r.stdout_text.find("landweber_contrast") != std::string::npos);
}
