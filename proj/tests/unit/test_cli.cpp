#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "htq_cli/cli.hpp"
#include "htq_cli/output.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_htq(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = htq::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("htq_cli_test_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  [[nodiscard]] std::string file(const std::string& name) const { return (path_ / name).string(); }
  [[nodiscard]] std::size_t entries() const {
    return static_cast<std::size_t>(std::distance(fs::directory_iterator(path_), fs::directory_iterator{}));
  }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::size_t count(const std::string& s, char c) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), c)); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("number formatting") {
    CHECK(htq::cli::format_number(0.1) == "0.10000000000000001");
    CHECK(htq::cli::format_number(1.0 / 3.0, 18) == "0.333333333333333315");
    CHECK(htq::cli::format_number(std::nan("")) == "nan");
    CHECK(htq::cli::default_sidecar("out/run.csv") == fs::path("out/run.json"));
    CHECK(htq::cli::default_sidecar("a.json") == fs::path("a.json.meta.json"));
  }

  TEST_CASE("assemble writes a matrix and metadata") {
    TempDir dir;
    const auto r = run_htq({"assemble", "--kind", "M", "--mesh", "uniform:4", "--T", "1", "--degrees", "uniform:1", "--K",
                        "12", "--out", dir.file("M.csv")});
    REQUIRE(r.code == 0);
    const auto rows = lines(slurp(dir.file("M.csv")));
    CHECK(rows.size() == 5);
    for (const auto& row : rows) CHECK(count(row, ',') == 4);
    const auto meta = nlohmann::json::parse(slurp(dir.file("M.json")));
    CHECK(meta["config"]["command"] == "assemble");
    CHECK(meta["inputs"]["num_dofs"] == 5);
    CHECK(meta["orders"]["k_reg"] == 12);
    CHECK(meta.contains("timing"));
    CHECK(meta["versions"].contains("htq"));
  }

  TEST_CASE("oracle reports its certificate") {
    TempDir dir;
    const auto r = run_htq({"oracle", "--kind", "B", "--mesh", "uniform:4", "--T", "1", "--degrees", "uniform:1", "--out",
                        dir.file("B.csv")});
    REQUIRE(r.code == 0);
    const auto meta = nlohmann::json::parse(slurp(dir.file("B.json")));
    CHECK(meta["selfconsistency"].get<double>() <= 1e-10);
    CHECK(meta["K_F"] == 4000);
    CHECK(lines(slurp(dir.file("B.csv"))).size() == 5);
  }

  TEST_CASE("oracle non-convergence is a computational failure") {
    TempDir dir;
    const auto r = run_htq({"oracle", "--kind", "B", "--mesh", "uniform:2", "--KF", "50", "--tol", "1e-15",
                        "--no-accelerate", "--out", dir.file("B.csv")});
    CHECK(r.code == 1);
    CHECK(count(r.err, '\n') == 1);
    CHECK(dir.entries() == 0);
  }

  TEST_CASE("quadrature study") {
    TempDir dir;
    const auto r = run_htq({"quad-study", "--out", dir.file("qs.csv"), "--plot", dir.file("qs.py")});
    REQUIRE(r.code == 0);
    const auto rows = lines(slurp(dir.file("qs.csv")));
    REQUIRE(rows.size() == 20);
    CHECK(rows[0] == "K,errM,errA,errB");
    std::vector<std::array<double, 3>> err;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      std::array<double, 3> e{};
      std::sscanf(rows[i].c_str(), "%*d,%lf,%lf,%lf", &e[0], &e[1], &e[2]);
      err.push_back(e);
    }
    // K = 4..10 sits above the rounding floor
    for (std::size_t i = 3; i < 9; ++i) {
      for (int c = 0; c < 3; ++c) CHECK(err[i][c] < err[i - 1][c]);
    }
    for (int c = 0; c < 3; ++c) CHECK(err.back()[c] <= 1e-9);
    const auto plot = slurp(dir.file("qs.py"));
    CHECK(plot.find("semilogy") != std::string::npos);
    CHECK(plot.find("\"qs.csv\"") != std::string::npos);

    const auto one = run_htq({"quad-study", "--Kmin", "7", "--Kmax", "7", "--out", dir.file("one.csv")});
    REQUIRE(one.code == 0);
    CHECK(lines(slurp(dir.file("one.csv"))).size() == 2);
  }

  TEST_CASE("hp study") {
    TempDir dir;
    const auto r = run_htq({"solve", "--study", "hp", "--sigma", "0.17", "--Nmax", "10", "--out", dir.file("hp.csv"),
                        "--plot", dir.file("hp.py")});
    REQUIRE(r.code == 0);
    const auto rows = lines(slurp(dir.file("hp.csv")));
    CHECK(rows.size() == 10);
    CHECK(rows[0] == "N,M,L2,H1semi,bracket,residual,condition");
    CHECK(rows[1].rfind("2,4,", 0) == 0);
    CHECK(rows[9].rfind("10,56,", 0) == 0);
    CHECK(slurp(dir.file("hp.py")).find("sqrt(M)") != std::string::npos);
  }

  TEST_CASE("solve presets") {
    TempDir dir;
    auto r = run_htq({"solve", "--kind", "hyperbolic", "--f", "one", "--study", "h", "--p", "2", "--Nmax", "4", "--out",
                  dir.file("h.csv")});
    REQUIRE(r.code == 0);
    for (const auto& row : lines(slurp(dir.file("h.csv")))) {
      if (row[0] == 'N') continue;
      double bracket = 1.0;
      std::sscanf(row.c_str(), "%*d,%*d,%*f,%*f,%lf", &bracket);
      CHECK(bracket <= 1e-9);
    }
    r = run_htq({"solve", "--f", "poly:1,2", "--mu", "3", "--study", "single", "--mesh", "uniform:3", "--out",
             dir.file("s.csv")});
    REQUIRE(r.code == 0);
    CHECK(lines(slurp(dir.file("s.csv")))[1].find("nan") != std::string::npos);
    r = run_htq({"solve", "--kind", "hyperbolic", "--f", "tpow:1.2", "--out", dir.file("x.csv")});
    CHECK(r.code == 2);
    r = run_htq({"solve", "--f", "cubic", "--out", dir.file("x.csv")});
    CHECK(r.code == 2);
  }

  TEST_CASE("rules dump") {
    TempDir dir;
    const auto r = run_htq({"rules", "dump", "--kind", "log", "--K", "16", "--out", dir.file("log.csv")});
    REQUIRE(r.code == 0);
    const auto rows = lines(slurp(dir.file("log.csv")));
    REQUIRE(rows.size() == 17);
    CHECK(rows[0] == "node,weight");
    double sum = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto comma = rows[i].find(',');
      sum += std::stod(rows[i].substr(comma + 1));
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(run_htq({"rules", "dump", "--kind", "chebyshev", "--out", dir.file("c.csv")}).code == 2);
  }

  TEST_CASE("runs are deterministic and replay from metadata") {
    TempDir dir;
    REQUIRE(run_htq({"assemble", "--kind", "B", "--mesh", "geometric:5:0.2", "--degrees", "ramp", "--out",
                 dir.file("a.csv")})
                .code == 0);
    const std::string first = slurp(dir.file("a.csv"));
    REQUIRE(run_htq({"assemble", "--kind", "B", "--mesh", "geometric:5:0.2", "--degrees", "ramp", "--threads", "1",
                 "--out", dir.file("b.csv")})
                .code == 0);
    CHECK(slurp(dir.file("b.csv")) == first);
    REQUIRE(run_htq({"--config", dir.file("a.json"), "--out", dir.file("c.csv")}).code == 0);
    CHECK(slurp(dir.file("c.csv")) == first);
    const auto replayed = nlohmann::json::parse(slurp(dir.file("c.json")));
    CHECK(replayed["config"]["args"]["mesh"] == "geometric:5:0.2");

    REQUIRE(run_htq({"solve", "--study", "h", "--Nmax", "8", "--out", dir.file("s.csv")}).code == 0);
    REQUIRE(run_htq({"--config", dir.file("s.json"), "--out", dir.file("s2.csv")}).code == 0);
    CHECK(slurp(dir.file("s.csv")) == slurp(dir.file("s2.csv")));
  }

  TEST_CASE("usage and I/O errors") {
    TempDir dir;
    auto r = run_htq({"assemble", "--mesh", "uniform:4", "--out", dir.file("missing/M.csv")});
    CHECK(r.code == 2);
    CHECK(count(r.err, '\n') == 1);
    CHECK(r.err.rfind("htq: ", 0) == 0);
    r = run_htq({"quad-study", "--out", "/proc/htq-unwritable/qs.csv", "--plot", dir.file("qs.py")});
    CHECK(r.code == 2);
    CHECK(dir.entries() == 0);
    CHECK(run_htq({"assemble", "--mesh", "spiral:4", "--out", dir.file("M.csv")}).code == 2);
    CHECK(run_htq({"assemble", "--kind", "Q", "--out", dir.file("M.csv")}).code == 2);
    CHECK(run_htq({"assemble", "--K", "99", "--out", dir.file("M.csv")}).code == 2);
    CHECK(run_htq({"assemble"}).code == 2);
    CHECK(run_htq({"frobnicate"}).code == 2);
    CHECK(run_htq({}).code == 2);
    CHECK(run_htq({"--config", dir.file("nothing.json")}).code == 2);
    CHECK(dir.entries() == 0);
    const auto help = run_htq({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("quad-study") != std::string::npos);
  }

  TEST_CASE("theorem assumption warning") {
    TempDir dir;
    const auto r = run_htq({"assemble", "--mesh", "uniform:1", "--out", dir.file("M.csv")});
    CHECK(r.code == 0);
    CHECK(r.err.find("warning") != std::string::npos);
  }
}
