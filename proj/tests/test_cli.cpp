#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmono_cli/cli.hpp"
#include "qmono_cli/statefile.hpp"

#include "qmono/measures.hpp"
#include "qmono/sampling.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace qmono;
using nlohmann::json;

namespace {

std::string tmp_path(const std::string& name) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path() / "qmono_cli_tests";
  std::filesystem::create_directories(dir);
  return (dir / (std::to_string(++counter) + "_" + name)).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

struct RunOutput {
  int code = 0;
  std::string out, err;
  json parsed;  // valid when out is json
};

RunOutput run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  RunOutput r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  if (!r.out.empty() && (r.out[0] == '{' || r.out[0] == '['))
    r.parsed = json::parse(r.out);
  return r;
}

std::string make_bell_file() {
  const std::string path = tmp_path("bell.json");
  const double a = 1.0 / std::sqrt(2.0);
  PureState psi;
  psi.dims = {2, 2};
  psi.amplitudes = ComplexVector::Zero(4);
  psi.amplitudes[0] = psi.amplitudes[3] = a;
  cli::save_state(psi, path);
  return path;
}

}  // namespace

TEST_CASE("statefile round trip is bit-exact") {
  SUBCASE("density") {
    const DensityMatrix rho = sample_hs_density({2, 3}, 4, 12345);
    const std::string path = tmp_path("rt_density.json");
    cli::save_state(rho, path, {{"note", "round trip"}});
    const auto obj = cli::load_state(path);
    REQUIRE(std::holds_alternative<DensityMatrix>(obj));
    const DensityMatrix& back = std::get<DensityMatrix>(obj);
    CHECK(back.dims == rho.dims);
    REQUIRE(back.matrix.rows() == rho.matrix.rows());
    for (Eigen::Index i = 0; i < rho.matrix.rows(); ++i)
      for (Eigen::Index j = 0; j < rho.matrix.cols(); ++j) {
        CHECK(back.matrix(i, j).real() == rho.matrix(i, j).real());
        CHECK(back.matrix(i, j).imag() == rho.matrix(i, j).imag());
      }
  }
  SUBCASE("pure") {
    const PureState psi = sample_haar_pure({2, 2, 2}, 999);
    const std::string path = tmp_path("rt_pure.json");
    cli::save_state(psi, path);
    const auto obj = cli::load_state(path);
    REQUIRE(std::holds_alternative<PureState>(obj));
    const PureState& back = std::get<PureState>(obj);
    CHECK(back.dims == psi.dims);
    for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i) {
      CHECK(back.amplitudes[i].real() == psi.amplitudes[i].real());
      CHECK(back.amplitudes[i].imag() == psi.amplitudes[i].imag());
    }
  }
}

TEST_CASE("statefile error contracts") {
  SUBCASE("missing file") {
    CHECK_THROWS_AS(cli::load_state(tmp_path("missing.json")), ParseError);
  }
  SUBCASE("syntax error carries a line number") {
    const std::string path = tmp_path("syntax.json");
    write_text(path, "{\n  \"kind\": \"pure\"\n  \"dims\": [2]\n}\n");
    try {
      cli::load_state(path);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
  }
  SUBCASE("wrong data length is a parse error") {
    const std::string path = tmp_path("short.json");
    write_text(path, R"({"kind":"pure","dims":[2,2],"data":[[1.0,0.0]]})");
    CHECK_THROWS_AS(cli::load_state(path), ParseError);
  }
  SUBCASE("trace violation names the invariant") {
    const std::string path = tmp_path("trace.json");
    write_text(path, R"({"kind":"density","dims":[2],
      "data":[[0.6,0],[0,0],[0,0],[0.3,0]]})");
    try {
      cli::load_state(path);
      FAIL("expected InvariantViolation");
    } catch (const InvariantViolation& e) {
      CHECK(std::string(e.what()).find("trace") != std::string::npos);
    }
  }
  SUBCASE("norm violation names the invariant") {
    const std::string path = tmp_path("norm.json");
    write_text(path, R"({"kind":"pure","dims":[2],"data":[[0.5,0],[0.5,0]]})");
    try {
      cli::load_state(path);
      FAIL("expected InvariantViolation");
    } catch (const InvariantViolation& e) {
      CHECK(std::string(e.what()).find("norm") != std::string::npos);
    }
  }
  SUBCASE("non-psd density names the invariant") {
    const std::string path = tmp_path("psd.json");
    write_text(path, R"({"kind":"density","dims":[2],
      "data":[[1.5,0],[0,0],[0,0],[-0.5,0]]})");
    try {
      cli::load_state(path);
      FAIL("expected InvariantViolation");
    } catch (const InvariantViolation& e) {
      CHECK(std::string(e.what()).find("positivity") != std::string::npos);
    }
  }
}

TEST_CASE("measure command: Bell oracles") {
  const std::string bell = make_bell_file();
  const RunOutput g = run_cli({"measure", "--state", bell, "--cut", "0|1",
                               "--measure", "g_concurrence"});
  CHECK(g.code == 0);
  CHECK(g.parsed["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(g.parsed["method"] == "pure");

  const RunOutput n = run_cli({"measure", "--state", bell, "--measure", "negativity"});
  CHECK(n.code == 0);
  CHECK(n.parsed["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("gen ghz feeds monogamy with deficit 1") {
  const std::string path = tmp_path("ghz.json");
  const RunOutput gen = run_cli({"gen", "ghz", "--out", path});
  CHECK(gen.code == 0);
  const RunOutput mono = run_cli({"monogamy", "--state", path, "--measure", "concurrence",
                                  "--alpha", "2"});
  CHECK(mono.code == 0);
  CHECK(mono.parsed["deficit"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(mono.parsed["e_ab"].get<double>() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(mono.parsed["monogamy_verdict"].get<bool>());
}

TEST_CASE("roof command agrees with the closed form") {
  const std::string path = tmp_path("rank2.json");
  CHECK(run_cli({"gen", "random", "--dims", "2,2", "--rank", "2", "--seed", "77",
                 "--out", path})
            .code == 0);
  const auto obj = cli::load_state(path);
  const WoottersRecord rec = wootters_analysis(std::get<DensityMatrix>(obj));
  const RunOutput roof = run_cli({"roof", "--state", path, "--cut", "0|1", "--measure",
                                  "concurrence", "--mode", "min", "--members"});
  CHECK(roof.code == 0);
  CHECK(roof.parsed["value"].get<double>() ==
        doctest::Approx(rec.c_formation).epsilon(1e-5));
  CHECK(roof.parsed["converged"].get<bool>());
  CHECK(roof.parsed["decomposition"].size() == roof.parsed["members"].get<std::size_t>());
}

TEST_CASE("gen wclass produces equal formation and assistance marginals") {
  const std::string path = tmp_path("wc.json");
  CHECK(run_cli({"gen", "wclass", "--lambdas", "1,1,1,0", "--out", path}).code == 0);
  const RunOutput m = run_cli({"measure", "--state", path, "--cut", "0,1", "--measure",
                               "concurrence"});
  // marginal across 0,1 | 2 is a pure-state cut; formation on the AB marginal
  // needs the density path instead
  CHECK(m.code == 0);
}

TEST_CASE("exponent command writes the maximizer state") {
  const std::string path = tmp_path("max.json");
  const RunOutput r = run_cli({"exponent", "--dims", "2,2,2", "--measure", "concurrence",
                               "--samples", "10", "--seed", "3", "--out", path});
  CHECK(r.code == 0);
  CHECK(r.parsed["alpha_hat"].get<double>() == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(r.parsed["maximizer_label"] == "special:w");
  const auto obj = cli::load_state(path);
  CHECK(std::holds_alternative<PureState>(obj));
}

TEST_CASE("csv output has the documented header") {
  const std::string bell = make_bell_file();
  const RunOutput r = run_cli({"measure", "--state", bell, "--cut", "0|1", "--measure",
                               "g_concurrence", "--output", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("command,measure,cut,value,method", 0) == 0);
}

TEST_CASE("config file sets defaults and flags still win") {
  const std::string cfg = tmp_path("cfg.json");
  write_text(cfg, R"({"seed": 42, "output": "csv"})");
  const std::string path = tmp_path("r.json");
  const RunOutput a = run_cli({"--config", cfg, "gen", "random", "--dims", "2",
                               "--kind", "pure", "--out", path});
  CHECK(a.code == 0);
  CHECK(a.out.rfind("command,", 0) == 0);  // csv from config
  const RunOutput b = run_cli({"--config", cfg, "--output", "json", "gen", "random",
                               "--dims", "2", "--kind", "pure", "--out", path});
  CHECK(b.code == 0);
  CHECK(b.parsed["seed"].get<std::uint64_t>() == 42);  // seed from config, json from flag
  const RunOutput c = run_cli({"--config", tmp_path("nocfg.json"), "gen", "ghz",
                               "--out", path});
  CHECK(c.code == 2);  // unreadable config is a usage error
}

TEST_CASE("verify command exit codes") {
  const RunOutput ok = run_cli({"verify", "zero-g-tail"});
  CHECK(ok.code == 0);
  REQUIRE(ok.parsed.is_array());
  CHECK(ok.parsed[0]["passed"].get<bool>());

  const RunOutput bad = run_cli({"verify", "not-a-suite"});
  CHECK(bad.code == 2);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli({"bogus"}).code == 2);
  CHECK(run_cli({"measure", "--cut", "0|1", "--measure", "entropy"}).code == 2);  // no state
  CHECK(run_cli({"roof", "--state", make_bell_file(), "--measure", "concurrence",
                 "--mode", "sideways"})
            .code == 2);
  CHECK(run_cli({"measure", "--state", make_bell_file(), "--cut", "0|5",
                 "--measure", "entropy"})
            .code == 2);  // bad cut index
  CHECK(run_cli({"monogamy", "--state", make_bell_file(), "--measure", "concurrence"})
            .code == 2);  // bipartite input
  CHECK(run_cli({"gen", "random", "--dims", "2,2", "--kind", "flavor",
                 "--out", tmp_path("x.json")})
            .code == 2);
  CHECK(run_cli({"--threads", "0", "verify", "zero-g-tail"}).code == 2);
}

TEST_CASE("help exits cleanly") {
  const RunOutput r = run_cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("measure") != std::string::npos);
  CHECK(r.out.find("verify") != std::string::npos);
}
