#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "seqbell/cli.hpp"

using namespace seqbell;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return CliResult{code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<double> csv_row(const std::string& line) {
    std::vector<double> vals;
    std::istringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) vals.push_back(std::stod(cell));
    return vals;
}

fs::path temp_file(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "seqbell_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

fs::path write_config(const std::string& name, const std::string& body) {
    const fs::path p = temp_file(name);
    std::ofstream f(p);
    f << body;
    return p;
}

const std::string good_config = R"({
  "version": 1,
  "pair_rate": 3200,
  "window": 6,
  "vis_zx": 0.997,
  "vis_diag": 0.993,
  "seed": 12345,
  "thetas_deg": [18.4]
})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("svalues prints the closed-form report") {
    const CliResult r = run_cli({"svalues", "18.4"});
    REQUIRE(r.code == 0);
    CHECK(r.err.empty());
    const std::vector<std::string> lines = lines_of(r.out);
    REQUIRE(lines.size() == 8);
    CHECK(lines[0] == "theta_deg: 18.4");
    CHECK(lines[1] == "F: 0.599024");
    CHECK(lines[2] == "G: 0.800731");
    CHECK(lines[3] == "S_AB1: 2.26481");
    CHECK(lines[4] == "S_AB2: 2.26136");
    CHECK(lines[5] == "violates_AB1: true");
    CHECK(lines[6] == "violates_AB2: true");
    CHECK(lines[7] == "double_violation: true");

    const CliResult flag = run_cli({"svalues", "--theta-deg", "18.4"});
    CHECK(flag.code == 0);
    CHECK(flag.out == r.out);
}

TEST_CASE("svalues marks the window edges and outside points") {
    // Just past the 22.5-deg edge only the Alice-Bob2 pair still violates.
    const CliResult edge = run_cli({"svalues", "23"});
    REQUIRE(edge.code == 0);
    CHECK(edge.out.find("violates_AB1: false") != std::string::npos);
    CHECK(edge.out.find("violates_AB2: true") != std::string::npos);
    CHECK(edge.out.find("double_violation: false") != std::string::npos);

    const CliResult weak = run_cli({"svalues", "4"});
    REQUIRE(weak.code == 0);
    CHECK(weak.out.find("violates_AB1: true") != std::string::npos);
    CHECK(weak.out.find("violates_AB2: false") != std::string::npos);

    const CliResult zero = run_cli({"svalues", "0"});
    REQUIRE(zero.code == 0);
    CHECK(zero.out.find("S_AB1: 2.82843") != std::string::npos);
    CHECK(zero.out.find("S_AB2: 1.41421") != std::string::npos);
}

TEST_CASE("svalues rejects bad angle usage") {
    CHECK(run_cli({"svalues"}).code == 1);
    CHECK(run_cli({"svalues", "10", "--theta-deg", "12"}).code == 1);
    CHECK(run_cli({"svalues", "10", "--theta-deg", "12"}).err.find(
              "exactly one angle") != std::string::npos);
    CHECK(run_cli({"svalues", "95"}).code == 1);
    CHECK(run_cli({"svalues", "-3"}).code == 1);
}

TEST_CASE("sweep emits the expected CSV table") {
    const CliResult r = run_cli({"sweep"});
    REQUIRE(r.code == 0);
    const std::vector<std::string> lines = lines_of(r.out);
    REQUIRE(lines.size() == 92);  // header + 0..45 deg in 0.5-deg steps
    CHECK(lines[0] ==
          "theta_deg,F,G,S_AB1_analytic,S_AB2_analytic,S_AB1_sim,S_AB2_sim");

    const std::vector<double> first = csv_row(lines[1]);
    REQUIRE(first.size() == 7);
    CHECK(first[0] == 0.0);
    CHECK(first[1] == 0.0);
    CHECK(first[2] == 1.0);
    CHECK(first[3] == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
    CHECK(first[4] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

    // 22.5 deg sits at row 46: S_AB1 = 2, S_AB2 = sqrt(2) + 1.
    const std::vector<double> mid = csv_row(lines[46]);
    CHECK(mid[0] == 22.5);
    CHECK(mid[3] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(mid[4] == doctest::Approx(std::sqrt(2.0) + 1.0).epsilon(1e-9));

    // Simulation columns reproduce the closed forms at table precision.
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<double> row = csv_row(lines[i]);
        REQUIRE(std::abs(row[5] - row[3]) < 1e-8);
        REQUIRE(std::abs(row[6] - row[4]) < 1e-8);
    }
}

TEST_CASE("sweep writes to a file when asked") {
    const fs::path out = temp_file("sweep.csv");
    const CliResult r = run_cli({"sweep", "--from-deg", "10", "--to-deg", "20",
                                 "--step-deg", "2.5", "--out", out.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(out);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    const std::vector<std::string> lines = lines_of(ss.str());
    REQUIRE(lines.size() == 6);  // header + 10, 12.5, 15, 17.5, 20
    CHECK(csv_row(lines[1])[0] == 10.0);
    CHECK(csv_row(lines[5])[0] == 20.0);
}

TEST_CASE("sweep validates its range") {
    CHECK(run_cli({"sweep", "--step-deg", "0"}).code == 1);
    CHECK(run_cli({"sweep", "--step-deg", "-1"}).code == 1);
    CHECK(run_cli({"sweep", "--from-deg", "30", "--to-deg", "10"}).code == 1);
    CHECK(run_cli({"sweep", "--to-deg", "95"}).code == 1);
}

TEST_CASE("simulate is reproducible and seed-aware") {
    const fs::path cfg = write_config("sim.json", good_config);
    const CliResult a = run_cli({"simulate", "--config", cfg.string()});
    const CliResult b = run_cli({"simulate", "--config", cfg.string()});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);  // byte-for-byte reproducible

    const std::vector<std::string> lines = lines_of(a.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] ==
          "theta_deg,S_AB1,S_AB1_sigma,S_AB2,S_AB2_sigma,"
          "sigmas_above_2_AB1,sigmas_above_2_AB2,seed");
    const std::vector<double> row = csv_row(lines[1]);
    REQUIRE(row.size() == 8);
    CHECK(row[0] == 18.4);
    CHECK(row[7] == 12345.0);
    // Experimental-scale statistics put both CHSH values well above 2.
    CHECK(row[1] > 2.0);
    CHECK(row[3] > 2.0);
    CHECK(row[5] > 5.0);
    CHECK(row[6] > 5.0);
    CHECK(row[2] > 0.0);
    CHECK(row[2] < 0.05);

    const CliResult c =
        run_cli({"simulate", "--config", cfg.string(), "--seed", "99"});
    REQUIRE(c.code == 0);
    CHECK(c.out != a.out);
    CHECK(lines_of(c.out)[1].find(",99") != std::string::npos);
    const CliResult d =
        run_cli({"simulate", "--config", cfg.string(), "--seed", "99"});
    CHECK(c.out == d.out);
}

TEST_CASE("simulate writes CSV files and spans all angles") {
    const fs::path cfg = write_config("sim_multi.json", R"({
      "version": 1, "pair_rate": 3200, "window": 6,
      "vis_zx": 0.997, "vis_diag": 0.993, "seed": 5,
      "thetas_deg": [4, 16.4, 18.4, 20.5, 28]
    })");
    const fs::path out = temp_file("sim.csv");
    const CliResult r =
        run_cli({"simulate", "--config", cfg.string(), "--out", out.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(out);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    const std::vector<std::string> lines = lines_of(ss.str());
    REQUIRE(lines.size() == 6);
    CHECK(csv_row(lines[1])[0] == 4.0);
    CHECK(csv_row(lines[5])[0] == 28.0);
}

TEST_CASE("simulate reports config problems by field") {
    auto err_for = [](const std::string& name, const std::string& body) {
        const fs::path cfg = write_config(name, body);
        const CliResult r = run_cli({"simulate", "--config", cfg.string()});
        CHECK(r.code == 1);
        return r.err;
    };
    CHECK(err_for("v0.json",
                  R"({"version":2,"pair_rate":1,"window":1,"vis_zx":1,"vis_diag":1,"thetas_deg":[10]})")
              .find("version") != std::string::npos);
    CHECK(err_for("miss.json",
                  R"({"version":1,"window":1,"vis_zx":1,"vis_diag":1,"thetas_deg":[10]})")
              .find("pair_rate") != std::string::npos);
    CHECK(err_for("unknown.json",
                  R"({"version":1,"pair_rate":1,"window":1,"vis_zx":1,"vis_diag":1,"thetas_deg":[10],"rate":5})")
              .find("rate") != std::string::npos);
    CHECK(err_for("vis.json",
                  R"({"version":1,"pair_rate":1,"window":1,"vis_zx":0.9,"vis_diag":0.95,"thetas_deg":[10]})")
              .find("vis_diag") != std::string::npos);
    CHECK(err_for("empty.json",
                  R"({"version":1,"pair_rate":1,"window":1,"vis_zx":1,"vis_diag":1,"thetas_deg":[]})")
              .find("thetas_deg") != std::string::npos);
    CHECK(err_for("badtheta.json",
                  R"({"version":1,"pair_rate":1,"window":1,"vis_zx":1,"vis_diag":1,"thetas_deg":["x"]})")
              .find("thetas_deg") != std::string::npos);
    CHECK(err_for("range.json",
                  R"({"version":1,"pair_rate":1,"window":1,"vis_zx":1,"vis_diag":1,"thetas_deg":[120]})")
              .find("thetas") != std::string::npos);
    CHECK(err_for("seed.json",
                  R"({"version":1,"pair_rate":1,"window":1,"vis_zx":1,"vis_diag":1,"seed":-4,"thetas_deg":[10]})")
              .find("seed") != std::string::npos);
    CHECK(err_for("notjson.json", "{nope").find("config") != std::string::npos);

    const CliResult missing =
        run_cli({"simulate", "--config", "/nonexistent/path.json"});
    CHECK(missing.code == 1);
    CHECK(missing.err.find("cannot open") != std::string::npos);

    CHECK(run_cli({"simulate"}).code == 1);  // --config is required
}

TEST_CASE("verify-circuit passes the built circuits and gates failures") {
    const CliResult ok = run_cli({"verify-circuit"});
    REQUIRE(ok.code == 0);
    CHECK(ok.out.find("two_port deviation:") != std::string::npos);
    CHECK(ok.out.find("single_port(+1) deviation:") != std::string::npos);
    CHECK(ok.out.find("single_port(-1) deviation:") != std::string::npos);
    CHECK(ok.out.find("max deviation:") != std::string::npos);
    CHECK(ok.out.find("OK: all operators match") != std::string::npos);
    CHECK(ok.out.find("HWP3") != std::string::npos);  // element report

    const CliResult other = run_cli(
        {"verify-circuit", "--theta-deg", "31.7", "--phi-deg", "42.0"});
    CHECK(other.code == 0);

    const CliResult bad =
        run_cli({"verify-circuit", "--perturb-hwp3-deg", "0.5"});
    CHECK(bad.code == 2);
    CHECK(bad.out.find("FAIL: deviation exceeds") != std::string::npos);
}

TEST_CASE("verify-circuit round-trips exported JSON") {
    const fs::path exported = temp_file("circuit.json");
    const CliResult save = run_cli({"verify-circuit", "--theta-deg", "18.4",
                                    "--phi-deg", "10", "--out",
                                    exported.string()});
    REQUIRE(save.code == 0);

    const CliResult load =
        run_cli({"verify-circuit", "--theta-deg", "18.4", "--phi-deg", "10",
                 "--circuit-json", exported.string()});
    REQUIRE(load.code == 0);
    CHECK(load.out.find("OK: all operators match") != std::string::npos);

    // The same file verified against the wrong reference angle must fail.
    const CliResult wrong =
        run_cli({"verify-circuit", "--theta-deg", "25", "--phi-deg", "10",
                 "--circuit-json", exported.string()});
    CHECK(wrong.code == 2);

    const CliResult perturbed =
        run_cli({"verify-circuit", "--theta-deg", "18.4", "--phi-deg", "10",
                 "--circuit-json", exported.string(), "--perturb-hwp3-deg",
                 "1"});
    CHECK(perturbed.code == 2);

    const CliResult gone =
        run_cli({"verify-circuit", "--circuit-json", "/nonexistent.json"});
    CHECK(gone.code == 1);
}

TEST_CASE("top-level interface behavior") {
    const CliResult help = run_cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("svalues") != std::string::npos);
    CHECK(help.out.find("sweep") != std::string::npos);
    CHECK(help.out.find("simulate") != std::string::npos);
    CHECK(help.out.find("verify-circuit") != std::string::npos);

    CHECK(run_cli({}).code == 1);
    CHECK(run_cli({}).err.find("subcommand") != std::string::npos);
    CHECK(run_cli({"frobnicate"}).code == 1);
    CHECK(run_cli({"sweep", "--bogus-flag"}).code == 1);
}

}  // TEST_SUITE("cli")
