#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string kCli = HIERPARETO_CLI_PATH;
const std::string kConfigs = HIERPARETO_CONFIG_DIR;

fs::path fresh(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hierpareto_cli_" + name);
  fs::remove_all(p);
  return p;
}

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + kCli + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// Columns of a TSV written by the tool, keyed by header name.
std::map<std::string, std::vector<double>> read_tsv(const fs::path& p) {
  std::ifstream f(p);
  std::string line;
  std::vector<std::string> header;
  std::map<std::string, std::vector<double>> cols;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream in(line);
    std::string cell;
    if (header.empty()) {
      while (std::getline(in, cell, '\t')) header.push_back(cell);
      continue;
    }
    for (std::size_t i = 0; std::getline(in, cell, '\t'); ++i) cols[header.at(i)].push_back(std::stod(cell));
  }
  return cols;
}

std::string cfg(const std::string& name) { return "--config " + kConfigs + "/" + name; }

}  // namespace

TEST_CASE("exponents for the figure configurations") {
  const fs::path out = fresh("exponents");
  REQUIRE(run(cfg("fig3_sigmoidal_l4.cfg") + " --out " + out.string() + " exponents") == 0);
  auto t = read_tsv(out / "exponents.tsv");
  CHECK(t["b"].at(0) == doctest::Approx(2.23231017901131).epsilon(1e-11));
  CHECK(t["d"].at(0) == doctest::Approx(1.0 / 39.0).epsilon(1e-12));
  CHECK(fs::exists(out / "manifest.txt"));
  CHECK(slurp(out / "manifest.txt").find("subcommand = exponents") != std::string::npos);

  REQUIRE(run(cfg("fig2_linear_l3.cfg") + " --out " + out.string() + " exponents") == 0);
  t = read_tsv(out / "exponents.tsv");
  CHECK(t["b"].at(0) == 3.0);
  CHECK(t["d"].at(0) == doctest::Approx(0.0).epsilon(1e-14));

  REQUIRE(run(cfg("fig4_slowly_varying_l2.cfg") + " --out " + out.string() + " exponents") == 0);
  t = read_tsv(out / "exponents.tsv");
  CHECK(t["b"].at(0) == 2.0);
  CHECK(t["d"].at(0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  fs::remove_all(out);
}

TEST_CASE("exit statuses") {
  const fs::path dir = fresh("status");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.cfg") << "welfare.amplitude = 3\n";
  std::ofstream(dir / "typo.cfg") << "kernel.lamda = 3\n";
  CHECK(run("--config " + (dir / "bad.cfg").string() + " --out " + dir.string() + " exponents") == 2);
  CHECK(run("--config " + (dir / "typo.cfg").string() + " --out " + dir.string() + " exponents") == 2);
  CHECK(run("--out " + dir.string() + " simulate --mode nothing") == 2);
  CHECK(run("--out " + dir.string() + " solve", "HIERPARETO_SOLVER_MAX_ITER=2") == 3);
  CHECK(fs::exists(dir / "residuals.tsv"));
  CHECK(run("--out " + dir.string() + " --grid-nodes 1 solve") == 2);
  fs::remove_all(dir);
}

TEST_CASE("environment overrides reach the model") {
  const fs::path out = fresh("env");
  REQUIRE(run("--out " + out.string() + " exponents", "HIERPARETO_KERNEL_LAMBDA=4") == 0);
  CHECK(read_tsv(out / "exponents.tsv")["d"].at(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  fs::remove_all(out);
}

TEST_CASE("solve: bit-identical reruns and the restricted interval") {
  const fs::path a = fresh("solve_a"), b = fresh("solve_b"), r = fresh("solve_r");
  const std::string common = cfg("fig2_linear_l2.cfg") + " --grid-nodes 201";
  REQUIRE(run(common + " --out " + a.string() + " solve") == 0);
  REQUIRE(run(common + " --threads 1 --out " + b.string() + " solve") == 0);
  for (const char* f : {"rho.tsv", "net_density.tsv", "gross_density.tsv", "residuals.tsv"})
    CHECK(slurp(a / f) == slurp(b / f));

  REQUIRE(run(common + " --out " + r.string() + " solve --restrict 0.3") == 0);
  auto full = read_tsv(a / "rho.tsv");
  auto part = read_tsv(r / "rho.tsv");
  CHECK_FALSE(fs::exists(r / "net_density.tsv"));
  const std::size_t off = full["x"].size() - part["x"].size();
  REQUIRE(part["x"].front() >= 0.3);
  for (std::size_t i = 0; i < part["x"].size(); ++i) {
    CHECK(part["x"][i] == full["x"][off + i]);
    CHECK(part["rho"][i] == doctest::Approx(full["rho"][off + i]).epsilon(1e-7));
  }
  auto net = read_tsv(a / "net_density.tsv");
  CHECK(net["ccdf"].front() == doctest::Approx(1.0).epsilon(1e-9));
  for (const auto& p : {a, b, r}) fs::remove_all(p);
}

TEST_CASE("simulate: rho_mc agrees with solve and repeats exactly") {
  const fs::path a = fresh("mc_a"), b = fresh("mc_b");
  const std::string common = cfg("fig2_linear_l3.cfg") + " --paths 20000 --seed 99";
  REQUIRE(run(common + " --out " + a.string() + " simulate --mode rho_mc") == 0);
  REQUIRE(run(common + " --threads 1 --out " + b.string() + " simulate --mode rho_mc") == 0);
  CHECK(slurp(a / "rho_mc.tsv") == slurp(b / "rho_mc.tsv"));
  auto t = read_tsv(a / "rho_mc.tsv");
  REQUIRE(t["x"].size() == 5);
  for (double z : t["z_score"]) CHECK(std::abs(z) < 4.0);
  for (auto p : {a, b}) fs::remove_all(p);
}

TEST_CASE("simulate: lemma checks pass on the default configuration") {
  const fs::path out = fresh("lemmas");
  CHECK(run("--paths 20000 --out " + out.string() + " simulate --mode lemma_checks") == 0);
  auto t = read_tsv(out / "lemma_checks.tsv");
  for (double p : t["pass"]) CHECK(p == 1.0);
  CHECK(run(cfg("fig4_slowly_varying_l3.cfg") + " --paths 5000 --out " + out.string() + " simulate --mode exit_times") == 0);
  CHECK(read_tsv(out / "exit_times.tsv")["capped"] == std::vector<double>{0.0, 0.0, 0.0});
  fs::remove_all(out);
}

TEST_CASE("spectrum and mixture outputs") {
  const fs::path out = fresh("misc");
  REQUIRE(run(cfg("linear_l1.5.cfg") + " --out " + out.string() + " spectrum --n 40") == 0);
  auto e = read_tsv(out / "eigenvalues.tsv");
  REQUIRE(e["re"].size() == 40);
  CHECK(e["modulus"].front() < 1e-10);
  REQUIRE(run("--out " + out.string() + " --seed 3 mixture --n 4000") == 0);
  auto m = read_tsv(out / "mixture.tsv");
  CHECK(m["share"].size() == 19);
  CHECK(fs::exists(out / "component_a1.tsv"));
  fs::remove_all(out);
}
