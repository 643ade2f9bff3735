#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct cli_result {
  int exit_code = -1;
  std::string out;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

cli_result run_cli(const std::string& args) {
  static int counter = 0;
  const std::string out_file = "cli_test_out_" + std::to_string(counter++) + ".txt";
  const std::string cmd = std::string(ASYMGAME_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
  const int raw = std::system(cmd.c_str());
  cli_result r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out_file);
  std::remove(out_file.c_str());
  return r;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("help and usage errors") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("value").exit_code == 2);           // missing --p
  CHECK(run_cli("value --p 0.3").exit_code == 2);   // p below 1/2
  CHECK(run_cli("value --p abc").exit_code == 2);
  CHECK(run_cli("sweep --p-min 0.5 --p-max 0.6 --step -1").exit_code == 2);
  CHECK(run_cli("nosuchcommand").exit_code == 2);
}

TEST_CASE("value command prints the worked values") {
  auto r = run_cli("value --p 0.75 --tol 1e-12");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("0.35267910") != std::string::npos);

  auto half = run_cli("value --p 0.5");
  CHECK(half.exit_code == 0);
  CHECK(half.out.find("v = 0.5") != std::string::npos);

  auto both = run_cli("value --p 0.6667 --method both --output json");
  CHECK(both.exit_code == 0);
  auto j = nlohmann::json::parse(both.out);
  CHECK(std::stod(j["discrepancy"].get<std::string>()) < 1e-9);

  auto big = run_cli("value --p 0.73275300915 --precision bigfloat:256 --tol 1e-30");
  CHECK(big.exit_code == 0);
  CHECK(big.out.find("0.361469540454") != std::string::npos);

  auto rat = run_cli("value --p 3/4 --precision rational --output json");
  CHECK(rat.exit_code == 0);
  auto jr = nlohmann::json::parse(rat.out);
  CHECK(jr["v"].get<std::string>().find('/') != std::string::npos);

  CHECK(run_cli("value --p 1 --tol 1e-10").exit_code == 3);  // divergent series
}

TEST_CASE("sweep emits byte-stable CSV sorted by p") {
  auto a = run_cli("sweep --p-min 0.5 --p-max 0.6 --step 0.01 --jobs 2 --out sweep_a.csv");
  auto b = run_cli("sweep --p-min 0.5 --p-max 0.6 --step 0.01 --jobs 1 --out sweep_b.csv");
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  const std::string csv_a = slurp("sweep_a.csv");
  const std::string csv_b = slurp("sweep_b.csv");
  CHECK(csv_a == csv_b);
  CHECK(csv_a.find("p,v_sigma_star,upper_bound_p_over_4p_minus_1,lower_bound_quarter") == 0);
  // spot row: p=0.5 gives v=0.5, upper bound 0.5 and the constant quarter
  {
    std::istringstream lines(csv_a);
    std::string line;
    std::getline(lines, line);  // header
    std::getline(lines, line);
    double c0, c1, c2, c3;
    CHECK(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &c0, &c1, &c2, &c3) == 4);
    CHECK(c0 == 0.5);
    CHECK(std::abs(c1 - 0.5) < 1e-9);
    CHECK(c2 == 0.5);
    CHECK(c3 == 0.25);
  }
  std::remove("sweep_a.csv");
  std::remove("sweep_b.csv");
}

TEST_CASE("respond command") {
  auto r = run_cli("respond --p 0.70 --grid 600 --depth 40");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["inequality_report"]["passed"].get<bool>());

  auto high = run_cli("respond --p 0.79 --grid 200");
  CHECK(high.exit_code == 1);  // no contraction
}

TEST_CASE("certify command") {
  auto three = run_cli("certify --p 0.69 --scheme three");
  CHECK(three.exit_code == 0);
  auto j = nlohmann::json::parse(three.out);
  CHECK(j["passed"].get<bool>());
  CHECK(j["rho"].get<double>() < 1);

  auto nineb = run_cli("certify --scheme nine-b --p-lo 0.709637 --p-hi 0.719023 --samples 120");
  CHECK(nineb.exit_code == 0);
  CHECK(nlohmann::json::parse(nineb.out)["rho"].get<double>() < 1);

  auto deep = run_cli("certify --p 0.7321 --scheme auto --depth 230 --precision rational");
  CHECK(deep.exit_code == 0);
  auto jd = nlohmann::json::parse(deep.out);
  CHECK(jd["passed"].get<bool>());
  CHECK(jd["rho"].get<double>() > 0.99);  // tight but below one at this depth

  auto chain = run_cli("certify --auto --p-lo 0.667 --p-hi 0.719023 --samples 40 --depth 50");
  CHECK(chain.exit_code == 0);
  CHECK(chain.out.find("covered") != std::string::npos);

  auto gap = run_cli("certify --auto --p-lo 0.667 --p-hi 0.75 --samples 20 --depth 40");
  CHECK(gap.exit_code == 1);
  CHECK(gap.out.find("gap") != std::string::npos);
}

TEST_CASE("perturb command") {
  auto r = run_cli("perturb --p 3/4 --k0 7 --eps 0.01 --terms 60");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "improves");
  CHECK(j["margin"].get<double>() > 1e-5);

  // epsilon = 0 leaves a zero margin inside the tail budget: inconclusive
  CHECK(run_cli("perturb --p 3/4 --k0 7 --eps 0").exit_code == 3);
}

TEST_CASE("simulate command") {
  auto r = run_cli("simulate --p 0.6 --strat1 sigma-star --strat2 tau-star "
                   "--rounds 200000 --replicates 4 --seed 7 --out sim.csv");
  CHECK(r.exit_code == 0);
  const std::string csv = slurp("sim.csv");
  CHECK(csv.find("seed,rounds,mean,ci95,strat1,strat2,p") == 0);
  auto again = run_cli("simulate --p 0.6 --strat1 sigma-star --strat2 tau-star "
                       "--rounds 200000 --replicates 4 --seed 7 --out sim2.csv");
  CHECK(again.exit_code == 0);
  CHECK(slurp("sim2.csv") == csv);
  std::remove("sim.csv");
  std::remove("sim2.csv");

  auto ind = run_cli("simulate --p 0.7 --strat1 sigma-star --strat2 always-L "
                     "--strat2b always-R --rounds 100000 --replicates 6 --seed 3");
  CHECK(ind.exit_code == 0);
  auto j = nlohmann::json::parse(ind.out);
  CHECK(j["indistinguishable"].get<bool>());
}

TEST_CASE("json config file supplies defaults, flags override") {
  {
    std::ofstream f("cli_cfg.json");
    f << R"({"value": {"p": "0.75", "tol": 1e-10}})";
  }
  auto r = run_cli("--config cli_cfg.json value");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("0.35267910") != std::string::npos);
  auto o = run_cli("--config cli_cfg.json value --p 0.5");
  CHECK(o.exit_code == 0);
  CHECK(o.out.find("v = 0.5") != std::string::npos);
  std::remove("cli_cfg.json");
}

TEST_SUITE_END();
