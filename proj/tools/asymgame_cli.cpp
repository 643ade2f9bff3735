#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>

#include "asymgame/perturb.hpp"
#include "asymgame/pressure.hpp"
#include "asymgame/response.hpp"
#include "asymgame/sigma_star.hpp"
#include "asymgame/simulate.hpp"

namespace {

using namespace asymgame;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;       // computed, but a certificate or check failed
constexpr int kExitUsage = 2;
constexpr int kExitInconclusive = 3; // numeric verdict withheld

// JSON config file mirroring the command-line flags:
// {"value": {"p": "0.75", "tol": 1e-10}, "precision": "float64"}
class json_config : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    nlohmann::json j;
    for (const CLI::Option* opt : app->get_options({})) {
      if (!opt->get_lnames().empty() && opt->get_configurable()) {
        if (!opt->results().empty())
          j[opt->get_lnames()[0]] = opt->results().front();
        else if (default_also && !opt->get_default_str().empty())
          j[opt->get_lnames()[0]] = opt->get_default_str();
      }
    }
    return j.dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j = nlohmann::json::parse(input);
    std::vector<CLI::ConfigItem> out;
    std::function<void(const nlohmann::json&, std::vector<std::string>)> walk =
        [&](const nlohmann::json& node, std::vector<std::string> parents) {
          for (const auto& [key, value] : node.items()) {
            if (value.is_object()) {
              auto deeper = parents;
              deeper.push_back(key);
              walk(value, deeper);
              continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_array())
              for (const auto& e : value) item.inputs.push_back(scalar(e));
            else
              item.inputs.push_back(scalar(value));
            out.push_back(std::move(item));
          }
        };
    walk(j, {});
    return out;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + out_path + "'");
  f << text;
}

struct value_args {
  std::string p, precision = "float64", method = "ladder", output = "text", out_path;
  double tol = 1e-12;
  int terms = 200;
};

int run_value(const value_args& a) {
  const rational pr = parse_probability(a.p);
  const precision_context ctx = parse_precision(a.precision);
  nlohmann::json j;
  j["p"] = a.p;
  j["precision"] = precision_name(ctx);
  j["method"] = a.method;

  auto fill = [&](auto P, auto tol) {
    using R = decltype(tol);
    std::string v_str, inv_str, tail_str;
    int terms = 0;
    R discrepancy(0);
    if (a.method == "ladder" || a.method == "both") {
      auto lv = value_ladder(P, tol);
      v_str = format_real(lv.v);
      inv_str = format_real(lv.series);
      tail_str = format_real(lv.tail_bound);
      terms = lv.terms;
      if (a.method == "both") {
        R m = value_matrix(P, a.terms);
        R d = m - lv.series;
        discrepancy = d < 0 ? R(-d) : d;
        j["matrix_inv_v"] = format_real(m);
        j["discrepancy"] = format_real(discrepancy);
      }
    } else if (a.method == "matrix") {
      R m = value_matrix(P, a.terms);
      v_str = format_real(R(1 / m));
      inv_str = format_real(m);
      tail_str = "";
      terms = a.terms;
    } else {
      throw CLI::ValidationError("--method", "expected ladder|matrix|both");
    }
    j["v"] = v_str;
    j["inv_v"] = inv_str;
    j["terms"] = terms;
    if (!tail_str.empty()) j["tail_bound"] = tail_str;
  };

  switch (ctx.mode) {
    case precision_mode::float64:
      fill(make_param<double>(pr), a.tol);
      break;
    case precision_mode::bigfloat: {
      set_bigfloat_bits(ctx.bits);
      fill(make_param<bigfloat>(pr), bigfloat(a.tol));
      break;
    }
    case precision_mode::rational:
      fill(make_param<rational>(pr), rational(a.tol));
      break;
  }

  if (a.output == "json") {
    emit(j.dump(2) + "\n", a.out_path);
  } else {
    std::string text;
    for (const char* key : {"p", "precision", "method", "v", "inv_v", "terms", "tail_bound",
                            "matrix_inv_v", "discrepancy"})
      if (j.contains(key))
        text += std::string(key) + " = " +
                (j[key].is_string() ? j[key].get<std::string>() : j[key].dump()) + "\n";
    emit(text, a.out_path);
  }
  return kExitOk;
}

struct sweep_args {
  double p_min = 0.5, p_max = 0.78, step = 0.01;
  double tol = 1e-12;
  int jobs = 0;
  std::string out_path;
};

int run_sweep(const sweep_args& a) {
  if (a.step <= 0) throw CLI::ValidationError("--step", "must be positive");
  std::vector<double> ps;
  for (double p = a.p_min; p <= a.p_max + 1e-15; p += a.step) ps.push_back(std::min(p, 1.0));
  std::vector<std::string> rows(ps.size());
  std::atomic<std::size_t> next{0};
  int jobs = a.jobs > 0 ? a.jobs : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(ps.size())));
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < ps.size(); i = next.fetch_add(1)) {
      const double p = ps[i];
      game_param<double> P(p);
      const double v = value_ladder(P, a.tol).v;
      rows[i] = format_real(p) + "," + format_real(v) + "," +
                format_real(p / (4 * p - 1)) + "," + format_real(0.25);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  std::string csv = "p,v_sigma_star,upper_bound_p_over_4p_minus_1,lower_bound_quarter\n";
  for (const auto& r : rows) csv += r + "\n";
  emit(csv, a.out_path);
  return kExitOk;
}

struct respond_args {
  std::string p, out_path, output = "json";
  double tol = 1e-11;
  int grid = 2000, depth = 60;
};

int run_respond(const respond_args& a) {
  game_param<double> P(to_double(parse_probability(a.p)));
  response_solution sol = solve_response(P, a.tol, a.grid, a.depth);
  emit(to_json(sol).dump(2) + "\n", a.out_path);
  return sol.report.passed ? kExitOk : kExitFailed;
}

struct certify_args {
  std::string p, scheme = "auto", precision = "float64", out_path;
  double p_lo = 0, p_hi = 0;
  int depth = 60, samples = 200;
  bool chain = false;
};

int run_certify(const certify_args& a) {
  if (a.chain) {
    coverage_report rep = certify_range(a.p_lo, a.p_hi, std::max(10, a.samples / 4), a.depth);
    nlohmann::json j = to_json(rep);
    std::string text = j.dump(2) + "\n";
    if (rep.covered) {
      text += "covered: [" + format_real(rep.lo) + ", " + format_real(rep.hi) + "]\n";
    } else {
      for (const auto& [lo, hi] : rep.gaps)
        text += "gap: [" + format_real(lo) + ", " + format_real(hi) + "]\n";
    }
    emit(text, a.out_path);
    return rep.covered ? kExitOk : kExitFailed;
  }

  pressure_certificate cert;
  if (a.scheme == "nine-b") {
    cert = certify_nine_interval_b(a.p_lo, a.p_hi, a.samples);
  } else {
    const rational pr = parse_probability(a.p);
    if (a.scheme == "three")
      cert = certify_three_interval(make_param<double>(pr));
    else if (a.scheme == "nine-a")
      cert = certify_nine_interval_a(make_param<double>(pr));
    else if (a.scheme == "auto") {
      if (parse_precision(a.precision).mode == precision_mode::rational)
        cert = certify_auto(pr, a.depth);
      else
        cert = certify_auto(make_param<double>(pr), a.depth);
    } else {
      throw CLI::ValidationError("--scheme", "expected three|nine-a|nine-b|auto");
    }
  }
  emit(to_json(cert).dump(2) + "\n", a.out_path);
  return cert.passed ? kExitOk : kExitFailed;
}

struct perturb_args {
  std::string p, precision = "float64", out_path;
  std::string eps = "0";
  int k0 = 1, terms = 50;
};

int run_perturb(const perturb_args& a) {
  const rational pr = parse_probability(a.p);
  const precision_context ctx = parse_precision(a.precision);
  const double eps_value = std::stod(a.eps);  // validates the literal
  if (!(eps_value >= 0 && eps_value < 1))
    throw CLI::ValidationError("--eps", "must lie in [0, 1)");
  int verdict = 0;
  nlohmann::json j;
  if (ctx.mode == precision_mode::bigfloat) {
    set_bigfloat_bits(ctx.bits);
    game_param<bigfloat> P = make_param<bigfloat>(pr);
    perturb_config<bigfloat> cfg{a.k0, bigfloat(a.eps), a.terms > 0 ? a.terms : 200};
    auto rep = lemma_margin(P, cfg);
    verdict = rep.verdict;
    j = to_json(rep);
  } else if (ctx.mode == precision_mode::float64) {
    game_param<double> P = make_param<double>(pr);
    perturb_config<double> cfg{a.k0, eps_value, a.terms > 0 ? a.terms : 50};
    auto rep = lemma_margin(P, cfg);
    verdict = rep.verdict;
    j = to_json(rep);
  } else {
    throw CLI::ValidationError("--precision", "perturb supports float64 or bigfloat");
  }
  j["precision"] = precision_name(ctx);
  emit(j.dump(2) + "\n", a.out_path);
  return verdict == 0 ? kExitInconclusive : kExitOk;
}

struct simulate_args {
  std::string p, strat1 = "sigma-star", strat2 = "always-L", strat2b, out_path;
  std::int64_t rounds = 1000000;
  int replicates = 4, jobs = 0, depth = 40;
  std::uint64_t seed = 20200918;
};

int run_simulate(const simulate_args& a) {
  game_param<double> P(to_double(parse_probability(a.p)));
  player1_factory s1 = parse_player1(a.strat1, P);
  player2_automaton s2 = parse_player2(a.strat2, P, a.depth);

  if (!a.strat2b.empty()) {
    player2_automaton s2b = parse_player2(a.strat2b, P, a.depth);
    auto rep = payoff_independence_test(P, s1, s2, s2b, a.rounds, a.replicates, a.seed, a.jobs);
    nlohmann::json j{{"p", P.p},
                     {"strat1", a.strat1},
                     {"strat2a", a.strat2},
                     {"strat2b", a.strat2b},
                     {"mean_a", rep.mean_a},
                     {"mean_b", rep.mean_b},
                     {"diff", rep.diff},
                     {"sigma", rep.sigma},
                     {"replicates", rep.replicates},
                     {"indistinguishable", rep.indistinguishable}};
    emit(j.dump(2) + "\n", a.out_path);
    return kExitOk;
  }

  auto res = replicated_play(P, s1, s2, a.rounds, a.replicates, a.seed, a.jobs);
  std::string csv = trace_csv_header() + "\n";
  for (const auto& t : res.traces) csv += trace_csv_row(t, a.strat1, a.strat2, P.p) + "\n";
  if (!a.out_path.empty()) {
    emit(csv, a.out_path);
    std::cout << "mean = " << format_real(res.mean)
              << "\nstd_error = " << format_real(res.std_error) << "\n";
  } else {
    std::cout << csv << "mean = " << format_real(res.mean)
              << "\nstd_error = " << format_real(res.std_error) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for a two-state zero-sum repeated game "
               "with one-sided information"};
  app.require_subcommand(1);
  app.set_config("--config")->check(CLI::ExistingFile);
  app.config_formatter(std::make_shared<json_config>());
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  value_args va;
  auto* value = app.add_subcommand("value", "Long-run value of the ladder strategy");
  value->add_option("--p", va.p, "state persistence probability in [1/2, 1)")->required();
  value->add_option("--tol", va.tol, "series tail tolerance");
  value->add_option("--terms", va.terms, "matrix-series terms");
  value->add_option("--method", va.method, "ladder|matrix|both");
  value->add_option("--precision", va.precision, "float64|bigfloat[:bits]|rational")
      ->envname("ASYMGAME_PRECISION");
  value->add_option("--output", va.output, "text|json");
  value->add_option("--out", va.out_path, "write to file instead of stdout");

  sweep_args sa;
  auto* sweep = app.add_subcommand("sweep", "CSV of v(p) with the closed-form bounds");
  sweep->add_option("--p-min", sa.p_min);
  sweep->add_option("--p-max", sa.p_max);
  sweep->add_option("--step", sa.step);
  sweep->add_option("--tol", sa.tol);
  sweep->add_option("--jobs", sa.jobs, "worker threads (0 = hardware)");
  sweep->add_option("--out", sa.out_path);

  respond_args ra;
  auto* respond = app.add_subcommand("respond", "Best-response construction and checks");
  respond->add_option("--p", ra.p)->required();
  respond->add_option("--tol", ra.tol);
  respond->add_option("--grid", ra.grid);
  respond->add_option("--depth", ra.depth);
  respond->add_option("--out", ra.out_path);

  certify_args ca;
  auto* certify = app.add_subcommand("certify", "Spectral-radius certificates");
  certify->add_option("--p", ca.p, "parameter for pointwise schemes");
  certify->add_option("--scheme", ca.scheme, "three|nine-a|nine-b|auto");
  certify->add_option("--p-lo", ca.p_lo);
  certify->add_option("--p-hi", ca.p_hi);
  certify->add_option("--depth", ca.depth, "orbit depth for the auto scheme");
  certify->add_option("--samples", ca.samples);
  certify->add_option("--precision", ca.precision)->envname("ASYMGAME_PRECISION");
  certify->add_flag("--auto", ca.chain, "chain all regimes over [--p-lo, --p-hi]");
  certify->add_option("--out", ca.out_path);

  perturb_args pa;
  auto* perturb = app.add_subcommand("perturb", "Rung perturbation report");
  perturb->add_option("--p", pa.p)->required();
  perturb->add_option("--k0", pa.k0)->required();
  perturb->add_option("--eps", pa.eps)->required();
  perturb->add_option("--terms", pa.terms);
  perturb->add_option("--precision", pa.precision)->envname("ASYMGAME_PRECISION");
  perturb->add_option("--out", pa.out_path);

  simulate_args ma;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo play");
  simulate->add_option("--p", ma.p)->required();
  simulate->add_option("--strat1", ma.strat1, "sigma-star|perturbed:k0:eps|uniform|greedy");
  simulate->add_option("--strat2", ma.strat2,
                       "always-L|always-R|uniform|counter|tau-star|x-automaton");
  simulate->add_option("--strat2b", ma.strat2b, "second opponent: runs the paired common-random-number test");
  simulate->add_option("--rounds", ma.rounds);
  simulate->add_option("--replicates", ma.replicates);
  simulate->add_option("--seed", ma.seed);
  simulate->add_option("--jobs", ma.jobs);
  simulate->add_option("--depth", ma.depth, "x-automaton depth");
  simulate->add_option("--out", ma.out_path, "CSV of per-replicate traces");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (value->parsed()) return run_value(va);
    if (sweep->parsed()) return run_sweep(sa);
    if (respond->parsed()) return run_respond(ra);
    if (certify->parsed()) return run_certify(ca);
    if (perturb->parsed()) return run_perturb(pa);
    if (simulate->parsed()) return run_simulate(ma);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const no_contraction_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  } catch (const divergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInconclusive;
  } catch (const precision_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInconclusive;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}
