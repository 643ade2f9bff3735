#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "asymgame/perturb.hpp"
#include "asymgame/pressure.hpp"
#include "asymgame/response.hpp"
#include "asymgame/sigma_star.hpp"
#include "asymgame/simulate.hpp"

namespace py = pybind11;
using namespace asymgame;

namespace {

py::object json_to_py(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null:
      return py::none();
    case nlohmann::json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case nlohmann::json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case nlohmann::json::value_t::number_float:
      return py::float_(j.get<double>());
    case nlohmann::json::value_t::string:
      return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list out;
      for (const auto& e : j) out.append(json_to_py(e));
      return out;
    }
    case nlohmann::json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = json_to_py(v);
      return out;
    }
    default:
      return py::none();
  }
}

game_param<double> param(const std::string& p) {
  return make_param<double>(parse_probability(p));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Belief dynamics, values, certificates and simulation for a "
            "two-state zero-sum repeated game with one-sided information";

  m.def("f_T", [](double theta, const std::string& p) { return f_T(theta, param(p)); },
        py::arg("theta"), py::arg("p"));
  m.def("f_B", [](double theta, const std::string& p) { return f_B(theta, param(p)); },
        py::arg("theta"), py::arg("p"));
  m.def("phi", [](double theta, const std::string& p) { return phi(theta, param(p)); },
        py::arg("theta"), py::arg("p"));
  m.def("alpha", [](double t, const std::string& p) { return alpha(t, param(p)); },
        py::arg("t"), py::arg("p"));
  m.def("psi", [](double t, const std::string& p) { return psi(t, param(p)); }, py::arg("t"),
        py::arg("p"));

  m.def(
      "orbit",
      [](const std::string& theta0, int n, const std::string& p, const std::string& precision) {
        const precision_context ctx = parse_precision(precision);
        nlohmann::json j;
        if (ctx.mode == precision_mode::rational) {
          game_param<rational> P = make_param<rational>(parse_probability(p));
          auto fo = orbit_fractions(parse_probability(theta0), n, P);
          j["sides"] = fo.sides;
          nlohmann::json pts = nlohmann::json::array(), fracs = nlohmann::json::array();
          for (std::size_t k = 0; k < fo.size(); ++k) {
            pts.push_back(to_double(fo.point(k)));
            fracs.push_back(format_real(fo.point(k)));
          }
          j["points"] = pts;
          j["fractions"] = fracs;
        } else {
          game_param<double> P = param(p);
          auto o = orbit(to_double(parse_probability(theta0)), n, P);
          j["points"] = o.points;
          j["sides"] = o.sides;
        }
        return json_to_py(j);
      },
      py::arg("theta0"), py::arg("n"), py::arg("p"), py::arg("precision") = "float64");

  m.def(
      "value",
      [](const std::string& p, double tol, const std::string& precision) {
        const precision_context ctx = parse_precision(precision);
        const rational pr = parse_probability(p);
        nlohmann::json j;
        if (ctx.mode == precision_mode::bigfloat) {
          set_bigfloat_bits(ctx.bits);
          auto lv = value_ladder(make_param<bigfloat>(pr), bigfloat(tol));
          j = {{"v", to_double(lv.v)},
               {"v_str", format_real(lv.v)},
               {"inv_v", to_double(lv.series)},
               {"terms", lv.terms},
               {"tail_bound", to_double(lv.tail_bound)}};
        } else {
          auto lv = value_ladder(make_param<double>(pr), tol);
          j = {{"v", lv.v},
               {"inv_v", lv.series},
               {"terms", lv.terms},
               {"tail_bound", lv.tail_bound}};
        }
        return json_to_py(j);
      },
      py::arg("p"), py::arg("tol") = 1e-12, py::arg("precision") = "float64");

  m.def(
      "respond",
      [](const std::string& p, double tol, int grid, int depth) {
        return json_to_py(to_json(solve_response(param(p), tol, grid, depth)));
      },
      py::arg("p"), py::arg("tol") = 1e-11, py::arg("grid") = 2000, py::arg("depth") = 60);

  m.def(
      "certify",
      [](const std::string& scheme, const std::string& p, double p_lo, double p_hi, int depth,
         int samples, const std::string& precision) {
        if (scheme == "chain") return json_to_py(to_json(certify_range(p_lo, p_hi, samples, depth)));
        pressure_certificate cert;
        if (scheme == "three")
          cert = certify_three_interval(param(p));
        else if (scheme == "nine-a")
          cert = certify_nine_interval_a(param(p));
        else if (scheme == "nine-b")
          cert = certify_nine_interval_b(p_lo, p_hi, samples);
        else if (parse_precision(precision).mode == precision_mode::rational)
          cert = certify_auto(parse_probability(p), depth);
        else
          cert = certify_auto(param(p), depth);
        return json_to_py(to_json(cert));
      },
      py::arg("scheme") = "auto", py::arg("p") = "0.7", py::arg("p_lo") = 0.0,
      py::arg("p_hi") = 0.0, py::arg("depth") = 60, py::arg("samples") = 100,
      py::arg("precision") = "float64");

  m.def(
      "perturb",
      [](const std::string& p, int k0, double eps, int terms, const std::string& precision) {
        const precision_context ctx = parse_precision(precision);
        const rational pr = parse_probability(p);
        if (ctx.mode == precision_mode::bigfloat) {
          set_bigfloat_bits(ctx.bits);
          perturb_config<bigfloat> cfg{k0, bigfloat(format_real(eps)), terms};
          return json_to_py(to_json(lemma_margin(make_param<bigfloat>(pr), cfg)));
        }
        perturb_config<double> cfg{k0, eps, terms};
        return json_to_py(to_json(lemma_margin(make_param<double>(pr), cfg)));
      },
      py::arg("p"), py::arg("k0"), py::arg("eps"), py::arg("terms") = 50,
      py::arg("precision") = "float64");

  m.def(
      "z_n",
      [](int n, const std::string& p) { return Z_n(n, param(p)); }, py::arg("n"), py::arg("p"));

  m.def(
      "margin_curve",
      [](const std::string& p, int k0, const std::vector<double>& eps_grid) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& pt : margin_curve(param(p), k0, eps_grid))
          rows.push_back({{"epsilon", pt.epsilon},
                          {"margin", pt.margin},
                          {"tail_budget", pt.tail_budget}});
        return json_to_py(rows);
      },
      py::arg("p"), py::arg("k0"), py::arg("eps_grid"));

  m.def(
      "simulate",
      [](const std::string& p, const std::string& strat1, const std::string& strat2,
         long long rounds, int replicates, unsigned long long seed, int jobs, int depth) {
        game_param<double> P = param(p);
        auto res = replicated_play(P, parse_player1(strat1, P), parse_player2(strat2, P, depth),
                                   rounds, replicates, seed, jobs);
        nlohmann::json traces = nlohmann::json::array();
        for (const auto& t : res.traces)
          traces.push_back({{"seed", t.seed},
                            {"rounds", t.rounds},
                            {"total_gain", t.total_gain},
                            {"mean", t.mean},
                            {"ci95", t.ci95}});
        return json_to_py(
            {{"mean", res.mean}, {"std_error", res.std_error}, {"traces", traces}});
      },
      py::arg("p"), py::arg("strat1") = "sigma-star", py::arg("strat2") = "always-L",
      py::arg("rounds") = 100000, py::arg("replicates") = 4, py::arg("seed") = 1,
      py::arg("jobs") = 0, py::arg("depth") = 40);

  m.def(
      "payoff_independence",
      [](const std::string& p, const std::string& strat1, const std::string& strat2a,
         const std::string& strat2b, long long rounds, int replicates, unsigned long long seed) {
        game_param<double> P = param(p);
        auto rep = payoff_independence_test(P, parse_player1(strat1, P),
                                            parse_player2(strat2a, P), parse_player2(strat2b, P),
                                            rounds, replicates, seed);
        return json_to_py({{"mean_a", rep.mean_a},
                           {"mean_b", rep.mean_b},
                           {"diff", rep.diff},
                           {"sigma", rep.sigma},
                           {"replicates", rep.replicates},
                           {"indistinguishable", rep.indistinguishable}});
      },
      py::arg("p"), py::arg("strat1"), py::arg("strat2a"), py::arg("strat2b"),
      py::arg("rounds") = 100000, py::arg("replicates") = 8, py::arg("seed") = 1);
}
