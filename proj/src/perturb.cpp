#include "asymgame/perturb.hpp"

namespace asymgame {

std::vector<margin_point> margin_curve(const game_param<double>& P, int k0,
                                       const std::vector<double>& eps_grid) {
  if (eps_grid.empty()) throw std::invalid_argument("epsilon grid is empty");
  std::vector<margin_point> out;
  out.reserve(eps_grid.size());
  for (double e : eps_grid) {
    perturb_config<double> cfg{k0, e, 60};
    perturbation_report<double> rep = lemma_margin(P, cfg);
    out.push_back({e, rep.margin, rep.tail_budget});
  }
  return out;
}

namespace {

template <class R>
nlohmann::json report_json(const perturbation_report<R>& rep, bool as_strings) {
  auto num = [&](const R& x) -> nlohmann::json {
    if (as_strings) return format_real(x);
    return to_double(x);
  };
  return {{"k0", rep.k0},
          {"epsilon", num(rep.epsilon)},
          {"terms", rep.terms},
          {"theta_tilde", num(rep.beliefs.theta_tilde)},
          {"theta_tilde_eps", num(rep.beliefs.theta_tilde_eps)},
          {"p_eps", num(rep.beliefs.p_eps)},
          {"w",
           {{"phi_theta_tilde", num(rep.w_phi_tilde)},
            {"theta_tilde_eps", num(rep.w_tilde_eps)},
            {"one_minus_p_eps", num(rep.w_p_eps)},
            {"one_minus_p", num(rep.w_base)}}},
          {"lemma_lhs", num(rep.lemma_lhs)},
          {"lemma_rhs", num(rep.lemma_rhs)},
          {"margin", num(rep.margin)},
          {"tail_budget", num(rep.tail_budget)},
          {"v_star", num(rep.v_star)},
          {"v_perturbed", num(rep.v_perturbed)},
          {"value_difference", num(R(rep.v_perturbed - rep.v_star))},
          {"verdict", rep.verdict == 1   ? "improves"
                      : rep.verdict == -1 ? "worse"
                                          : "inconclusive"},
          {"orbit_collision_warning", rep.orbit_collision_warning}};
}

}  // namespace

nlohmann::json to_json(const perturbation_report<double>& rep) {
  return report_json(rep, false);
}

nlohmann::json to_json(const perturbation_report<bigfloat>& rep) {
  return report_json(rep, true);
}

}  // namespace asymgame
