#pragma once

#include <vector>

#include <json.hpp>

#include "asymgame/belief.hpp"

namespace asymgame {

// Strategy perturbation placed at rung k0 of the ladder (the orbit point
// theta_tilde = phi^{k0}(1-p), which must sit below 1/2).
template <class R>
struct perturb_config {
  int k0 = 1;
  R epsilon{};
  int terms = 50;  // truncation of the ladder weight sums
};

template <class R>
struct perturbed_belief_set {
  R theta_tilde{};      // phi^{k0}(1-p)
  R theta_tilde_eps{};  // belief after playing T at theta_tilde
  R p_eps{};            // 1 - belief after playing B at theta_tilde
};

template <class R>
struct weight_sum {
  R w{};
  R tail{};
};

template <class R>
struct perturbation_report {
  int k0 = 0;
  R epsilon{};
  int terms = 0;
  perturbed_belief_set<R> beliefs;
  R w_phi_tilde{}, w_tilde_eps{}, w_p_eps{}, w_base{};  // the four ladder weights
  R lemma_lhs{}, lemma_rhs{}, margin{}, tail_budget{};
  R v_star{}, v_perturbed{};
  int verdict = 0;  // +1 improves, -1 worse, 0 inconclusive
  bool orbit_collision_warning = false;
};

template <class R>
perturbed_belief_set<R> perturbed_beliefs(const game_param<R>& P, const perturb_config<R>& cfg) {
  if (cfg.k0 < 0) throw std::invalid_argument("k0 must be non-negative");
  if (!(cfg.epsilon >= R(0) && cfg.epsilon < R(1)))
    throw std::invalid_argument("epsilon must lie in [0, 1)");
  belief_orbit<R> o = orbit(1 - P.p, cfg.k0, P);
  perturbed_belief_set<R> out;
  out.theta_tilde = o.points.back();
  if (!(out.theta_tilde * 2 < R(1)))
    throw std::invalid_argument("invalid k0: phi^k0(1-p) is not below 1/2");
  const R& th = out.theta_tilde;
  const R& e = cfg.epsilon;
  out.theta_tilde_eps =
      (P.p * (1 - e) * th + (1 - P.p) * (1 - (2 - e) * th)) / (1 - th);
  out.p_eps = P.p * (1 - e) + (1 - P.p) * e;
  return out;
}

// w(theta) = sum over n of the product of the first n climb probabilities
// along the orbit of theta; w(p) is the reciprocal of the ladder value.
template <class R>
weight_sum<R> ladder_weight(const R& theta, const game_param<R>& P, int terms) {
  if (terms < 1) throw std::invalid_argument("terms must be at least 1");
  if (P.p == 1) throw divergence_error("ladder weight diverges at p = 1");
  weight_sum<R> out;
  R prod(1), sum(1);
  R t = theta;
  for (int k = 0; k < terms; ++k) {
    prod *= (t * 2 >= R(1) ? t : 1 - t);
    sum += prod;
    t = phi(t, P);
  }
  out.w = sum;
  out.tail = prod * P.p / (1 - P.p);
  return out;
}

template <class R>
perturbation_report<R> lemma_margin(const game_param<R>& P, const perturb_config<R>& cfg) {
  perturbation_report<R> rep;
  rep.k0 = cfg.k0;
  rep.epsilon = cfg.epsilon;
  rep.terms = cfg.terms;
  rep.beliefs = perturbed_beliefs(P, cfg);
  const R& th = rep.beliefs.theta_tilde;
  const R one_minus_p_eps = 1 - rep.beliefs.p_eps;

  weight_sum<R> w_phi = ladder_weight(phi(th, P), P, cfg.terms);
  weight_sum<R> w_eps = ladder_weight(rep.beliefs.theta_tilde_eps, P, cfg.terms);
  weight_sum<R> w_peps = ladder_weight(one_minus_p_eps, P, cfg.terms);
  weight_sum<R> w_base = ladder_weight(1 - P.p, P, cfg.terms);
  rep.w_phi_tilde = w_phi.w;
  rep.w_tilde_eps = w_eps.w;
  rep.w_p_eps = w_peps.w;
  rep.w_base = w_base.w;

  rep.lemma_lhs = (1 - th) * (w_phi.w - w_eps.w);
  rep.lemma_rhs = th * (w_peps.w - (1 - cfg.epsilon) * w_base.w);
  rep.margin = rep.lemma_lhs - rep.lemma_rhs;
  rep.tail_budget = (1 - th) * (w_phi.tail + w_eps.tail) +
                    th * (w_peps.tail + (1 - cfg.epsilon) * w_base.tail);
  if (rep.margin > rep.tail_budget)
    rep.verdict = 1;
  else if (rep.margin < -rep.tail_budget)
    rep.verdict = -1;
  else
    rep.verdict = 0;

  // The chain construction assumes theta_tilde and its mirror stay off the
  // perturbed orbits; a collision only spoils the state-space picture, not
  // the value formulas, so it is reported rather than raised.
  const R tol = R(1) / R(1000000000000ll);
  for (const R& start : {rep.beliefs.theta_tilde_eps, one_minus_p_eps}) {
    R t = start;
    for (int k = 0; k <= cfg.terms; ++k) {
      R d1 = t - th, d2 = t - (1 - th);
      if (d1 < 0) d1 = -d1;
      if (d2 < 0) d2 = -d2;
      if (d1 < tol || d2 < tol) rep.orbit_collision_warning = true;
      t = phi(t, P);
    }
  }

  // Invariant-measure value of the perturbed strategy and of the original.
  R S(1), prod(1);
  {
    belief_orbit<R> o = orbit(1 - P.p, cfg.k0, P);
    for (int n = 0; n < cfg.k0; ++n) {
      const R& t = o.points[static_cast<std::size_t>(n)];
      prod *= (t * 2 >= R(1) ? t : 1 - t);
      S += prod;
    }
  }
  const R Q = prod;  // product of the first k0 climb probabilities
  const R D = S + Q * ((1 - th) * w_eps.w + th * w_peps.w);
  rep.v_perturbed = (1 + (1 - cfg.epsilon) * th * Q) / D;
  rep.v_star = 1 / w_base.w;
  return rep;
}

template <class R>
R perturbed_value(const game_param<R>& P, const perturb_config<R>& cfg) {
  return lemma_margin(P, cfg).v_perturbed;
}

// Residual of the return-flow balance of the perturbed chain's invariant
// measure; vanishes up to truncation error.
template <class R>
R balance_residual(const game_param<R>& P, const perturb_config<R>& cfg) {
  perturbation_report<R> rep = lemma_margin(P, cfg);
  const R& th = rep.beliefs.theta_tilde;
  belief_orbit<R> o = orbit(1 - P.p, cfg.k0, P);
  std::vector<R> climb;
  R prod(1), S(1);
  for (int n = 0; n < cfg.k0; ++n) {
    const R& t = o.points[static_cast<std::size_t>(n)];
    climb.push_back(t * 2 >= R(1) ? t : 1 - t);
    prod *= climb.back();
    S += prod;
  }
  const R Q = prod;
  const R D = S + Q * ((1 - th) * rep.w_tilde_eps + th * rep.w_p_eps);
  const R pi0 = 1 / D;

  // Flow into the base: falls from the main ladder plus falls from the two
  // perturbed branches.
  R inflow(0);
  {
    R pi_n = pi0;
    for (int n = 0; n < cfg.k0; ++n) {
      inflow += (1 - climb[static_cast<std::size_t>(n)]) * pi_n;
      pi_n *= climb[static_cast<std::size_t>(n)];
    }
    for (const R& start : {rep.beliefs.theta_tilde_eps, R(1 - rep.beliefs.p_eps)}) {
      const R branch_mass = start == rep.beliefs.theta_tilde_eps ? (1 - th) : th;
      R t = start;
      R w = pi0 * Q * branch_mass;
      for (int k = 0; k <= cfg.terms; ++k) {
        const R u = (t * 2 >= R(1) ? t : 1 - t);
        inflow += (1 - u) * w;
        w *= u;
        t = phi(t, P);
      }
    }
  }
  return inflow - pi0;
}

struct margin_point {
  double epsilon;
  double margin;
  double tail_budget;
};
std::vector<margin_point> margin_curve(const game_param<double>& P, int k0,
                                       const std::vector<double>& eps_grid);

nlohmann::json to_json(const perturbation_report<double>& rep);
nlohmann::json to_json(const perturbation_report<bigfloat>& rep);

}  // namespace asymgame
