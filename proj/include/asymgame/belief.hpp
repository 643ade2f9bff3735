#pragma once

#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "asymgame/errors.hpp"
#include "asymgame/numeric.hpp"

namespace asymgame {

// Persistence probability p of the hidden state, with gamma = 2p - 1
// carried in the same arithmetic.  p = 1 is admitted for simulation; the
// series routines reject it separately.
template <class R>
struct game_param {
  R p;
  R gamma;

  explicit game_param(R p_) : p(std::move(p_)), gamma(2 * p - 1) {
    if (!(p >= R(1) / 2 && p <= R(1)))
      throw std::domain_error("game parameter p must lie in [1/2, 1]");
  }
};

template <class R>
game_param<R> make_param(const rational& p) {
  return game_param<R>(from_rational<R>(p));
}

// Side label: 1 iff theta >= 1/2 (ties go to the upper side).
template <class R>
int side(const R& theta) {
  return theta * 2 >= R(1) ? 1 : 0;
}

template <class R>
void check_belief(const R& theta) {
  if (!(theta >= R(0) && theta <= R(1)))
    throw std::domain_error("belief outside [0, 1]");
}

// Belief update when Player 1 plays T.
template <class R>
R f_T(const R& theta, const game_param<R>& P) {
  check_belief(theta);
  if (side(theta) == 1) return P.p;
  return (P.p * theta + (1 - P.p) * (1 - 2 * theta)) / (1 - theta);
}

// Belief update when Player 1 plays B; satisfies f_B(t) = 1 - f_T(1 - t).
template <class R>
R f_B(const R& theta, const game_param<R>& P) {
  check_belief(theta);
  if (side(theta) == 0) return 1 - P.p;
  return (3 * P.p - 1) - P.gamma / theta;
}

// One step of the belief dynamics: upper side updates through f_B, lower
// side through f_T, so the orbit alternates around 1/2.
template <class R>
R phi(const R& theta, const game_param<R>& P) {
  return side(theta) == 1 ? f_B(theta, P) : f_T(theta, P);
}

// Folded dynamics on [1/2, 1]: alpha(t) = max(phi(t), 1 - phi(t)).
// Both branches meet at t = 2/3 with value 1/2.
template <class R>
R alpha(const R& t, const game_param<R>& P) {
  if (!(t >= R(1) / 2 && t <= R(1))) throw std::domain_error("alpha argument outside [1/2, 1]");
  if (3 * t < R(2)) return (2 - 3 * P.p) + P.gamma / t;
  return (3 * P.p - 1) - P.gamma / t;
}

// Weight gamma / t accumulated along folded orbits.
template <class R>
R psi(const R& t, const game_param<R>& P) {
  if (!(t > R(0))) throw std::domain_error("psi argument must be positive");
  return P.gamma / t;
}

template <class R>
struct belief_orbit {
  std::vector<R> points;   // theta_0 .. theta_n
  std::vector<int> sides;  // 1 iff theta_k >= 1/2
};

template <class R>
belief_orbit<R> orbit(const R& theta0, int n, const game_param<R>& P) {
  if (n < 0) throw std::invalid_argument("orbit length must be non-negative");
  check_belief(theta0);
  belief_orbit<R> o;
  o.points.reserve(static_cast<std::size_t>(n) + 1);
  o.sides.reserve(static_cast<std::size_t>(n) + 1);
  R t = theta0;
  for (int k = 0;; ++k) {
    o.points.push_back(t);
    o.sides.push_back(side(t));
    if (k == n) break;
    t = phi(t, P);
  }
  return o;
}

// Climb probabilities u_k = max(theta_k, 1 - theta_k) along an orbit.
template <class R>
std::vector<R> fold_orbit(const belief_orbit<R>& o) {
  std::vector<R> u;
  u.reserve(o.points.size());
  for (const R& t : o.points) u.push_back(t * 2 >= R(1) ? t : 1 - t);
  return u;
}

// Orbit carried as numerator/denominator pairs (num_k / den_k, den_0 = 1).
// The pair recursion telescopes: den_{k+1} / den_k = max(theta_k, 1 - theta_k),
// hence den_{n+1} equals the product u_0 ... u_n exactly.
struct fraction_orbit {
  std::vector<rational> num;
  std::vector<rational> den;
  std::vector<int> sides;

  rational point(std::size_t k) const { return num[k] / den[k]; }
  std::size_t size() const { return num.size(); }
};

fraction_orbit orbit_fractions(const rational& theta0, int n, const game_param<rational>& P);

// Process-wide cache of double-precision orbits keyed by (p, theta0).
// Readers share; a precision change clears it.
struct orbit_cache {
  // Returns an orbit with at least n+1 points.
  static std::shared_ptr<const belief_orbit<double>> get(const game_param<double>& P,
                                                         double theta0, int n);
  static void clear();
};

}  // namespace asymgame
