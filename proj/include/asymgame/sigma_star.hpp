#pragma once

#include <array>
#include <vector>

#include "asymgame/belief.hpp"

namespace asymgame {

enum class hidden_state { s_low, s_high };

// Probability that Player 1 plays T given the hidden state and the public
// belief theta.  The four cases glue continuously at theta = 1/2.
template <class R>
R sigma_star_prob_T(hidden_state s, const R& theta) {
  check_belief(theta);
  if (side(theta) == 0) {
    if (s == hidden_state::s_low) return R(1);
    return (1 - 2 * theta) / (1 - theta);
  }
  if (s == hidden_state::s_low) return (1 - theta) / theta;
  return R(0);
}

template <class R>
struct ladder_value {
  std::vector<R> u;  // climb probabilities u_0 .. u_{terms-1}
  R series{};        // truncated 1 + u0 + u0*u1 + ...  (equals 1/v)
  R v{};
  R tail_bound{};    // bound on the dropped tail of the series
  int terms = 0;
};

// Long-run gain of the ladder strategy: v = 1 / sum of climb products.
// The tail after the last kept term is below product * p/(1-p).
template <class R>
ladder_value<R> value_ladder(const game_param<R>& P, const R& tol) {
  if (!(tol > R(0))) throw std::invalid_argument("tolerance must be positive");
  if (P.p == 1) throw divergence_error("ladder series diverges at p = 1");
  ladder_value<R> out;
  const R ratio = P.p / (1 - P.p);
  R term(1), sum(1);
  R t = P.p;
  for (int k = 0; k < 100000; ++k) {
    R u = t * 2 >= R(1) ? t : 1 - t;
    out.u.push_back(u);
    term *= u;
    sum += term;
    out.tail_bound = term * ratio;
    if (out.tail_bound < tol) break;
    t = phi(t, P);
  }
  out.terms = static_cast<int>(out.u.size());
  out.series = sum;
  out.v = 1 / sum;
  return out;
}

namespace detail {
template <class R>
using m2 = std::array<std::array<R, 2>, 2>;

template <class R>
m2<R> mul(const m2<R>& A, const m2<R>& B) {
  return {{{A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]},
           {A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]}}};
}
}  // namespace detail

// Companion matrices of the numerator/denominator recursion.
template <class R>
detail::m2<R> u_matrix(int s, const game_param<R>& P) {
  const R& p = P.p;
  if (s == 1) return {{{3 * p - 1, -(2 * p - 1)}, {R(1), R(0)}}};
  return {{{3 * p - 2, 1 - p}, {R(-1), R(1)}}};
}

// Matrix-product form of the same series: partial sum of
// (0 1) (I + U_{e0} + U_{e1}U_{e0} + ...) (p 1)^T, whose n-th term is the
// climb product u_0 ... u_{n-1}.
template <class R>
R value_matrix(const game_param<R>& P, int n_terms) {
  if (n_terms < 1) throw std::invalid_argument("n_terms must be at least 1");
  belief_orbit<R> o = orbit(P.p, n_terms, P);
  detail::m2<R> acc = {{{R(1), R(0)}, {R(0), R(1)}}};
  R sum(0);
  for (int n = 0; n < n_terms; ++n) {
    sum += acc[1][0] * P.p + acc[1][1];
    acc = detail::mul(u_matrix(o.sides[static_cast<std::size_t>(n)], P), acc);
  }
  return sum;
}

// Stationary distribution of the ladder chain: pi_n proportional to the
// climb product u_0 ... u_{n-1}, pi_0 = v.
template <class R>
std::vector<R> ladder_stationary(const game_param<R>& P, int n_max) {
  if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
  if (P.p == 1) throw divergence_error("ladder chain has no stationary law at p = 1");
  belief_orbit<R> o = orbit(P.p, n_max, P);
  std::vector<R> weight;
  weight.reserve(static_cast<std::size_t>(n_max) + 1);
  R w(1);
  weight.push_back(w);
  for (int n = 0; n < n_max; ++n) {
    const R& t = o.points[static_cast<std::size_t>(n)];
    w *= (t * 2 >= R(1) ? t : 1 - t);
    weight.push_back(w);
  }
  R total(0);
  for (const R& x : weight) total += x;
  R tail = w * P.p / (1 - P.p);
  if (!(tail / total < R(1) / R(1000000000000ll)))
    throw std::invalid_argument("n_max leaves more than 1e-12 of stationary mass in the tail");
  std::vector<R> pi;
  pi.reserve(weight.size());
  for (const R& x : weight) pi.push_back(x / total);
  return pi;
}

}  // namespace asymgame
