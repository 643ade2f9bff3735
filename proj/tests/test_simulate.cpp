#include <doctest.h>

#include <cmath>
#include <set>

#include "asymgame/simulate.hpp"

using namespace asymgame;

TEST_SUITE_BEGIN("simulate");

TEST_CASE("counter-based generator: determinism, streams, range") {
  rng a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  std::set<double> seen;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());  // same key, same stream
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    seen.insert(x);
  }
  CHECK(seen.size() == 1000);
  // distinct streams and seeds decorrelate immediately
  int equal_c = 0, equal_d = 0;
  rng a2(42, 0);
  for (int i = 0; i < 1000; ++i) {
    const double x = a2.uniform();
    if (x == c.uniform()) ++equal_c;
    if (x == d.uniform()) ++equal_d;
  }
  CHECK(equal_c == 0);
  CHECK(equal_d == 0);
}

TEST_CASE("uniform draws are roughly uniform") {
  rng r(7, 99);
  const int n = 200000;
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    const double x = r.uniform();
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean - 0.5) < 0.005);
  CHECK(std::abs(var - 1.0 / 12) < 0.005);
}

TEST_CASE("identical seed and config give bit-identical traces") {
  game_param<double> P(0.7);
  auto s2 = make_tau_star(P);
  auto p1a = make_sigma_star_player(P);
  auto p1b = make_sigma_star_player(P);
  auto ta = play(P, *p1a, s2, 50000, 9001, 3);
  auto tb = play(P, *p1b, s2, 50000, 9001, 3);
  CHECK(ta.total_gain == tb.total_gain);
  CHECK(ta.mean == tb.mean);
  CHECK(ta.ci95 == tb.ci95);
}

TEST_CASE("mean gain bounds and CI shrinkage") {
  game_param<double> P(0.7);
  auto s2 = make_uniform_automaton();
  auto p1 = make_sigma_star_player(P);
  auto t1 = play(P, *p1, s2, 20000, 5, 0);
  CHECK(t1.mean >= 0.0);
  CHECK(t1.mean <= 1.0);
  auto p1b = make_sigma_star_player(P);
  auto t2 = play(P, *p1b, s2, 2000000, 5, 0);
  CHECK(t2.ci95 < t1.ci95);
  CHECK(t2.ci95 < 3.0 * t1.ci95 * std::sqrt(20000.0 / 2000000.0));
}

TEST_CASE("p = 1/2: the ladder strategy wins half the time") {
  game_param<double> P(0.5);
  for (const char* s2name : {"always-L", "uniform"}) {
    auto s2 = parse_player2(s2name, P);
    auto res = replicated_play(P, [&] { return make_sigma_star_player(P); }, s2, 400000, 8, 11);
    CHECK(std::abs(res.mean - 0.5) < 3 * res.std_error + 1e-4);
  }
}

TEST_CASE("p = 1: uniform play against any opponent wins a quarter") {
  game_param<double> P(1.0);
  for (const char* s2name : {"always-L", "counter"}) {
    auto s2 = parse_player2(s2name, P);
    auto res = replicated_play(P, [] { return make_uniform_player(); }, s2, 400000, 8, 13);
    CHECK(std::abs(res.mean - 0.25) < 3 * res.std_error + 1e-4);
  }
}

TEST_CASE("tau-star automaton probabilities") {
  game_param<double> half(0.5);
  auto m0 = make_tau_star(half);
  CHECK(m0.states[0].prob_L == 0.0);
  CHECK(m0.states[1].prob_L == 1.0);

  game_param<double> tt(2.0 / 3);
  auto m1 = make_tau_star(tt);
  CHECK(m1.states[0].prob_L == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(!m1.warning);
  CHECK(make_tau_star(game_param<double>(0.75)).warning);
}

TEST_CASE("sigma-star against tau-star reproduces p/(4p-1) at p = 0.6") {
  game_param<double> P(0.6);
  auto s2 = make_tau_star(P);
  auto res = replicated_play(P, [&] { return make_sigma_star_player(P); }, s2, 2000000, 8, 17);
  CHECK(std::abs(res.mean - 0.6 / 1.4) < 3 * res.std_error + 1e-4);
}

TEST_CASE("x-automaton states and symmetry") {
  game_param<double> P(0.7);
  auto sol = solve_response(P, 1e-11, 500, 40);
  auto m = make_x_automaton(P, sol, 40);
  REQUIRE(m.states.size() == 82);
  // the two base states carry symmetric beliefs and complementary mixes
  const auto& base_p = m.states[0];
  const auto& base_q = m.states[41];
  CHECK(base_p.belief == doctest::Approx(1 - base_q.belief).epsilon(1e-12));
  CHECK(base_p.prob_L + base_q.prob_L == doctest::Approx(1.0).epsilon(1e-8));
  // upper-side states fall to the p base on T, lower-side states to 1-p on B
  for (const auto& st : m.states) {
    if (st.belief >= 0.5)
      CHECK(st.next_T == 0);
    else
      CHECK(st.next_B == 41);
  }
}

TEST_CASE("sigma-star against the x-automaton reproduces the analytic value") {
  game_param<double> P(0.7);
  auto sol = solve_response(P, 1e-11, 500, 40);
  auto s2 = make_x_automaton(P, sol, 40);
  auto res = replicated_play(P, [&] { return make_sigma_star_player(P); }, s2, 2000000, 8, 19);
  const double v = sol.v;
  CHECK(std::abs(res.mean - v) < 3 * res.std_error + 1e-4);
}

TEST_CASE("belief consistency: the Bayes update matches the internal state") {
  // Replay a recorded trace in exact arithmetic: the posterior-and-evolve
  // route must coincide with the map update at every step, exactly.
  game_param<double> P(0.75);
  auto s2 = make_uniform_automaton();
  auto p1 = make_sigma_star_player(P);
  std::vector<round_record> log;
  play(P, *p1, s2, 4000, 23, 0, &log);
  REQUIRE(log.size() == 4000);

  game_param<rational> Pr(rational(3) / 4);
  rational bayes = log[0].s == hidden_state::s_low ? Pr.p : 1 - Pr.p;
  rational mapped = bayes;
  double replayed = to_double(bayes);
  for (const auto& rec : log) {
    const rational pT_low = sigma_star_prob_T(hidden_state::s_low, bayes);
    const rational pT_high = sigma_star_prob_T(hidden_state::s_high, bayes);
    rational posterior;
    if (rec.a1 == action1::T) {
      const rational denom = bayes * pT_low + (1 - bayes) * pT_high;
      REQUIRE(denom > 0);
      posterior = bayes * pT_low / denom;
    } else {
      const rational denom = bayes * (1 - pT_low) + (1 - bayes) * (1 - pT_high);
      REQUIRE(denom > 0);
      posterior = bayes * (1 - pT_low) / denom;
    }
    bayes = Pr.p * posterior + (1 - Pr.p) * (1 - posterior);
    mapped = rec.a1 == action1::T ? f_T(mapped, Pr) : f_B(mapped, Pr);
    CHECK(bayes == mapped);  // exact equality of the two routes
    replayed = rec.a1 == action1::T ? f_T(replayed, P) : f_B(replayed, P);
    CHECK(std::abs(to_double(bayes) - replayed) < 1e-6);
  }
}

TEST_CASE("payoff independence for sigma-star") {
  game_param<double> P(0.7);
  auto rep = payoff_independence_test(
      P, [&] { return make_sigma_star_player(P); }, make_always(action2::L),
      make_always(action2::R), 300000, 10, 31);
  CHECK(rep.indistinguishable);
}

TEST_CASE("payoff independence for the perturbed strategy") {
  game_param<double> P(0.75);
  auto rep = payoff_independence_test(
      P, [&] { return make_perturbed_player(P, 7, 0.01); }, make_always(action2::L),
      make_uniform_automaton(), 300000, 10, 37);
  CHECK(rep.indistinguishable);
}

TEST_CASE("greedy play is distinguishable (negative control)") {
  game_param<double> P(0.7);
  auto rep = payoff_independence_test(P, [] { return make_greedy_player(); },
                                      make_always(action2::L), make_counter_automaton(), 200000,
                                      10, 41);
  CHECK(!rep.indistinguishable);
  CHECK(std::abs(rep.diff) > 0.01);
}

TEST_CASE("perturbed strategy at epsilon = 0 equals sigma-star") {
  game_param<double> P(0.75);
  // action probabilities coincide at the perturbed rungs
  perturb_config<double> cfg{7, 0.0, 10};
  auto b = perturbed_beliefs(P, cfg);
  const double th = b.theta_tilde;
  CHECK(1.0 - 0.0 == sigma_star_prob_T(hidden_state::s_low, th));
  CHECK((1 - 2 * th) / (1 - th) ==
        doctest::Approx(sigma_star_prob_T(hidden_state::s_high, th)).epsilon(1e-15));
  CHECK((1 - 0.0) * (1 - (1 - th)) / (1 - th) ==
        doctest::Approx(sigma_star_prob_T(hidden_state::s_low, 1 - th)).epsilon(1e-15));
  CHECK(0.0 == sigma_star_prob_T(hidden_state::s_high, 1 - th));

  // and whole traces agree
  auto s2 = make_tau_star(P);
  auto pa = make_sigma_star_player(P);
  auto pb = make_perturbed_player(P, 7, 0.0);
  auto ta = play(P, *pa, s2, 100000, 51, 0);
  auto tb = play(P, *pb, s2, 100000, 51, 0);
  CHECK(ta.total_gain == tb.total_gain);
}

TEST_CASE("one-step payoff at the perturbed rung is (1-eps) theta") {
  game_param<double> P(0.75);
  const double eps = 0.01;
  perturb_config<double> cfg{7, eps, 10};
  auto b = perturbed_beliefs(P, cfg);
  const double th = b.theta_tilde;
  // L pays on (s_low, T): belief * P(T | s_low)
  const double gain_L = th * (1 - eps);
  // R pays on (s_high, B): (1 - belief) * P(B | s_high)
  const double gain_R = (1 - th) * (1 - (1 - (2 - eps) * th) / (1 - th));
  CHECK(gain_L == doctest::Approx((1 - eps) * th).epsilon(1e-12));
  CHECK(gain_R == doctest::Approx((1 - eps) * th).epsilon(1e-12));
}

TEST_CASE("csv rows are stable and well-formed") {
  game_trace t;
  t.seed = 17;
  t.rounds = 1000;
  t.total_gain = 412;
  t.mean = 0.412;
  t.ci95 = 0.01;
  const std::string row = trace_csv_row(t, "sigma-star", "tau-star", 0.7);
  CHECK(row == trace_csv_row(t, "sigma-star", "tau-star", 0.7));
  CHECK(trace_csv_header() == "seed,rounds,mean,ci95,strat1,strat2,p");
  CHECK(row.find("sigma-star") != std::string::npos);
}

TEST_SUITE_END();
