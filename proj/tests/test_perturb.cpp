#include <doctest.h>

#include <cmath>

#include "asymgame/perturb.hpp"
#include "asymgame/sigma_star.hpp"

using namespace asymgame;

TEST_SUITE_BEGIN("perturb");

TEST_CASE("perturbed beliefs at the unperturbed limit") {
  game_param<double> P(0.75);
  perturb_config<double> cfg{7, 0.0, 50};
  auto b = perturbed_beliefs(P, cfg);
  CHECK(b.theta_tilde == doctest::Approx(1085.0 / 2244).epsilon(1e-12));
  CHECK(b.theta_tilde_eps == doctest::Approx(phi(b.theta_tilde, P)).epsilon(1e-12));
  CHECK(b.p_eps == doctest::Approx(P.p).epsilon(1e-15));
}

TEST_CASE("invalid rung is rejected") {
  game_param<double> P(0.75);
  // phi^2(1-p) is above 1/2 at p = 3/4 (sides start 0,0,1)
  perturb_config<double> cfg{2, 0.01, 50};
  CHECK_THROWS_AS(perturbed_beliefs(P, cfg), std::invalid_argument);
  perturb_config<double> bad_eps{7, 1.0, 50};
  CHECK_THROWS_AS(perturbed_beliefs(P, bad_eps), std::invalid_argument);
}

TEST_CASE("deep rung at p = 0.73275300915") {
  game_param<bigfloat> P(from_rational<bigfloat>(parse_probability("0.73275300915")));
  perturb_config<bigfloat> cfg{57, bigfloat("0.00015"), 200};
  auto b = perturbed_beliefs(P, cfg);
  CHECK(to_double(b.theta_tilde) == doctest::Approx(0.49999805).epsilon(1e-7));
}

TEST_CASE("ladder weights at p = 3/4 reproduce the worked case") {
  game_param<double> P(0.75);
  perturb_config<double> cfg{7, 0.01, 50};
  auto rep = lemma_margin(P, cfg);

  CHECK(to_double(rep.w_base) == doctest::Approx(2.8354).epsilon(5e-5));
  CHECK(to_double(rep.w_phi_tilde) == doctest::Approx(2.7432).epsilon(5e-5));
  CHECK(to_double(rep.w_tilde_eps) == doctest::Approx(2.7305).epsilon(5e-5));
  CHECK(to_double(rep.w_p_eps) == doctest::Approx(2.8203).epsilon(5e-5));
  CHECK(rep.tail_budget < 1e-9);

  CHECK(rep.lemma_lhs == doctest::Approx(0.0065).epsilon(0.02));
  CHECK(rep.lemma_rhs == doctest::Approx(0.0064).epsilon(0.02));
  CHECK(rep.margin > 1e-5);
  CHECK(rep.verdict == 1);
}

TEST_CASE("weight sums: symmetry, ladder identity, tail") {
  game_param<double> P(0.75);
  for (double t : {0.25, 0.4, 0.483, 0.75}) {
    auto a = ladder_weight(t, P, 60);
    auto b = ladder_weight(1 - t, P, 60);
    CHECK(a.w == doctest::Approx(b.w).epsilon(1e-12));
  }
  auto wp = ladder_weight(P.p, P, 50);
  CHECK(wp.tail < 1e-10);
  CHECK(wp.w * value_ladder(P, 1e-13).v == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("margin vanishes at epsilon = 0") {
  game_param<double> P(0.75);
  perturb_config<double> cfg{7, 0.0, 60};
  auto rep = lemma_margin(P, cfg);
  CHECK(rep.lemma_lhs == 0.0);
  CHECK(std::abs(rep.lemma_rhs) < 1e-15);
  CHECK(std::abs(rep.margin) < 1e-15);
  CHECK(rep.verdict == 0);  // zero margin sits inside the tail budget
}

TEST_CASE("perturbed value degenerates to the ladder value at epsilon = 0") {
  for (const char* ps : {"0.75", "0.7321"}) {
    game_param<double> P(to_double(parse_probability(ps)));
    // pick the first rung below 1/2 deeper than 4
    int k0 = -1;
    auto o = orbit(1 - P.p, 30, P);
    for (int k = 5; k < 30; ++k)
      if (o.sides[static_cast<std::size_t>(k)] == 0) {
        k0 = k;
        break;
      }
    REQUIRE(k0 > 0);
    perturb_config<double> cfg{k0, 0.0, 80};
    const double v0 = perturbed_value(P, cfg);
    const double vl = value_ladder(P, 1e-14).v;
    CHECK(v0 == doctest::Approx(vl).epsilon(1e-9));
  }
}

TEST_CASE("worked perturbation at p = 3/4") {
  game_param<double> P(0.75);
  perturb_config<double> cfg{7, 0.01, 60};
  auto rep = lemma_margin(P, cfg);
  CHECK(rep.v_star == doctest::Approx(0.35267910).epsilon(1e-7));
  CHECK(rep.v_perturbed == doctest::Approx(0.35267964).epsilon(1e-7));
  const double diff = rep.v_perturbed - rep.v_star;
  CHECK(diff == doctest::Approx(5e-7).epsilon(0.2));
  CHECK(rep.verdict == 1);
}

TEST_CASE("worked perturbation at p = 0.73275300915 (256-bit)") {
  set_bigfloat_bits(256);
  game_param<bigfloat> P(from_rational<bigfloat>(parse_probability("0.73275300915")));
  perturb_config<bigfloat> cfg{57, bigfloat("0.00015"), 200};
  auto rep = lemma_margin(P, cfg);

  CHECK(to_double(rep.w_base) == doctest::Approx(2.76648483).epsilon(1e-7));
  CHECK(to_double(rep.w_phi_tilde) == doctest::Approx(2.766474044).epsilon(1e-7));
  CHECK(to_double(rep.w_tilde_eps) == doctest::Approx(2.766266543).epsilon(1e-7));
  CHECK(to_double(rep.w_p_eps) == doctest::Approx(2.766277325).epsilon(1e-7));

  CHECK(to_double(rep.lemma_lhs) == doctest::Approx(1.0375e-4).epsilon(1e-3));
  CHECK(to_double(rep.lemma_rhs) == doctest::Approx(1.0373e-4).epsilon(1e-3));
  CHECK(to_double(rep.margin) == doctest::Approx(1.72e-8).epsilon(0.1));
  CHECK(rep.verdict == 1);

  // The analytic identity ties the value difference to the lemma margin
  // through the rung-k0 climb product.
  bigfloat Q(1);
  auto o = orbit(1 - P.p, 56, P);
  for (const bigfloat& t : o.points) Q *= (t * 2 >= 1 ? t : 1 - t);
  const bigfloat expected_diff = Q * rep.margin * rep.v_star * rep.v_perturbed;
  const bigfloat got_diff = rep.v_perturbed - rep.v_star;
  CHECK(to_double(got_diff) == doctest::Approx(to_double(expected_diff)).epsilon(1e-6));
  CHECK(got_diff > 0);  // the perturbation does improve the value
  MESSAGE("256-bit value difference: ", format_real(got_diff));
}

TEST_CASE("invariant measure balance residual is within truncation error") {
  game_param<double> P(0.75);
  perturb_config<double> cfg{7, 0.01, 60};
  CHECK(std::abs(balance_residual(P, cfg)) < 1e-10);
  perturb_config<double> cfg0{7, 0.0, 60};
  CHECK(std::abs(balance_residual(P, cfg0)) < 1e-10);
}

TEST_CASE("margin curve") {
  game_param<double> P(0.75);
  std::vector<double> grid{0.0, 0.005, 0.01, 0.02, 0.3};
  auto curve = margin_curve(P, 7, grid);
  REQUIRE(curve.size() == grid.size());
  CHECK(std::abs(curve[0].margin) < 1e-14);
  CHECK(curve[2].margin > 1e-5);     // positive near the worked epsilon
  MESSAGE("margin at eps=0.3: ", curve[4].margin, " (expected to turn negative eventually)");
  CHECK_THROWS_AS(margin_curve(P, 7, {}), std::invalid_argument);
}

TEST_CASE("report serialisation round-trips") {
  game_param<double> P(0.75);
  perturb_config<double> cfg{7, 0.01, 50};
  auto rep = lemma_margin(P, cfg);
  auto j = to_json(rep);
  CHECK(j["verdict"] == "improves");
  CHECK(nlohmann::json::parse(j.dump()) == j);

  game_param<bigfloat> Pb(from_rational<bigfloat>(parse_probability("0.75")));
  perturb_config<bigfloat> cfgb{7, bigfloat("0.01"), 50};
  auto jb = to_json(lemma_margin(Pb, cfgb));
  CHECK(jb["margin"].is_string());
  CHECK(nlohmann::json::parse(jb.dump()) == jb);
}

TEST_SUITE_END();
