#include "asymgame/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace asymgame {

std::array<std::uint32_t, 4> philox4x32::block(std::array<std::uint32_t, 4> c,
                                               std::array<std::uint32_t, 2> k) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * c[2];
    c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    k[0] += W0;
    k[1] += W1;
  }
  return c;
}

void rng::refill() {
  buf_ = philox4x32::block({static_cast<std::uint32_t>(counter_),
                            static_cast<std::uint32_t>(counter_ >> 32),
                            static_cast<std::uint32_t>(stream_),
                            static_cast<std::uint32_t>(stream_ >> 32)},
                           key_);
  ++counter_;
  have_ = 4;
}

namespace {

class sigma_star_player final : public player1 {
 public:
  explicit sigma_star_player(const game_param<double>& P) : P_(P) {}
  void reset(hidden_state s0) override { theta_ = s0 == hidden_state::s_low ? P_.p : 1 - P_.p; }
  action1 act(hidden_state s, rng& r) override {
    const double pT = sigma_star_prob_T(s, theta_);
    const action1 a = r.uniform() < pT ? action1::T : action1::B;
    theta_ = a == action1::T ? f_T(theta_, P_) : f_B(theta_, P_);
    return a;
  }
  double belief() const override { return theta_; }
  std::string name() const override { return "sigma-star"; }

 private:
  game_param<double> P_;
  double theta_ = 0.5;
};

class perturbed_player final : public player1 {
 public:
  perturbed_player(const game_param<double>& P, int k0, double epsilon)
      : P_(P), k0_(k0), eps_(epsilon) {
    perturb_config<double> cfg{k0, epsilon, 1};
    auto b = perturbed_beliefs(P, cfg);
    theta_tilde_ = b.theta_tilde;
    theta_tilde_eps_ = b.theta_tilde_eps;
    p_eps_ = b.p_eps;
  }
  void reset(hidden_state s0) override {
    theta_ = s0 == hidden_state::s_low ? P_.p : 1 - P_.p;
    rung_ = 0;
    on_main_ = true;
  }
  action1 act(hidden_state s, rng& r) override {
    // The perturbation hits exactly the rung-k0 beliefs of the main ladder
    // (rung identity, not floating comparison).
    const bool perturbed = on_main_ && rung_ == k0_;
    double pT;
    if (!perturbed) {
      pT = sigma_star_prob_T(s, theta_);
    } else if (theta_ < 0.5) {
      pT = s == hidden_state::s_low ? 1 - eps_ : (1 - (2 - eps_) * theta_) / (1 - theta_);
    } else {
      pT = s == hidden_state::s_low ? (1 - eps_) * (1 - theta_) / theta_ : eps_;
    }
    const action1 a = r.uniform() < pT ? action1::T : action1::B;
    if (perturbed) {
      if (theta_ < 0.5)
        theta_ = a == action1::T ? theta_tilde_eps_ : 1 - p_eps_;
      else
        theta_ = a == action1::T ? p_eps_ : 1 - theta_tilde_eps_;
      on_main_ = false;
      ++rung_;
      return a;
    }
    if (theta_ >= 0.5) {
      if (a == action1::T) {
        theta_ = P_.p;  // fall to the base
        rung_ = 0;
        on_main_ = true;
      } else {
        theta_ = f_B(theta_, P_);
        ++rung_;
      }
    } else {
      if (a == action1::B) {
        theta_ = 1 - P_.p;
        rung_ = 0;
        on_main_ = true;
      } else {
        theta_ = f_T(theta_, P_);
        ++rung_;
      }
    }
    return a;
  }
  double belief() const override { return theta_; }
  std::string name() const override {
    return "perturbed:" + std::to_string(k0_) + ":" + format_real(eps_);
  }

 private:
  game_param<double> P_;
  int k0_;
  double eps_;
  double theta_tilde_ = 0, theta_tilde_eps_ = 0, p_eps_ = 0;
  double theta_ = 0.5;
  int rung_ = 0;
  bool on_main_ = true;
};

class uniform_player final : public player1 {
 public:
  void reset(hidden_state) override {}
  action1 act(hidden_state, rng& r) override {
    return r.uniform() < 0.5 ? action1::T : action1::B;
  }
  std::string name() const override { return "uniform"; }
};

class greedy_player final : public player1 {
 public:
  void reset(hidden_state) override {}
  action1 act(hidden_state s, rng&) override {
    return s == hidden_state::s_low ? action1::T : action1::B;
  }
  std::string name() const override { return "greedy"; }
};

}  // namespace

std::unique_ptr<player1> make_sigma_star_player(const game_param<double>& P) {
  return std::make_unique<sigma_star_player>(P);
}
std::unique_ptr<player1> make_perturbed_player(const game_param<double>& P, int k0,
                                               double epsilon) {
  return std::make_unique<perturbed_player>(P, k0, epsilon);
}
std::unique_ptr<player1> make_uniform_player() { return std::make_unique<uniform_player>(); }
std::unique_ptr<player1> make_greedy_player() { return std::make_unique<greedy_player>(); }

player1_factory parse_player1(const std::string& text, const game_param<double>& P) {
  if (text == "sigma-star") return [P] { return make_sigma_star_player(P); };
  if (text == "uniform") return [] { return make_uniform_player(); };
  if (text == "greedy") return [] { return make_greedy_player(); };
  if (text.rfind("perturbed:", 0) == 0) {
    const auto rest = text.substr(10);
    const auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("expected perturbed:<k0>:<epsilon>");
    const int k0 = std::stoi(rest.substr(0, colon));
    const double eps = std::stod(rest.substr(colon + 1));
    return [P, k0, eps] { return make_perturbed_player(P, k0, eps); };
  }
  throw std::invalid_argument("unknown player-1 strategy '" + text + "'");
}

player2_automaton make_always(action2 a) {
  player2_automaton m;
  m.name = a == action2::L ? "always-L" : "always-R";
  m.states.push_back({a == action2::L ? 1.0 : 0.0, 0, 0, 0.5});
  return m;
}

player2_automaton make_uniform_automaton() {
  player2_automaton m;
  m.name = "uniform";
  m.states.push_back({0.5, 0, 0, 0.5});
  return m;
}

player2_automaton make_counter_automaton() {
  player2_automaton m;
  m.name = "counter";
  m.states.push_back({0.0, 0, 1, 0.75});  // after T: the low state is likely, avoid L
  m.states.push_back({1.0, 0, 1, 0.25});  // after B
  return m;
}

player2_automaton make_tau_star(const game_param<double>& P) {
  player2_automaton m;
  m.name = "tau-star";
  m.warning = P.p > 2.0 / 3 + 1e-12;  // outside its optimality range, still playable
  const double denom = 4 * P.p - 1;
  m.states.push_back({(2 * P.p - 1) / denom, 0, 1, P.p});
  m.states.push_back({2 * P.p / denom, 0, 1, 1 - P.p});
  return m;
}

player2_automaton make_x_automaton(const game_param<double>& P, const response_solution& sol,
                                   int depth) {
  if (depth < 1) throw std::invalid_argument("x automaton needs depth >= 1");
  player2_automaton m;
  m.name = "x-automaton";
  m.warning = !sol.report.passed;
  m.approximate_tail = true;
  auto op = orbit_cache::get(P, P.p, depth);
  auto oq = orbit_cache::get(P, 1 - P.p, depth);
  const int n = depth + 1;
  auto state_index = [&](int chain, int rung) { return chain * n + std::min(rung, depth); };
  const double tol = 1e-11;
  for (int chain = 0; chain < 2; ++chain) {
    const auto& pts = chain == 0 ? op->points : oq->points;
    for (int k = 0; k <= depth; ++k) {
      const double theta = pts[static_cast<std::size_t>(k)];
      p2_state st;
      st.belief = theta;
      st.prob_L = eval_x(theta, P, sol.v, sol.Z, tol);
      st.prob_L = std::clamp(st.prob_L, 0.0, 1.0);
      if (theta >= 0.5) {
        st.next_T = state_index(0, 0);          // fall to the p base
        st.next_B = state_index(chain, k + 1);  // climb
      } else {
        st.next_T = state_index(chain, k + 1);
        st.next_B = state_index(1, 0);  // fall to the 1-p base
      }
      m.states.push_back(st);
    }
  }
  m.start = 0;
  return m;
}

player2_automaton parse_player2(const std::string& text, const game_param<double>& P, int depth) {
  if (text == "always-L") return make_always(action2::L);
  if (text == "always-R") return make_always(action2::R);
  if (text == "uniform") return make_uniform_automaton();
  if (text == "counter") return make_counter_automaton();
  if (text == "tau-star") return make_tau_star(P);
  if (text == "x-automaton") {
    response_solution sol = solve_response(P, 1e-11, 500, depth);
    return make_x_automaton(P, sol, depth);
  }
  throw std::invalid_argument("unknown player-2 strategy '" + text + "'");
}

game_trace play(const game_param<double>& P, player1& s1, const player2_automaton& s2,
                std::int64_t rounds, std::uint64_t seed, std::uint64_t replicate,
                std::vector<round_record>* log) {
  if (rounds < 1) throw std::invalid_argument("rounds must be at least 1");
  rng r_state(seed, 3 * replicate);
  rng r_p1(seed, 3 * replicate + 1);
  rng r_p2(seed, 3 * replicate + 2);

  hidden_state s = r_state.uniform() < 0.5 ? hidden_state::s_low : hidden_state::s_high;
  s1.reset(s);
  int cur = s2.start;

  const double flip = 1 - P.p;
  std::int64_t gain = 0;

  const int n_batches = rounds >= 1000 ? 100 : 1;
  const std::int64_t batch_len = (rounds + n_batches - 1) / n_batches;
  std::vector<double> batch_means;
  batch_means.reserve(static_cast<std::size_t>(n_batches));
  std::int64_t batch_gain = 0, batch_count = 0;

  for (std::int64_t i = 0; i < rounds; ++i) {
    const action1 a1 = s1.act(s, r_p1);
    const p2_state& st = s2.states[static_cast<std::size_t>(cur)];
    const action2 a2 = r_p2.uniform() < st.prob_L ? action2::L : action2::R;
    const int g = payoff(s, a1, a2);
    gain += g;
    batch_gain += g;
    if (++batch_count == batch_len) {
      batch_means.push_back(static_cast<double>(batch_gain) / static_cast<double>(batch_count));
      batch_gain = 0;
      batch_count = 0;
    }
    if (log) log->push_back({s, a1, a2});
    cur = a1 == action1::T ? st.next_T : st.next_B;
    if (r_state.uniform() < flip)
      s = s == hidden_state::s_low ? hidden_state::s_high : hidden_state::s_low;
  }
  if (batch_count > 0)
    batch_means.push_back(static_cast<double>(batch_gain) / static_cast<double>(batch_count));

  game_trace t;
  t.seed = seed;
  t.rounds = rounds;
  t.total_gain = gain;
  t.mean = static_cast<double>(gain) / static_cast<double>(rounds);
  if (batch_means.size() > 1) {
    double m = 0;
    for (double b : batch_means) m += b;
    m /= static_cast<double>(batch_means.size());
    double var = 0;
    for (double b : batch_means) var += (b - m) * (b - m);
    var /= static_cast<double>(batch_means.size() - 1);
    t.ci95 = 1.96 * std::sqrt(var / static_cast<double>(batch_means.size()));
  }
  return t;
}

namespace {

void run_over_replicates(int replicates, int jobs, const std::function<void(int)>& work) {
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min(jobs, replicates));
  if (jobs == 1) {
    for (int r = 0; r < replicates; ++r) work(r);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&, t] {
      for (int r = t; r < replicates; r += jobs) work(r);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

replicated_result replicated_play(const game_param<double>& P, const player1_factory& s1,
                                  const player2_automaton& s2, std::int64_t rounds,
                                  int replicates, std::uint64_t seed, int jobs) {
  if (replicates < 1) throw std::invalid_argument("need at least one replicate");
  replicated_result out;
  out.traces.resize(static_cast<std::size_t>(replicates));
  run_over_replicates(replicates, jobs, [&](int r) {
    auto p1 = s1();
    out.traces[static_cast<std::size_t>(r)] =
        play(P, *p1, s2, rounds, seed, static_cast<std::uint64_t>(r));
  });
  double m = 0;
  for (const auto& t : out.traces) m += t.mean;
  m /= static_cast<double>(replicates);
  out.mean = m;
  if (replicates > 1) {
    double var = 0;
    for (const auto& t : out.traces) var += (t.mean - m) * (t.mean - m);
    var /= static_cast<double>(replicates - 1);
    out.std_error = std::sqrt(var / static_cast<double>(replicates));
  } else {
    out.std_error = out.traces[0].ci95 / 1.96;
  }
  return out;
}

independence_report payoff_independence_test(const game_param<double>& P,
                                             const player1_factory& s1,
                                             const player2_automaton& s2a,
                                             const player2_automaton& s2b, std::int64_t rounds,
                                             int replicates, std::uint64_t seed, int jobs) {
  if (replicates < 2) throw std::invalid_argument("need at least two replicates");
  std::vector<double> da(static_cast<std::size_t>(replicates)),
      db(static_cast<std::size_t>(replicates));
  run_over_replicates(replicates, jobs, [&](int r) {
    auto p1a = s1();
    auto p1b = s1();
    // Identical (seed, replicate) streams: the state path and Player 1's
    // draws are shared, only Player 2's behaviour differs.
    da[static_cast<std::size_t>(r)] =
        play(P, *p1a, s2a, rounds, seed, static_cast<std::uint64_t>(r)).mean;
    db[static_cast<std::size_t>(r)] =
        play(P, *p1b, s2b, rounds, seed, static_cast<std::uint64_t>(r)).mean;
  });
  independence_report rep;
  rep.replicates = replicates;
  double mean_d = 0;
  for (int r = 0; r < replicates; ++r) {
    rep.mean_a += da[static_cast<std::size_t>(r)];
    rep.mean_b += db[static_cast<std::size_t>(r)];
    mean_d += da[static_cast<std::size_t>(r)] - db[static_cast<std::size_t>(r)];
  }
  rep.mean_a /= replicates;
  rep.mean_b /= replicates;
  mean_d /= replicates;
  double var = 0;
  for (int r = 0; r < replicates; ++r) {
    const double d = da[static_cast<std::size_t>(r)] - db[static_cast<std::size_t>(r)] - mean_d;
    var += d * d;
  }
  var /= replicates - 1;
  rep.diff = mean_d;
  rep.sigma = std::max(std::sqrt(var / replicates), 1e-12);
  rep.indistinguishable = std::abs(rep.diff) <= 3 * rep.sigma;
  return rep;
}

std::string trace_csv_header() { return "seed,rounds,mean,ci95,strat1,strat2,p"; }

std::string trace_csv_row(const game_trace& t, const std::string& strat1,
                          const std::string& strat2, double p) {
  return std::to_string(t.seed) + "," + std::to_string(t.rounds) + "," + format_real(t.mean) +
         "," + format_real(t.ci95) + "," + strat1 + "," + strat2 + "," + format_real(p);
}

}  // namespace asymgame
