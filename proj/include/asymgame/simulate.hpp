#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "asymgame/perturb.hpp"
#include "asymgame/response.hpp"
#include "asymgame/sigma_star.hpp"

namespace asymgame {

// Counter-based generator (Philox 4x32, 10 rounds): reproducible draws and
// cheap independent substreams keyed by (seed, stream).
struct philox4x32 {
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key);
};

class rng {
 public:
  rng(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  double uniform() {  // [0, 1)
    if (have_ < 2) refill();
    const std::uint64_t hi = buf_[static_cast<std::size_t>(4 - have_)];
    const std::uint64_t lo = buf_[static_cast<std::size_t>(5 - have_)];
    have_ -= 2;
    return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
  }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  void refill();
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int have_ = 0;
};

enum class action1 : std::uint8_t { T, B };
enum class action2 : std::uint8_t { L, R };

inline int payoff(hidden_state s, action1 a1, action2 a2) {
  if (s == hidden_state::s_low) return a1 == action1::T && a2 == action2::L ? 1 : 0;
  return a1 == action1::B && a2 == action2::R ? 1 : 0;
}

// Player 1 strategies own their internal belief bookkeeping.
class player1 {
 public:
  virtual ~player1() = default;
  virtual void reset(hidden_state s0) = 0;
  virtual action1 act(hidden_state s, rng& r) = 0;  // draws, then updates the belief
  virtual double belief() const { return -1; }
  virtual std::string name() const = 0;
};

std::unique_ptr<player1> make_sigma_star_player(const game_param<double>& P);
std::unique_ptr<player1> make_perturbed_player(const game_param<double>& P, int k0, double epsilon);
std::unique_ptr<player1> make_uniform_player();
std::unique_ptr<player1> make_greedy_player();

using player1_factory = std::function<std::unique_ptr<player1>()>;
player1_factory parse_player1(const std::string& text, const game_param<double>& P);

// Player 2 strategies are automata driven by Player 1's moves.
struct p2_state {
  double prob_L = 0.5;
  int next_T = 0;
  int next_B = 0;
  double belief = 0.5;
};

struct player2_automaton {
  std::string name;
  std::vector<p2_state> states;
  int start = 0;
  bool approximate_tail = false;  // deepest rung reused past the cut-off
  bool warning = false;           // built from a failed inequality report
};

player2_automaton make_always(action2 a);
player2_automaton make_uniform_automaton();
player2_automaton make_counter_automaton();
// Two states driven by Player 1's last move.
player2_automaton make_tau_star(const game_param<double>& P);
// States are the orbit beliefs down to `depth`; plays L with probability
// x(theta).
player2_automaton make_x_automaton(const game_param<double>& P, const response_solution& sol,
                                   int depth);
player2_automaton parse_player2(const std::string& text, const game_param<double>& P, int depth = 40);

struct game_trace {
  std::uint64_t seed = 0;
  std::int64_t rounds = 0;
  std::int64_t total_gain = 0;
  double mean = 0;
  double ci95 = 0;  // batch-means half width
};

struct round_record {
  hidden_state s;
  action1 a1;
  action2 a2;
};

game_trace play(const game_param<double>& P, player1& s1, const player2_automaton& s2,
                std::int64_t rounds, std::uint64_t seed, std::uint64_t replicate = 0,
                std::vector<round_record>* log = nullptr);

struct replicated_result {
  double mean = 0;
  double std_error = 0;  // across replicates
  std::vector<game_trace> traces;
};

replicated_result replicated_play(const game_param<double>& P, const player1_factory& s1,
                                  const player2_automaton& s2, std::int64_t rounds,
                                  int replicates, std::uint64_t seed, int jobs = 0);

struct independence_report {
  double mean_a = 0, mean_b = 0;
  double diff = 0;
  double sigma = 0;  // std error of the paired difference
  int replicates = 0;
  bool indistinguishable = false;
};

// Runs strat1 against both opponents with common random numbers for the
// state evolution and Player 1's draws.
independence_report payoff_independence_test(const game_param<double>& P,
                                             const player1_factory& s1,
                                             const player2_automaton& s2a,
                                             const player2_automaton& s2b, std::int64_t rounds,
                                             int replicates, std::uint64_t seed, int jobs = 0);

std::string trace_csv_header();
std::string trace_csv_row(const game_trace& t, const std::string& strat1,
                          const std::string& strat2, double p);

}  // namespace asymgame
