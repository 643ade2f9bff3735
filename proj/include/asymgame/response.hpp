#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "asymgame/belief.hpp"

namespace asymgame {

struct vec2 {
  double x = 0, y = 0;
};

struct mat2 {
  double a = 0, b = 0, c = 0, d = 0;  // row-major [[a,b],[c,d]]

  static mat2 identity() { return {1, 0, 0, 1}; }
  mat2 operator*(const mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  vec2 operator*(const vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  mat2 transpose() const { return {a, c, b, d}; }
};

// Largest singular value.
double spectral_norm(const mat2& M);

// The affine pair driving the score recursion, one matrix per side of 1/2,
// with offsets b0, b1 sharing the fixed point (1,1).
struct response_matrices {
  mat2 A0, A1;
  vec2 b0{1, 0}, b1{0, 1};
  double contraction = 0;  // max of the two spectral norms
};
response_matrices make_response_matrices(const game_param<double>& P);

struct w_series {
  vec2 w;
  int terms = 0;
  double tail = 0;
};
// w = (I + A_{e0} + A_{e0}A_{e1} + ...)(1,1)^T along the side sequence of p.
w_series compute_w(const game_param<double>& P, double tol);

struct value_gap {
  double v = 0;
  double Z = 0;
};
// Solves the pair (2p-2)Z + v w1 = 1, 2pZ + v w2 = 1.
value_gap solve_vZ(const game_param<double>& P, double tol);

struct score_pair {
  double G = 0, H = 0;
  double tail = 0;
};
// Relative scores at belief theta via the truncated matrix series; the
// point theta = 1/2 is the common value 1/2 - v - gamma Z.
score_pair eval_GH(double theta, const game_param<double>& P, double v, double Z, double tol);

// Player 2's probability of playing L at belief theta.
double eval_x(double theta, const game_param<double>& P, double v, double Z, double tol);

struct check_entry {
  std::string name;
  double margin = 0;  // >= 0 means satisfied
  bool pass = false;
};

struct inequality_report {
  double p = 0, v = 0, Z = 0;
  std::vector<check_entry> checks;
  bool monotone = false;
  double worst_monotone_step = 0;  // most positive increase of G along the grid
  bool half_preimage_flag = false;
  bool passed = false;
};

// Evaluates G on the orbit points of p and 1-p plus a uniform grid and
// reports the margin of every constraint together with a monotonicity
// check (slack 1e-9).
inequality_report verify_inequalities(const game_param<double>& P, double v, double Z,
                                      int grid_points = 2000, int orbit_depth = 60);

struct response_solution {
  double p = 0;
  double v = 0, Z = 0;
  vec2 w;
  double contraction = 0;
  std::vector<std::pair<double, double>> x_table;  // orbit belief -> x
  inequality_report report;
};
response_solution solve_response(const game_param<double>& P, double tol = 1e-11,
                                 int grid_points = 2000, int orbit_depth = 60);

struct grid_fixed_point {
  std::vector<double> theta;
  std::vector<vec2> values;
  int iterations = 0;
  double last_delta = 0;
};
// Iterates the affine contraction from the zero function on a grid until
// successive iterates differ by less than tol in sup norm.
grid_fixed_point fixed_point_L(const game_param<double>& P, double v, double Z, double tol,
                               int grid_points = 512, int max_iterations = 4000);

// Conjugation between the score recursion matrices and the companion
// matrices of the fraction recursion.
bool conjugation_check(const game_param<double>& P, double tol = 1e-14);
bool conjugation_check_exact(const game_param<rational>& P);

nlohmann::json to_json(const inequality_report& r);
nlohmann::json to_json(const response_solution& s);

}  // namespace asymgame
