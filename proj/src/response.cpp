#include "asymgame/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "asymgame/sigma_star.hpp"

namespace asymgame {

double spectral_norm(const mat2& M) {
  // Largest eigenvalue of M^T M via trace/determinant.
  const double t = M.a * M.a + M.b * M.b + M.c * M.c + M.d * M.d;
  const double det = M.a * M.d - M.b * M.c;
  const double disc = std::max(t * t - 4 * det * det, 0.0);
  return std::sqrt(0.5 * (t + std::sqrt(disc)));
}

response_matrices make_response_matrices(const game_param<double>& P) {
  response_matrices R;
  const double p = P.p, g = P.gamma;
  R.A0 = {g, -g, 1 - p, p};
  R.A1 = {p, 1 - p, -g, g};
  R.contraction = std::max(spectral_norm(R.A0), spectral_norm(R.A1));
  return R;
}

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

void require_contraction(const response_matrices& R, double p) {
  if (R.contraction >= 1.0)
    throw no_contraction_error("score matrices are not contracting at p = " + format_real(p));
}

// Sum of A_{s0} A_{s1} ... products applied to (1,1), following the side
// sequence of theta0, truncated when the remaining tail is below tol.
struct series_sum {
  vec2 sum{0, 0};
  int terms = 0;
  double tail = 0;
};

series_sum side_series(double theta0, const game_param<double>& P, const response_matrices& R,
                       double tol, int max_terms = 100000) {
  series_sum out;
  const double alpha = R.contraction;
  mat2 prod = mat2::identity();
  double t = theta0;
  const vec2 ones{1, 1};
  for (int n = 0; n < max_terms; ++n) {
    vec2 term = prod * ones;
    out.sum.x += term.x;
    out.sum.y += term.y;
    ++out.terms;
    out.tail = spectral_norm(prod) * alpha * kSqrt2 / (1 - alpha);
    if (out.tail < tol) return out;
    prod = prod * (side(t) == 1 ? R.A1 : R.A0);
    t = phi(t, P);
  }
  throw precision_error("side series did not reach tolerance");
}

}  // namespace

w_series compute_w(const game_param<double>& P, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  response_matrices R = make_response_matrices(P);
  require_contraction(R, P.p);
  series_sum s = side_series(P.p, P, R, tol);
  return {vec2{s.sum.x, s.sum.y}, s.terms, s.tail};
}

value_gap solve_vZ(const game_param<double>& P, double tol) {
  w_series ws = compute_w(P, tol);
  const double v = 1.0 / (P.p * ws.w.x + (1 - P.p) * ws.w.y);
  const double Z = (ws.w.x - ws.w.y) * v / 2;
  return {v, Z};
}

score_pair eval_GH(double theta, const game_param<double>& P, double v, double Z, double tol) {
  check_belief(theta);
  const double offset = 1 - P.gamma * Z;
  if (theta == 0.5) return {0.5 - v - P.gamma * Z, 0.5 - v - P.gamma * Z, 0};
  response_matrices R = make_response_matrices(P);
  require_contraction(R, P.p);
  series_sum s = side_series(theta, P, R, tol / std::max(v, 1e-300));
  return {-v * s.sum.x + offset, -v * s.sum.y + offset, v * s.tail};
}

// The optimality equations pin x on the upper side: playing T from
// (theta >= 1/2, s_low) has expected gain x(theta) and lands the belief on
// p, so x(theta) = G(theta) + v + gamma Z there; the lower side follows by
// the x(1-theta) = 1 - x(theta) symmetry.  (Cross-check: at p <= 2/3 this
// yields x(p) = (2p-1)/(4p-1), the two-state automaton mix.)
double eval_x(double theta, const game_param<double>& P, double v, double Z, double tol) {
  if (theta == 0.5) return 0.5;
  score_pair gh = eval_GH(theta, P, v, Z, tol);
  if (theta > 0.5) return gh.G + v + P.gamma * Z;
  return 1 - (gh.H + v + P.gamma * Z);
}

namespace {

// Evaluation grid: uniform on [1-p, p] plus both base orbits.
std::vector<double> evaluation_grid(const game_param<double>& P, int grid_points, int orbit_depth) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(grid_points + 2 * orbit_depth + 4));
  const double lo = 1 - P.p, hi = P.p;
  for (int i = 0; i < grid_points; ++i)
    grid.push_back(lo + (hi - lo) * i / (grid_points - 1.0));
  auto op = orbit_cache::get(P, P.p, orbit_depth);
  auto oq = orbit_cache::get(P, 1 - P.p, orbit_depth);
  grid.insert(grid.end(), op->points.begin(), op->points.end());
  grid.insert(grid.end(), oq->points.begin(), oq->points.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace

inequality_report verify_inequalities(const game_param<double>& P, double v, double Z,
                                      int grid_points, int orbit_depth) {
  if (grid_points < 2) throw std::invalid_argument("grid needs at least two points");
  inequality_report rep;
  rep.p = P.p;
  rep.v = v;
  rep.Z = Z;
  const double g = P.gamma;
  const double tol = 1e-12;
  const double slack = 1e-9;

  // Points on the orbit of p falling onto 1/2 make G two-valued there; the
  // checks then use one-sided evaluations.
  auto op = orbit_cache::get(P, P.p, orbit_depth);
  for (double t : op->points)
    if (std::abs(t - 0.5) < 1e-13) rep.half_preimage_flag = true;

  std::vector<double> grid = evaluation_grid(P, grid_points, orbit_depth);
  double lower_low = std::numeric_limits<double>::infinity();   // G - (gZ - v),  theta < 1/2
  double lower_high = std::numeric_limits<double>::infinity();  // G - (-gZ - v), theta > 1/2
  double upper_high = std::numeric_limits<double>::infinity();  // (1 - gZ - v) - G, theta > 1/2
  double prev_G = std::numeric_limits<double>::infinity();
  double worst_step = -std::numeric_limits<double>::infinity();
  for (double t : grid) {
    double t_eval = t;
    if (rep.half_preimage_flag && std::abs(t - 0.5) < 1e-13)
      t_eval = t < 0.5 ? t - 1e-9 : t + 1e-9;  // one-sided limit
    const double G = eval_GH(t_eval, P, v, Z, tol).G;
    if (t < 0.5) lower_low = std::min(lower_low, G - (g * Z - v));
    if (t > 0.5) {
      lower_high = std::min(lower_high, G - (-g * Z - v));
      upper_high = std::min(upper_high, (1 - g * Z - v) - G);
    }
    if (prev_G != std::numeric_limits<double>::infinity())
      worst_step = std::max(worst_step, G - prev_G);
    prev_G = G;
  }
  rep.worst_monotone_step = worst_step;
  rep.monotone = worst_step <= slack;
  rep.checks.push_back({"G(theta) >= gamma*Z - v for theta < 1/2", lower_low, lower_low >= 0});
  rep.checks.push_back({"G(theta) >= -gamma*Z - v for theta > 1/2", lower_high, lower_high >= 0});
  rep.checks.push_back({"G(theta) <= 1 - gamma*Z - v for theta > 1/2", upper_high, upper_high >= 0});
  rep.checks.push_back({"4*gamma*Z <= 1", 1 - 4 * g * Z, 1 - 4 * g * Z >= 0});
  rep.checks.push_back({"Z > 0", Z, Z > 0});
  rep.passed = rep.monotone;
  for (const auto& c : rep.checks) rep.passed = rep.passed && c.pass;
  return rep;
}

response_solution solve_response(const game_param<double>& P, double tol, int grid_points,
                                 int orbit_depth) {
  response_solution sol;
  sol.p = P.p;
  response_matrices R = make_response_matrices(P);
  sol.contraction = R.contraction;
  require_contraction(R, P.p);
  w_series ws = compute_w(P, tol);
  sol.w = ws.w;
  sol.v = 1.0 / (P.p * ws.w.x + (1 - P.p) * ws.w.y);
  sol.Z = (ws.w.x - ws.w.y) * sol.v / 2;
  auto op = orbit_cache::get(P, P.p, orbit_depth);
  auto oq = orbit_cache::get(P, 1 - P.p, orbit_depth);
  for (const auto* o : {op.get(), oq.get()})
    for (double t : o->points)
      sol.x_table.emplace_back(t, eval_x(t, P, sol.v, sol.Z, tol));
  std::sort(sol.x_table.begin(), sol.x_table.end());
  sol.x_table.erase(std::unique(sol.x_table.begin(), sol.x_table.end(),
                                [](const auto& a, const auto& b) { return a.first == b.first; }),
                    sol.x_table.end());
  sol.report = verify_inequalities(P, sol.v, sol.Z, grid_points, orbit_depth);
  return sol;
}

grid_fixed_point fixed_point_L(const game_param<double>& P, double v, double Z, double tol,
                               int grid_points, int max_iterations) {
  if (grid_points < 2) throw std::invalid_argument("grid needs at least two points");
  response_matrices R = make_response_matrices(P);
  require_contraction(R, P.p);
  const double offset = 1 - P.gamma * Z;

  grid_fixed_point fp;
  fp.theta.resize(static_cast<std::size_t>(grid_points));
  const double lo = 1 - P.p, hi = P.p;
  for (int i = 0; i < grid_points; ++i)
    fp.theta[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (grid_points - 1.0);

  // Side sequences are shared by all iterates; extend them lazily.
  std::vector<std::vector<int>> sides(fp.theta.size());
  auto extend_sides = [&](std::size_t i, int depth) {
    auto& s = sides[i];
    if (static_cast<int>(s.size()) >= depth) return;
    double t = fp.theta[i];
    for (int k = 0; k < static_cast<int>(s.size()); ++k) t = phi(t, P);
    while (static_cast<int>(s.size()) < depth) {
      s.push_back(side(t));
      t = phi(t, P);
    }
  };

  // L^n applied to the zero function, evaluated by folding the first n
  // affine maps along the orbit of each grid point.
  auto iterate_at = [&](std::size_t i, int depth) {
    extend_sides(i, depth);
    vec2 X{0, 0};
    for (int k = depth - 1; k >= 0; --k) {
      const int s = sides[i][static_cast<std::size_t>(k)];
      const mat2& A = s == 1 ? R.A1 : R.A0;
      const vec2& b = s == 1 ? R.b1 : R.b0;
      X = A * X;
      X.x += -v + offset * b.x;
      X.y += -v + offset * b.y;
    }
    return X;
  };

  std::vector<vec2> prev(fp.theta.size(), vec2{0, 0});
  for (int n = 1; n <= max_iterations; ++n) {
    double delta = 0;
    std::vector<vec2> cur(fp.theta.size());
    for (std::size_t i = 0; i < fp.theta.size(); ++i) {
      cur[i] = iterate_at(i, n);
      delta = std::max(delta, std::hypot(cur[i].x - prev[i].x, cur[i].y - prev[i].y));
    }
    prev = std::move(cur);
    fp.iterations = n;
    fp.last_delta = delta;
    if (delta < tol) {
      fp.values = std::move(prev);
      return fp;
    }
  }
  throw precision_error("fixed-point iteration did not converge within the iteration cap");
}

bool conjugation_check(const game_param<double>& P, double tol) {
  response_matrices R = make_response_matrices(P);
  const mat2 L{1, 0, 1, 1}, Rt{1, 0, -1, 1};
  for (int s : {0, 1}) {
    const mat2 A = s == 1 ? R.A1 : R.A0;
    const mat2 got = L * A.transpose() * Rt;
    auto U = u_matrix(s, P);
    const double err = std::max({std::abs(got.a - U[0][0]), std::abs(got.b - U[0][1]),
                                 std::abs(got.c - U[1][0]), std::abs(got.d - U[1][1])});
    if (err > tol) return false;
  }
  return true;
}

bool conjugation_check_exact(const game_param<rational>& P) {
  const rational p = P.p, g = P.gamma;
  using rm = std::array<std::array<rational, 2>, 2>;
  auto mul = [](const rm& A, const rm& B) {
    return rm{{{A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]},
               {A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]}}};
  };
  const rm L{{{rational(1), rational(0)}, {rational(1), rational(1)}}};
  const rm Rt{{{rational(1), rational(0)}, {rational(-1), rational(1)}}};
  const rm A0T{{{g, 1 - p}, {-g, p}}};
  const rm A1T{{{p, -g}, {1 - p, g}}};
  for (int s : {0, 1}) {
    const rm got = mul(mul(L, s == 1 ? A1T : A0T), Rt);
    auto U = u_matrix(s, P);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (got[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] !=
            U[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
          return false;
  }
  return true;
}

nlohmann::json to_json(const inequality_report& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"margin", c.margin}, {"pass", c.pass}});
  return {{"p", r.p},
          {"v", r.v},
          {"Z", r.Z},
          {"checks", checks},
          {"monotone", r.monotone},
          {"worst_monotone_step", r.worst_monotone_step},
          {"half_preimage_flag", r.half_preimage_flag},
          {"passed", r.passed}};
}

nlohmann::json to_json(const response_solution& s) {
  nlohmann::json xt = nlohmann::json::array();
  for (const auto& [t, x] : s.x_table) xt.push_back({{"theta", t}, {"x", x}});
  return {{"p", s.p},
          {"v", s.v},
          {"Z", s.Z},
          {"w", {s.w.x, s.w.y}},
          {"contraction", s.contraction},
          {"x_table", xt},
          {"inequality_report", to_json(s.report)}};
}

}  // namespace asymgame
