#include "asymgame/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

namespace asymgame {

namespace {

constexpr double kMergeTol = 1e-12;  // duplicate cut points
constexpr double kSnapTol = 4e-13;   // image endpoints onto cut points

template <class R>
R two_thirds() {
  return R(2) / 3;
}

// Inverse branches of the folded map restricted to [1/2, p].  The left
// branch hosts [1/2, 2/3), the right branch [2/3, p].
template <class R>
void preimages_one_step(const R& y, const game_param<R>& P, std::vector<R>& out) {
  out.clear();
  const R half = R(1) / 2;
  {
    R den = y - 2 + 3 * P.p;
    if (den > 0) {
      R t = P.gamma / den;
      if (t >= half && t < two_thirds<R>()) out.push_back(t);
    }
  }
  {
    R den = 3 * P.p - 1 - y;
    if (den > 0) {
      R t = P.gamma / den;
      if (t >= two_thirds<R>() && t <= P.p) out.push_back(t);
    }
  }
}

}  // namespace

template <class R>
std::vector<R> preimages(const R& y, int depth, const game_param<R>& P) {
  if (depth < 0) throw std::invalid_argument("preimage depth must be non-negative");
  if (!(y >= R(1) / 2 && y <= R(1))) throw std::domain_error("preimage target outside [1/2, 1]");
  std::vector<R> level{y};
  std::vector<R> next, step;
  for (int d = 0; d < depth; ++d) {
    next.clear();
    for (const R& s : level) {
      preimages_one_step(s, P, step);
      next.insert(next.end(), step.begin(), step.end());
    }
    level.swap(next);
  }
  if (depth > 0) {
    // Drop points whose forward orbit fails to return to y.
    std::vector<R> checked;
    checked.reserve(level.size());
    for (const R& t : level) {
      R s = t;
      for (int d = 0; d < depth; ++d) s = alpha(s, P);
      R err = s - y;
      if (err < 0) err = -err;
      if (err < R(1) / R(10000000000ll)) checked.push_back(t);
    }
    level.swap(checked);
  }
  std::sort(level.begin(), level.end());
  return level;
}

template std::vector<double> preimages<double>(const double&, int, const game_param<double>&);
template std::vector<bigfloat> preimages<bigfloat>(const bigfloat&, int, const game_param<bigfloat>&);

template <class R>
R Z_n(int n, const game_param<R>& P) {
  if (n < 1) throw std::invalid_argument("Z_n needs depth >= 1");
  if constexpr (std::is_same_v<R, double>) {
    if (n > 40)
      throw precision_error("preimage trees beyond depth 40 require bigfloat arithmetic");
  }
  // Depth-first backward walk from 1/2; each step multiplies the weight by
  // psi at the new preimage.
  struct node {
    R point;
    R weight;
    int remaining;
  };
  std::vector<node> stack{{R(1) / 2, R(1), n}};
  std::vector<R> step;
  R total(0);
  while (!stack.empty()) {
    node cur = std::move(stack.back());
    stack.pop_back();
    if (cur.remaining == 0) {
      total += cur.weight;
      continue;
    }
    preimages_one_step(cur.point, P, step);
    for (const R& t : step)
      stack.push_back({t, cur.weight * psi(t, P), cur.remaining - 1});
  }
  return total;
}

template double Z_n<double>(int, const game_param<double>&);
template bigfloat Z_n<bigfloat>(int, const game_param<bigfloat>&);

namespace {

double max_entry(const std::vector<std::vector<double>>& A) {
  double m = 0;
  for (const auto& row : A)
    for (double x : row) m = std::max(m, x);
  return m;
}

// ||A^(2^K)||^(1/2^K) with per-step renormalisation; slight over-estimate
// of the spectral radius, which keeps it on the safe side for certificates.
double gelfand_estimate(std::vector<std::vector<double>> A, int squarings = 13) {
  const std::size_t n = A.size();
  std::vector<std::vector<double>> B(n, std::vector<double>(n, 0.0));
  double log_scale = 0;  // A_cur = A^(2^k) / exp(log_scale)
  for (int k = 0; k < squarings; ++k) {
    double norm = 0;
    for (const auto& row : A)
      for (double x : row) norm = std::max(norm, std::abs(x));
    if (norm == 0) return 0;
    for (auto& row : A)
      for (double& x : row) x /= norm;
    log_scale = 2 * (log_scale + std::log(norm));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0;
        for (std::size_t l = 0; l < n; ++l) s += A[i][l] * A[l][j];
        B[i][j] = s;
      }
    }
    A.swap(B);
  }
  double fro = 0;
  for (const auto& row : A)
    for (double x : row) fro += x * x;
  if (fro == 0) return 0;
  return std::exp((0.5 * std::log(fro) + log_scale) / std::ldexp(1.0, squarings));
}

}  // namespace

double spectral_radius(const std::vector<std::vector<double>>& A, double rel_tol) {
  const std::size_t n = A.size();
  if (n == 0) return 0;
  if (n > 512) throw std::invalid_argument("matrix dimension exceeds 512");
  for (const auto& row : A) {
    if (row.size() != n) throw std::invalid_argument("matrix is not square");
    for (double x : row)
      if (!(x >= 0)) throw std::invalid_argument("matrix has a negative entry");
  }
  const double top = max_entry(A);
  if (top == 0) return 0;

  // Shift by a multiple of the identity: the dominant root moves by exactly
  // the shift and periodic components lose their tied moduli.
  double max_row_sum = 0;
  for (const auto& row : A) {
    double s = 0;
    for (double x : row) s += x;
    max_row_sum = std::max(max_row_sum, s);
  }
  const double shift = 0.1 * max_row_sum;
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n))), y(n);
  double lambda = 0;
  int stable = 0;
  for (int it = 0; it < 20000; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = shift * x[i];
      for (std::size_t j = 0; j < n; ++j) s += A[i][j] * x[j];
      y[i] = s;
    }
    double nrm = 0;
    for (double v : y) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (nrm == 0) return 0;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / nrm;
    const double prev = lambda;
    lambda = nrm;
    if (std::abs(lambda - prev) <= rel_tol * 0.25 * std::abs(lambda)) {
      if (++stable >= 4) {
        const double rho = lambda - shift;
        const double gel = gelfand_estimate(A);
        if (rho > 1e-14 && std::abs(gel - rho) > 0.02 * std::max(rho, gel))
          return gel;  // reduced accuracy, conservative bound
        return std::max(rho, 0.0);
      }
    } else {
      stable = 0;
    }
  }
  return gelfand_estimate(A);  // power iteration stalled
}

namespace {

// ---------------------------------------------------------------------------
// Generic partition machinery, shared by the explicit regimes and the
// orbit-driven builder.  Works in double or exact rational arithmetic.

template <class R>
std::vector<R> folded_orbit(const game_param<R>& P, int depth) {
  std::vector<R> pts;
  pts.reserve(static_cast<std::size_t>(depth) + 1);
  const R half = R(1) / 2;
  R t = P.p;
  pts.push_back(t);
  for (int k = 0; k < depth; ++k) {
    t = alpha(t, P);
    if (t < half) t = half;  // rounding can dip below the fold at close approaches
    pts.push_back(t);
  }
  return pts;
}

template <class R>
bool near(const R& a, const R& b, double tol) {
  R d = a - b;
  if (d < 0) d = -d;
  return to_double(d) < tol;
}

template <class R>
struct built_partition {
  std::vector<R> cuts;  // ascending
  std::vector<std::vector<int>> m;
  std::vector<double> beta;
  int merged = 0;
};

// Snap a computed image endpoint onto an existing cut point.  In exact
// arithmetic images of cut points are cut points already and the search
// changes nothing.
template <class R>
R snap_to_cut(const R& v, const std::vector<R>& cuts) {
  auto it = std::lower_bound(cuts.begin(), cuts.end(), v);
  if (it != cuts.end() && near(*it, v, kSnapTol)) return *it;
  if (it != cuts.begin() && near(*(it - 1), v, kSnapTol)) return *(it - 1);
  return v;
}

template <class R>
built_partition<R> build_partition(std::vector<R> cuts, const game_param<R>& P) {
  std::sort(cuts.begin(), cuts.end());
  built_partition<R> part;
  for (const R& c : cuts) {
    if (!part.cuts.empty() && near(part.cuts.back(), c, kMergeTol)) {
      ++part.merged;
      continue;
    }
    part.cuts.push_back(c);
  }
  const std::size_t k = part.cuts.size() - 1;
  if (k == 0) throw std::invalid_argument("partition needs at least one interval");

  part.m.assign(k, std::vector<int>(k, 0));
  part.beta.resize(k);
  const R tt = two_thirds<R>();
  for (std::size_t i = 0; i < k; ++i) {
    const R& lo = part.cuts[i];
    const R& hi = part.cuts[i + 1];
    part.beta[i] = to_double(psi(lo, P));  // psi decreases, sup at left end

    // Monotone pieces of the interval image: the folded map decreases left
    // of 2/3 and increases right of it.
    std::vector<std::pair<R, R>> pieces;
    if (hi <= tt) {
      pieces.emplace_back(alpha(hi, P), alpha(lo, P));
    } else if (lo >= tt) {
      pieces.emplace_back(alpha(lo, P), alpha(hi, P));
    } else {
      pieces.emplace_back(R(1) / 2, alpha(lo, P));
      pieces.emplace_back(R(1) / 2, alpha(hi, P));
    }
    for (auto& [a, b] : pieces) {
      a = snap_to_cut(a, part.cuts);
      b = snap_to_cut(b, part.cuts);
      if (b < a) std::swap(a, b);
      for (std::size_t j = 0; j < k; ++j) {
        // Interior overlap: a touching endpoint is not a transition.
        if (a < part.cuts[j + 1] && b > part.cuts[j]) part.m[i][j] += 1;
      }
    }
  }
  return part;
}

template <class R>
pressure_certificate certificate_from_cuts(std::vector<R> cuts, const game_param<R>& P,
                                           const std::string& scheme,
                                           const std::vector<std::string>& labels = {}) {
  built_partition<R> part = build_partition(std::move(cuts), P);
  const std::size_t k = part.beta.size();

  pressure_certificate cert;
  cert.p_lo = cert.p_hi = to_double(P.p);
  cert.scheme = scheme;
  for (const R& c : part.cuts) cert.partition.cut_points.push_back(to_double(c));
  cert.partition.labels = labels;
  cert.partition.labels.resize(part.cuts.size());

  cert.matrix.beta = part.beta;
  cert.matrix.multiplicity = part.m;
  cert.matrix.entries.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      cert.matrix.entries[i][j] = part.beta[i] * part.m[i][j];
  cert.matrix.rho = spectral_radius(cert.matrix.entries);

  if (part.merged > 0)
    cert.checks.push_back({"duplicate cut points merged", static_cast<double>(part.merged), true});
  cert.checks.push_back({"rho < 1", cert.matrix.rho, cert.matrix.rho < 1});
  cert.passed = cert.matrix.rho < 1;
  return cert;
}

void add_ordering_checks(pressure_certificate& cert, const std::vector<double>& values,
                         const std::vector<std::string>& names) {
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double margin = values[i + 1] - values[i];
    cert.checks.push_back({names[i] + " < " + names[i + 1], margin, margin > 0});
    cert.passed = cert.passed && margin > 0;
  }
}

}  // namespace

pressure_certificate certify_three_interval(const game_param<double>& P) {
  if (!(P.p >= 2.0 / 3 - 1e-12 && P.p <= 0.70237758 + 1e-9))
    throw std::domain_error("three-interval certificate holds for p in (2/3, 0.70237758]");
  auto pts = folded_orbit(P, 3);
  const double p1 = pts[1], p2 = pts[2], p3 = pts[3];
  pressure_certificate cert =
      certificate_from_cuts<double>({0.5, p1, p2, P.p}, P, "three-interval",
                                    {"1/2", "p1", "p2", "p"});
  add_ordering_checks(cert, {0.5, p1, p2, P.p}, {"1/2", "p1", "p2", "p"});
  auto add = [&](const std::string& name, double value, bool pass) {
    cert.checks.push_back({name, value, pass});
    cert.passed = cert.passed && pass;
  };
  add("p1 <= 2/3", 2.0 / 3 - p1, p1 <= 2.0 / 3);
  add("p3 <= p1", p1 - p3, p3 <= p1);
  add("2/3 in [p2, p]", std::min(2.0 / 3 - p2, P.p - 2.0 / 3), p2 <= 2.0 / 3 && 2.0 / 3 <= P.p);
  const double r_loop = P.gamma / p1;
  const double r_principal = 2 * P.gamma / std::sqrt(p2);
  add("radius gamma/p1 < 1", r_loop, r_loop < 1);
  add("radius 2*gamma/sqrt(p2) < 1", r_principal, r_principal < 1);
  return cert;
}

pressure_certificate certify_nine_interval_a(const game_param<double>& P) {
  if (!(P.p >= 2.0 / 3 - 1e-12 && P.p <= 0.709636 + 1e-9))
    throw std::domain_error("nine-interval certificate holds for p in (2/3, 0.709636]");
  auto t = folded_orbit(P, 9);
  // Expected order of the first nine folded orbit points.
  const std::vector<double> ordered{0.5,  t[7], t[3], t[5], t[9], t[1],
                                    t[2], 2.0 / 3, t[6], t[4], t[8], P.p};
  const std::vector<std::string> names{"1/2", "p7", "p3", "p5", "p9", "p1",
                                       "p2",  "2/3", "p6", "p4", "p8", "p"};
  pressure_certificate cert = certificate_from_cuts<double>(
      {0.5, t[7], t[3], t[5], t[1], t[2], t[6], t[4], t[8], P.p}, P, "nine-interval-a",
      {"1/2", "p7", "p3", "p5", "p1", "p2", "p6", "p4", "p8", "p"});
  add_ordering_checks(cert, ordered, names);
  auto add = [&](const std::string& name, double value, bool pass) {
    cert.checks.push_back({name, value, pass});
    cert.passed = cert.passed && pass;
  };
  const double g = P.gamma;
  const double r1 = g / t[1];
  const double r2 = g / std::sqrt(t[3] * t[6]);
  const double r3 = g * std::pow(1.0 / (t[5] * t[2]) * (2.0 / (0.5 * t[8]) + 1.0 / (t[7] * t[4])),
                                 0.25);
  add("radius gamma/p1 < 1", r1, r1 < 1);
  add("radius gamma/sqrt(p3*p6) < 1", r2, r2 < 1);
  add("principal loop radius < 1", r3, r3 < 1);
  return cert;
}

pressure_certificate certify_nine_interval_b(double p_lo, double p_hi, int samples) {
  constexpr double kLo = 0.709636979, kHi = 0.7190233023;
  if (!(p_lo >= kLo - 1e-12 && p_hi <= kHi + 1e-12 && p_lo <= p_hi))
    throw std::domain_error("range certificate holds inside [0.709636979, 0.7190233023]");
  samples = std::max(samples, 2);

  pressure_certificate cert;
  cert.p_lo = p_lo;
  cert.p_hi = p_hi;
  cert.scheme = "nine-interval-b";

  const std::vector<std::string> names{"1/2", "p9", "p5", "p3", "p7", "p1",
                                       "p2",  "2/3", "p8", "p4", "p6", "p"};
  std::array<double, 10> q_max{};  // worst case of 1/p_i over the range
  q_max.fill(0);
  std::array<double, 10> q_first{}, q_last{};
  double min_order_margin = std::numeric_limits<double>::infinity();
  bool ordering_ok = true;
  std::array<bool, 10> increasing, decreasing;
  increasing.fill(true);
  decreasing.fill(true);

  std::array<double, 10> prev_q{};
  for (int s = 0; s < samples; ++s) {
    const double p = p_lo + (p_hi - p_lo) * (samples == 1 ? 0.0 : s / (samples - 1.0));
    game_param<double> P(p);
    auto t = folded_orbit(P, 9);
    const std::vector<double> ordered{0.5,  t[9], t[5], t[3], t[7], t[1],
                                      t[2], 2.0 / 3, t[8], t[4], t[6], p};
    for (std::size_t i = 0; i + 1 < ordered.size(); ++i) {
      const double margin = ordered[i + 1] - ordered[i];
      min_order_margin = std::min(min_order_margin, margin);
      // Non-strict at the range boundaries: p3 = p5 at the left endpoint
      // and p9 = 1/2 at the right one.
      if (!(margin > -1e-6)) ordering_ok = false;
    }
    std::array<double, 10> q{};
    for (int i = 1; i <= 9; ++i) q[static_cast<std::size_t>(i)] = 1.0 / t[static_cast<std::size_t>(i)];
    for (int i = 1; i <= 9; ++i) {
      auto ui = static_cast<std::size_t>(i);
      q_max[ui] = std::max(q_max[ui], q[ui]);
      if (s > 0) {
        if (q[ui] < prev_q[ui] - 1e-13) increasing[ui] = false;
        if (q[ui] > prev_q[ui] + 1e-13) decreasing[ui] = false;
      }
    }
    if (s == 0) q_first = q;
    if (s == samples - 1) q_last = q;
    prev_q = q;
    if (s == samples - 1)
      for (double c : {0.5, t[9], t[5], t[3], t[7], t[1], t[2], 2.0 / 3, t[8], t[4], t[6], p})
        cert.partition.cut_points.push_back(c);
  }
  cert.partition.labels = names;

  cert.checks.push_back({"ordering 1/2<p9<p5<p3<p7<p1<p2<2/3<p8<p4<p6<p", min_order_margin,
                         ordering_ok});
  auto mono = [&](int i, bool want_increasing) {
    const auto ui = static_cast<std::size_t>(i);
    const bool sampled = want_increasing ? increasing[ui] : decreasing[ui];
    const bool endpoints = want_increasing ? q_last[ui] >= q_first[ui] : q_last[ui] <= q_first[ui];
    cert.checks.push_back({std::string("q") + std::to_string(i) +
                               (want_increasing ? " increasing" : " decreasing"),
                           q_last[ui] - q_first[ui], sampled && endpoints});
  };
  mono(4, true);
  mono(5, true);
  mono(8, true);
  mono(3, false);
  mono(6, false);
  mono(7, false);

  // Principal 8x8 component over [J0,J1,J2,J3,J5,J6,J7,J8] with worst-case
  // reciprocals; J4 contributes the separate self-loop gamma/p1.
  const double g = 2 * p_hi - 1;
  const double q2 = q_max[2], q3 = q_max[3], q4 = q_max[4], q5 = q_max[5], q6 = q_max[6],
               q7 = q_max[7], q8 = q_max[8];
  std::vector<std::vector<double>> A{
      {0, 0, 0, 0, 0, 0, 0, 2},
      {0, 0, 0, 0, 0, 0, q5, 0},
      {0, 0, 0, 0, 0, q3, 0, 0},
      {0, 0, 0, 0, q7, 0, 0, 0},
      {2 * q2, q2, 0, 0, 0, 0, 0, 0},
      {q8, 0, 0, 0, 0, 0, 0, 0},
      {0, q4, q4, 0, 0, 0, 0, 0},
      {0, 0, 0, q6, 0, 0, 0, 0}};
  for (auto& row : A)
    for (double& x : row) x *= g;
  cert.matrix.entries = A;
  cert.matrix.beta.assign(8, 0.0);
  cert.matrix.rho = spectral_radius(A);
  const double self4 = g * q_max[1];
  cert.checks.push_back({"J4 multiplier gamma/p1 < 1", self4, self4 < 1});
  cert.checks.push_back({"rho < 1", cert.matrix.rho, cert.matrix.rho < 1});
  cert.passed = true;
  for (const auto& c : cert.checks) cert.passed = cert.passed && c.pass;
  return cert;
}

// Cut at the folded orbit points up to depth-1 together with 1/2, 2/3 and
// the endpoints; at depth 3 this recovers the three-interval scheme with
// its fold interval split at 2/3.
pressure_certificate certify_auto(const game_param<double>& P, int depth) {
  if (depth < 3) throw std::invalid_argument("orbit partition needs depth >= 3");
  if (!(P.p > 0.5)) throw std::domain_error("the partition domain [1/2, p] is degenerate");
  std::vector<double> cuts = folded_orbit(P, depth - 1);
  cuts.push_back(0.5);
  if (P.p > 2.0 / 3) cuts.push_back(2.0 / 3);
  pressure_certificate cert = certificate_from_cuts<double>(std::move(cuts), P, "orbit-auto");
  cert.checks.push_back({"depth", static_cast<double>(depth), true});
  return cert;
}

pressure_certificate certify_auto(const rational& p, int depth) {
  if (depth < 3) throw std::invalid_argument("orbit partition needs depth >= 3");
  game_param<rational> P(p);
  if (!(2 * P.p > 1)) throw std::domain_error("the partition domain [1/2, p] is degenerate");
  std::vector<rational> cuts = folded_orbit(P, depth - 1);
  cuts.push_back(rational(1) / 2);
  if (3 * P.p > rational(2)) cuts.push_back(rational(2) / 3);
  pressure_certificate cert = certificate_from_cuts<rational>(std::move(cuts), P, "orbit-auto");
  cert.checks.push_back({"depth", static_cast<double>(depth), true});
  cert.checks.push_back({"exact cut points", 1, true});
  return cert;
}

coverage_report certify_range(double lo, double hi, int samples, int auto_depth) {
  constexpr double kThreeHi = 0.70237758;
  constexpr double kNineAHi = 0.709636;
  constexpr double kNineBLo = 0.709636979;
  constexpr double kNineBHi = 0.7190233023;
  const double kTwoThirds = 2.0 / 3;
  if (!(lo <= hi)) throw std::invalid_argument("empty parameter range");
  samples = std::max(samples, 3);

  coverage_report rep;
  rep.lo = lo;
  rep.hi = hi;
  if (lo < kTwoThirds - 1e-12) rep.gaps.emplace_back(lo, std::min(hi, kTwoThirds));

  struct segment {
    double a, b;
    int kind;  // 0 three, 1 nine-a, 2 auto seam, 3 nine-b
  };
  const std::vector<segment> segs{{kTwoThirds, kThreeHi, 0},
                                  {kThreeHi, kNineAHi, 1},
                                  {kNineAHi, kNineBLo, 2},
                                  {kNineBLo, kNineBHi, 3}};
  for (const auto& seg : segs) {
    const double a = std::max(lo, seg.a), b = std::min(hi, seg.b);
    if (!(a <= b)) continue;
    if (seg.kind == 3) {
      pressure_certificate cert = certify_nine_interval_b(a, b, std::max(samples, 100));
      if (!cert.passed) rep.gaps.emplace_back(a, b);
      rep.parts.push_back(std::move(cert));
      continue;
    }
    const int n = seg.kind == 2 ? std::max(3, samples / 10) : samples;
    bool all_pass = true;
    double worst_rho = 0;
    pressure_certificate mid;
    for (int s = 0; s < n; ++s) {
      double p = a + (b - a) * (s + 0.5) / n;
      p = std::min(std::max(p, kTwoThirds + 1e-9), kNineBHi);
      pressure_certificate cert;
      game_param<double> P(p);
      if (seg.kind == 0)
        cert = certify_three_interval(P);
      else if (seg.kind == 1)
        cert = certify_nine_interval_a(P);
      else
        cert = certify_auto(rational(p), auto_depth);
      worst_rho = std::max(worst_rho, cert.matrix.rho);
      all_pass = all_pass && cert.passed;
      if (s == n / 2) mid = std::move(cert);
    }
    mid.p_lo = a;
    mid.p_hi = b;
    mid.checks.push_back({"all " + std::to_string(n) + " samples passed", worst_rho, all_pass});
    mid.passed = mid.passed && all_pass;
    if (!all_pass) rep.gaps.emplace_back(a, b);
    rep.parts.push_back(std::move(mid));
  }
  if (hi > kNineBHi + 1e-12) rep.gaps.emplace_back(std::max(lo, kNineBHi), hi);
  rep.covered = rep.gaps.empty();
  return rep;
}

nlohmann::json to_json(const pressure_certificate& c) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& ch : c.checks)
    checks.push_back({{"name", ch.name}, {"value", ch.value}, {"pass", ch.pass}});
  return {{"p_lo", c.p_lo},
          {"p_hi", c.p_hi},
          {"scheme", c.scheme},
          {"cut_points", c.partition.cut_points},
          {"labels", c.partition.labels},
          {"matrix",
           {{"beta", c.matrix.beta},
            {"multiplicity", c.matrix.multiplicity},
            {"entries", c.matrix.entries}}},
          {"rho", c.matrix.rho},
          {"passed", c.passed},
          {"checks", checks},
          {"verification", "numerically-verified (non-rigorous)"}};
}

nlohmann::json to_json(const coverage_report& r) {
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& part : r.parts) parts.push_back(to_json(part));
  nlohmann::json gaps = nlohmann::json::array();
  for (const auto& [a, b] : r.gaps) gaps.push_back({{"lo", a}, {"hi", b}});
  return {{"lo", r.lo}, {"hi", r.hi}, {"covered", r.covered}, {"parts", parts}, {"gaps", gaps}};
}

}  // namespace asymgame
