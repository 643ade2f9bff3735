#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "asymgame/belief.hpp"

namespace asymgame {

// All t in [1/2, p] with alpha^depth(t) = y, found by inverting the two
// Moebius branches and filtering by branch domain.  Results are
// forward-checked to 1e-10.
template <class R>
std::vector<R> preimages(const R& y, int depth, const game_param<R>& P);

// Weighted preimage sum over alpha^{-n}(1/2): each preimage contributes the
// product of psi along its forward orbit.  (1/n) log Z_n estimates the
// pressure.  Depths beyond 40 require bigfloat arithmetic.
template <class R>
R Z_n(int n, const game_param<R>& P);

// Spectral radius of an entrywise non-negative matrix (dimension <= 512)
// via shifted power iteration, cross-checked against a Gelfand estimate.
double spectral_radius(const std::vector<std::vector<double>>& A, double rel_tol = 1e-8);

struct partition_scheme {
  std::vector<double> cut_points;        // ascending, first 1/2, last p
  std::vector<std::string> labels;       // one per cut point
};

struct bound_matrix {
  std::vector<double> beta;                    // per-interval sup of psi
  std::vector<std::vector<int>> multiplicity;  // m_ij in {0,1,2}
  std::vector<std::vector<double>> entries;    // beta_i * m_ij
  double rho = 0;
};

struct named_check {
  std::string name;
  double value = 0;
  bool pass = false;
};

// Verdict for one parameter (or one parameter range): the partition, the
// transition bound matrix, the ordering checks behind it, and whether the
// spectral radius certifies summability.  All checks are numerical
// verifications at the stated tolerances, not interval-arithmetic proofs.
struct pressure_certificate {
  double p_lo = 0, p_hi = 0;
  std::string scheme;
  partition_scheme partition;
  bound_matrix matrix;
  std::vector<named_check> checks;
  bool passed = false;
};

// Closed-form certificate on (2/3, 0.70237758]: three intervals cut at the
// first two folded orbit points; radii gamma/p1 and 2 gamma/sqrt(p2).
pressure_certificate certify_three_interval(const game_param<double>& P);

// Nine intervals cut at the first nine folded orbit points, valid on
// (2/3, 0.709636]; three communicating components.
pressure_certificate certify_nine_interval_a(const game_param<double>& P);

// Interval certificate on [0.709636979, 0.7190233023]: worst-case
// reciprocal orbit points over the range substituted into the fixed 8x8
// principal matrix; monotonicity established by dense sampling.
pressure_certificate certify_nine_interval_b(double p_lo, double p_hi, int samples = 200);

// Generic certificate: cuts [1/2, p] at the folded orbit points up to
// `depth` plus 2/3, builds the multiplicity matrix branch-wise.
pressure_certificate certify_auto(const game_param<double>& P, int depth);
pressure_certificate certify_auto(const rational& p, int depth);  // exact cut points

struct coverage_report {
  double lo = 0, hi = 0;
  bool covered = false;
  std::vector<pressure_certificate> parts;
  std::vector<std::pair<double, double>> gaps;
};

// Chains the three explicit regimes plus the generic builder over
// [lo, hi], sampling within each regime.
coverage_report certify_range(double lo, double hi, int samples = 50, int auto_depth = 80);

nlohmann::json to_json(const pressure_certificate& c);
nlohmann::json to_json(const coverage_report& r);

}  // namespace asymgame
