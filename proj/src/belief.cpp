#include "asymgame/belief.hpp"

#include <cstdint>
#include <cstring>
#include <map>
#include <mutex>
#include <shared_mutex>

namespace asymgame {

fraction_orbit orbit_fractions(const rational& theta0, int n, const game_param<rational>& P) {
  if (n < 0) throw std::invalid_argument("orbit length must be non-negative");
  check_belief(theta0);
  fraction_orbit o;
  o.num.reserve(static_cast<std::size_t>(n) + 1);
  o.den.reserve(static_cast<std::size_t>(n) + 1);
  o.sides.reserve(static_cast<std::size_t>(n) + 1);
  rational a = theta0, b = 1;
  const rational& p = P.p;
  for (int k = 0;; ++k) {
    int s = 2 * a >= b ? 1 : 0;  // den stays positive, so this is theta_k >= 1/2
    o.num.push_back(a);
    o.den.push_back(b);
    o.sides.push_back(s);
    if (k == n) break;
    if (s == 1) {
      rational a_next = (3 * p - 1) * a - (2 * p - 1) * b;
      b = a;
      a = a_next;
    } else {
      rational a_next = (3 * p - 2) * a + (1 - p) * b;
      b = b - a;
      a = a_next;
    }
  }
  return o;
}

namespace {

struct orbit_key {
  std::uint64_t p_bits;
  std::uint64_t theta_bits;
  bool operator<(const orbit_key& o) const {
    return p_bits != o.p_bits ? p_bits < o.p_bits : theta_bits < o.theta_bits;
  }
};

std::uint64_t bits_of(double x) {
  std::uint64_t u;
  std::memcpy(&u, &x, sizeof u);
  return u;
}

std::shared_mutex g_cache_mutex;
std::map<orbit_key, std::shared_ptr<const belief_orbit<double>>> g_cache;

}  // namespace

std::shared_ptr<const belief_orbit<double>> orbit_cache::get(const game_param<double>& P,
                                                             double theta0, int n) {
  orbit_key key{bits_of(P.p), bits_of(theta0)};
  {
    std::shared_lock lock(g_cache_mutex);
    auto it = g_cache.find(key);
    if (it != g_cache.end() && static_cast<int>(it->second->points.size()) > n)
      return it->second;
  }
  auto fresh = std::make_shared<belief_orbit<double>>(orbit(theta0, n, P));
  std::unique_lock lock(g_cache_mutex);
  auto& slot = g_cache[key];
  if (!slot || slot->points.size() < fresh->points.size()) slot = std::move(fresh);
  return slot;
}

void orbit_cache::clear() {
  std::unique_lock lock(g_cache_mutex);
  g_cache.clear();
}

}  // namespace asymgame
