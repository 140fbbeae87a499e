#pragma once

#include "common.hpp"
#include "json.hpp"

#include <map>

namespace trotterforge {

struct BoundQuery {
  double mu = 1;          // target qubits
  double thetaMax = 1;    // in (0, pi)
  double delta = 0.1;     // accuracy (eps for the Hamiltonian and oracle variants)
  double b = 2;           // circuit qubits
  double gateSetSize = 2; // |K|
  double m = 8;           // phase bits
  double n = 4;           // sites
  double t = 1;           // coefficient cap
};

struct BoundResult {
  double value = 0;
  bool vacuous = false;
  std::map<std::string, double> constants;
};

inline nlohmann::json to_json(const BoundResult& r) {
  nlohmann::json c = nlohmann::json::object();
  for (auto& [k, v] : r.constants) c[k] = v;
  return {{"bound", r.value}, {"vacuous", r.vacuous}, {"constants", c}};
}

namespace detail {
inline BoundResult clamp_bound(double v, std::map<std::string, double> constants, bool forceVacuous = false) {
  BoundResult r;
  r.constants = std::move(constants);
  r.constants["log_base_e"] = 1.0;
  if (forceVacuous || !(v > 0)) {
    r.vacuous = true;
    r.value = 0;
  } else {
    r.value = v;
  }
  return r;
}
inline double pairs(double b) { return b * (b - 1) / 2; }
}  // namespace detail

// log of (2 theta)^{2^mu}
inline double volume_diag(double mu, double thetaMax) {
  if (!(thetaMax > 0) || !(thetaMax < M_PI)) throw DomainError("theta_max must lie in (0, pi)");
  if (mu < 0) throw DomainError("mu must be nonnegative");
  return std::exp2(mu) * std::log(2 * thetaMax);
}

inline double diag_main_term(double mu, double thetaMax, double delta, double b, double k) {
  double ball = std::asin(2 * delta * std::sqrt(1 - delta * delta));
  return std::exp2(mu) * std::log(2 * thetaMax / ball) / std::log(detail::pairs(b) * k);
}

inline void check_gate_set(double b, double k) {
  if (b < 2) throw DomainError("need at least two circuit qubits");
  if (k < 1) throw DomainError("gate set must be nonempty");
  if (detail::pairs(b) * k <= 1) throw DomainError("gate choices must exceed one");
}

inline BoundResult diag_synthesis_lower_bound(const BoundQuery& q) {
  if (!(q.delta > 0) || !(q.delta < 1)) throw DomainError("delta must lie in (0,1)");
  if (!(q.thetaMax > 0) || !(q.thetaMax < M_PI)) throw DomainError("theta_max must lie in (0, pi)");
  if (q.b < q.mu) throw DomainError("need b >= mu");
  check_gate_set(q.b, q.gateSetSize);
  return detail::clamp_bound(diag_main_term(q.mu, q.thetaMax, q.delta, q.b, q.gateSetSize), {});
}

// Clifford+T recompilation: solve c g ln(g/delta) = bound(2 delta, |K'|)
inline BoundResult arbitrary_gate_diag_bound(const BoundQuery& q, double c, double cliffordTSize = 8) {
  if (!(c > 0)) throw DomainError("compilation constant must be positive");
  BoundQuery q2 = q;
  q2.delta = 2 * q.delta;
  q2.gateSetSize = cliffordTSize;
  auto base = diag_synthesis_lower_bound(q2);
  std::map<std::string, double> k{{"c", c}, {"clifford_t_size", cliffordTSize}};
  if (base.vacuous) return detail::clamp_bound(0, k, true);
  double target = base.value;
  auto f = [&](double g) { return c * g * std::log(g / q.delta) - target; };
  double lo = q.delta * 1.0000001, hi = std::max(2.0, target);
  while (f(hi) < 0) hi *= 2;
  if (f(lo) > 0) return detail::clamp_bound(lo, k);
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return detail::clamp_bound(hi, k);
}

struct CommutingBoundConstants {
  double cRed = 1.0;          // reduction overhead c_red n ln^2(n/eps)
  double gateSetScale = 1.0;  // |K'| = scale |K|
  double thetaCap = 3.0;      // phases are capped below pi
};

// g >= (diag bound at mu = 2 log2 n, delta = 3 eps, theta = min(t, cap) - overhead) / 2
inline BoundResult commuting_ham_lower_bound(const BoundQuery& q, const CommutingBoundConstants& c = {}) {
  const double eps = q.delta;
  if (!(eps > 0) || !(eps < 1.0 / 3)) throw DomainError("eps must lie in (0, 1/3)");
  if (q.n < 2) throw DomainError("need n >= 2");
  if (q.b < q.n) throw DomainError("need b >= n");
  check_gate_set(q.b, q.gateSetSize * c.gateSetScale);
  std::map<std::string, double> k{{"c_red", c.cRed},
                                  {"gate_set_scale", c.gateSetScale},
                                  {"theta_cap", c.thetaCap},
                                  {"delta_factor", 3.0},
                                  {"simulation_copies", 2.0}};
  if (q.t < eps) return detail::clamp_bound(0, k, true);
  double theta = std::min(q.t, c.thetaCap);
  double mu = 2 * std::log2(q.n);
  double main = diag_main_term(mu, theta, 3 * eps, q.b, q.gateSetSize * c.gateSetScale);
  double overhead = c.cRed * q.n * std::pow(std::log(q.n / eps), 2);
  auto r = detail::clamp_bound((main - overhead) / 2, k);
  r.constants["main_term"] = main;
  r.constants["overhead"] = overhead;
  return r;
}

inline BoundResult discrete_diag_lower_bound(const BoundQuery& q, double constant = 1.0) {
  if (q.b < q.mu) throw DomainError("need b >= mu");
  if (q.b < 1 || q.gateSetSize < 1 || q.b * q.gateSetSize <= 1) throw DomainError("gate choices must exceed one");
  std::map<std::string, double> k{{"C", constant}};
  if (!(q.delta >= std::exp2(-q.m)) || !(q.delta <= 0.5)) return detail::clamp_bound(0, k, true);
  return detail::clamp_bound(constant * std::exp2(q.mu) * std::log(1 / q.delta) / std::log(q.b * q.gateSetSize), k);
}

inline BoundResult coeff_oracle_lower_bound(const BoundQuery& q, double constant = 0.5, double cPoly = 1.0) {
  const double eps = q.delta;
  if (q.n < 2) throw DomainError("need n >= 2");
  if (q.b < q.m + 2 * std::log2(q.n)) throw DomainError("need b >= m + 2 log2 n");
  if (q.gateSetSize < 1) throw DomainError("gate set must be nonempty");
  std::map<std::string, double> k{{"C", constant}, {"c_poly", cPoly}};
  if (!(eps >= std::exp2(-q.m)) || !(eps <= 0.5)) return detail::clamp_bound(0, k, true);
  double main = q.n * q.n * std::log(1 / eps) / std::log(q.b * q.gateSetSize);
  double poly = cPoly * std::pow(std::log(1 / eps), 2);
  auto r = detail::clamp_bound(constant * (main - poly), k);
  r.constants["main_term"] = main;
  return r;
}

}  // namespace trotterforge
