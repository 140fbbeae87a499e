#pragma once

#include "compilers.hpp"

#include <map>
#include <sstream>

namespace trotterforge {

struct Recurrence {
  double c0 = 1;
  long long n0 = 2;
  double m1 = 2, m2 = 0;
  long long m = 2;
  std::function<double(long long)> cost = [](long long) { return 0.0; };
  // cost(n) = O(n^alphaExp log^k n)
  std::optional<std::pair<double, int>> declared;
};

inline void validate(const Recurrence& r) {
  if (r.c0 < 0 || r.n0 < 2 || r.m1 < 0 || r.m2 < 0 || (r.m1 == 0 && r.m2 == 0) || r.m < 2)
    throw ValidationError("recurrence parameters outside the master-theorem shape");
}

inline double solve_recurrence_numeric(const Recurrence& r, long long n) {
  validate(r);
  if (n < 1) throw DomainError("n must be positive");
  std::map<long long, double> memo;
  std::function<double(long long)> f = [&](long long k) -> double {
    if (k < r.n0) return r.c0;
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    double v = r.cost(k);
    if (r.m1 != 0) v += r.m1 * f(k / r.m);
    if (r.m2 != 0) v += r.m2 * f((k + r.m - 1) / r.m);
    memo[k] = v;
    return v;
  };
  return f(n);
}

enum class MasterCase { bottom, boundary, top };

struct RecurrenceClass {
  MasterCase tag;
  double exponent;
  int logPower;
  double operator()(double n) const { return std::pow(n, exponent) * std::pow(std::log2(n), logPower); }
  std::string str() const {
    std::ostringstream o;
    o << "n^" << exponent;
    if (logPower) o << " log^" << logPower << " n";
    return o.str();
  }
};

inline RecurrenceClass classify_recurrence(const Recurrence& r) {
  validate(r);
  if (!r.declared) throw ValidationError("recurrence lacks a declared (alpha, k)");
  auto [a, k] = *r.declared;
  double crit = std::log(r.m1 + r.m2) / std::log(static_cast<double>(r.m));
  if (std::abs(a - crit) < 1e-12) return {MasterCase::boundary, a, k + 1};
  if (a < crit) return {MasterCase::bottom, crit, 0};
  return {MasterCase::top, a, k};
}

// coupled far/near system for the low-rank recursion
struct CoupledSolution {
  double rec, near;
};

inline CoupledSolution solve_lowrank_system(long long n, const std::function<double(long long)>& costFar,
                                            double c0 = 1.0) {
  std::map<long long, CoupledSolution> memo;
  std::function<CoupledSolution(long long)> f = [&](long long k) -> CoupledSolution {
    if (k < 2) return {c0, c0};
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    auto h = f(k / 2);
    double far = costFar(k / 2);
    CoupledSolution s{2 * h.rec + h.near + 3 * far, h.near + 3 * far};
    memo[k] = s;
    return s;
  };
  return f(n);
}

// ---- gate-count reports ----

struct CostRow {
  long long n;
  std::uint64_t count;
};

struct CostReport {
  std::string method;
  double alpha = 0;
  int d = 1;
  std::vector<CostRow> rows;
  double fittedExponent = 0;
  double fittedExponentExPolylog = 0;  // after dividing by log2(n)^polylogDegree
  int polylogDegree = 0;
  double predictedExponent = 0;
};

// log-log least squares, top two points weighted double
inline double fit_exponent(const std::vector<double>& n, const std::vector<double>& c) {
  std::vector<double> x, y, w;
  for (std::size_t i = 0; i < n.size(); ++i) {
    x.push_back(std::log(n[i]));
    y.push_back(std::log(c[i]));
    w.push_back(i + 2 >= n.size() ? 2.0 : 1.0);
  }
  return fit_line(x, y, w).slope;
}

inline double predicted_exponent(const std::string& method, double alpha, int d) {
  double a = alpha / d;
  if (method == "sequential") return 2.0;
  if (method == "lowrank") return 1.0;
  if (method == "block") return a >= 2 ? 1.0 : std::min(2.0, 3.0 - a);
  if (method == "avgcost") {
    if (a >= 2) throw DomainError("average-cost method is not defined for alpha >= 2d");
    return a < 1 ? 1.5 : 2.0 - a / 2;
  }
  throw DomainError("unknown method " + method);
}

inline int polylog_degree(const std::string& method) {
  if (method == "lowrank") return 2;  // phase width times recursion depth
  if (method == "block") return 3;    // selection log, recursion depth, qubitization length
  if (method == "avgcost") return 2;
  return 0;
}

inline std::uint64_t count_step(const std::string& method, const HamiltonianSpec& spec, double t, double eps) {
  auto f = make_product_formula(1);
  if (method == "sequential") return compile_sequential_step(spec, t, f, true).gateCount;
  if (method == "lowrank") {
    int cutoff = std::max(1, std::min(4, spec.n / 4));
    return compile_lowrank_step(spec, t, eps / spec.n, cutoff, f, true).gateCount;
  }
  if (method == "block") return compile_block_step_count(spec, t, eps, f).gateCount;
  if (method == "avgcost") {
    double a = *spec.alpha;
    double e = a < 1 ? 0.5 : 1.0 - a / 2;
    int m = std::clamp(static_cast<int>(std::lround(std::pow(spec.n / 2.0, e))), 1, spec.n / 2);
    return compile_avgcost_step(spec, t, m, f, true, eps).gateCount;
  }
  throw DomainError("unknown method " + method);
}

inline CostReport gate_count_report(const std::string& method, double alpha, int d, double t, double eps,
                                    const std::vector<long long>& nSweep) {
  if (nSweep.size() < 4) throw DomainError("need at least four sweep points");
  for (std::size_t i = 0; i < nSweep.size(); ++i)
    if (!is_power_of_two(nSweep[i]) || (i && nSweep[i] != 2 * nSweep[i - 1]))
      throw DomainError("sweep must be dyadic");
  if (method != "sequential" && d != 1) throw DomainError(method + " count model is one-dimensional");
  CostReport rep{method, alpha, d, {}, 0, 0, polylog_degree(method), predicted_exponent(method, alpha, d)};
  std::vector<double> xs, ys, zs;
  for (long long n : nSweep) {
    auto spec = build_power_law(static_cast<int>(n), d, alpha, {PauliKind::Z, PauliKind::Z});
    std::uint64_t c = count_step(method, spec, t, eps);
    rep.rows.push_back({n, c});
    xs.push_back(static_cast<double>(n));
    ys.push_back(static_cast<double>(c));
    zs.push_back(static_cast<double>(c) / std::pow(std::log2(static_cast<double>(n)), rep.polylogDegree));
  }
  rep.fittedExponent = fit_exponent(xs, ys);
  rep.fittedExponentExPolylog = fit_exponent(xs, zs);
  return rep;
}

inline std::string to_csv(const CostReport& r) {
  std::ostringstream o;
  o.precision(6);
  o << "method,alpha,d,n,count,fitted_exponent,polylog_degree,fitted_exponent_ex_polylog,predicted_exponent\n";
  for (auto& row : r.rows)
    o << r.method << ',' << r.alpha << ',' << r.d << ',' << row.n << ',' << row.count << ',' << r.fittedExponent
      << ',' << r.polylogDegree << ',' << r.fittedExponentExPolylog << ',' << r.predictedExponent << '\n';
  return o.str();
}

inline std::uint64_t recount(const Circuit& c) {
  std::uint64_t s = 0;
  for (auto& g : c.gates) s += gate_cost(g);
  return s;
}

}  // namespace trotterforge
