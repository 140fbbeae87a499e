#pragma once

#include "circuit.hpp"
#include "hamlib.hpp"

#include <optional>
#include <sstream>

namespace trotterforge {

struct SimulationRequest {
  double t = 1.0;
  double eps = 1e-3;
  int p = 1;
};

struct TrotterErrorReport {
  std::string method;
  int p = 1;
  double t = 0;
  double alphaComm = 0;
  double bound = 0;
  std::optional<double> empirical;
  long long r = 1;
};

// sum over (p+1)-tuples of || [H_{g_{p+1}}, ... [H_{g_2}, H_{g_1}]] ||, optionally restricted to W_eta
inline double commutator_norm_sum(const std::vector<Matrix>& stages, int p, std::optional<int> eta = std::nullopt) {
  if (p < 1) throw DomainError("order must be at least 1");
  if (p > 3) throw CapacityError("brute-force commutator sums are limited to p <= 3");
  if (stages.empty()) return 0.0;
  const Eigen::Index d = stages[0].rows();
  if (d > 1024) throw CapacityError("commutator sums limited to dimension 2^10");
  for (auto& s : stages)
    if (s.rows() != d || s.cols() != d) throw ValidationError("stages differ in shape");
  std::optional<SubspaceProjector> proj;
  if (eta) proj.emplace(ceil_log2(d), *eta);
  const std::size_t g = stages.size();
  std::vector<double> partial(g, 0.0);
  parallel_for(g, [&](std::size_t first) {
    // depth-first over the remaining indices, reusing the inner commutator
    std::function<void(const Matrix&, int)> rec = [&](const Matrix& inner, int depth) {
      if (depth == p + 1) {
        partial[first] += proj ? spectral_norm(proj->restrict(inner)) : spectral_norm(inner);
        return;
      }
      for (std::size_t k = 0; k < g; ++k) {
        Matrix c = stages[k] * inner - inner * stages[k];
        if (c.cwiseAbs().maxCoeff() < 1e-15) continue;
        rec(c, depth + 1);
      }
    };
    rec(stages[first], 1);
  });
  double s = 0;
  for (double x : partial) s += x;
  return s;
}

inline long long step_count(const SimulationRequest& req, double alphaComm) {
  if (!(alphaComm >= 0)) throw DomainError("alpha_comm must be nonnegative");
  if (!(req.eps > 0) || !(req.t >= 0)) throw DomainError("need eps > 0 and t >= 0");
  if (alphaComm == 0) return 1;
  double x = std::pow(alphaComm * std::pow(req.t, req.p + 1) / req.eps, 1.0 / req.p);
  // absorb floating noise from exact integers
  double r = std::ceil(x * (1 - 1e-12));
  return std::max(1LL, static_cast<long long>(r));
}

struct FermionicNorms {
  double tau1 = 0;     // induced 1-norm of tau
  double nuEta = 0;    // restricted induced 1-norm of nu
  int eta = 1;
  // (a+b)^{p-1} a b eta t^{p+1}, constant not included
  double bound(int p, double t) const {
    return std::pow(tau1 + nuEta, p - 1) * tau1 * nuEta * eta * std::pow(t, p + 1);
  }
};

inline FermionicNorms fermionic_error_norms(const RealMatrix& tau, const RealMatrix& nu, int eta) {
  if (tau.rows() != tau.cols() || nu.rows() != nu.cols() || tau.rows() != nu.rows())
    throw ValidationError("tau and nu must be square and of equal size");
  if (eta < 1 || eta > nu.rows()) throw DomainError("eta out of range");
  return {induced1_norm(tau), induced1_restricted_norm(nu, eta), eta};
}

inline std::string to_csv(const std::vector<TrotterErrorReport>& rows) {
  std::ostringstream o;
  o.precision(10);
  o << "method,p,t,alpha_comm,bound,empirical,r\n";
  for (auto& r : rows) {
    o << r.method << ',' << r.p << ',' << r.t << ',' << r.alphaComm << ',' << r.bound << ',';
    if (r.empirical) o << *r.empirical;
    o << ',' << r.r << '\n';
  }
  return o.str();
}

}  // namespace trotterforge
