#pragma once

#include "blockenc.hpp"
#include "circuit.hpp"
#include "decomp.hpp"
#include "lowrank.hpp"

#include <map>

namespace trotterforge {

struct ProductFormula {
  int order = 1;
  int stages = 2;
  std::vector<std::pair<int, double>> schedule;  // (1-based stage, time fraction), applied in list order
};

namespace detail {

inline std::vector<std::pair<int, double>> strang(int k, double x) {
  std::vector<std::pair<int, double>> s;
  if (k == 1) return {{1, x}};
  for (int i = 1; i < k; ++i) s.push_back({i, x / 2});
  s.push_back({k, x});
  for (int i = k - 1; i >= 1; --i) s.push_back({i, x / 2});
  return s;
}

inline void push_merged(std::vector<std::pair<int, double>>& out, std::pair<int, double> e) {
  if (!out.empty() && out.back().first == e.first)
    out.back().second += e.second;
  else
    out.push_back(e);
}

}  // namespace detail

inline ProductFormula make_product_formula(int p, int stages = 2) {
  if (stages < 1) throw DomainError("need at least one stage");
  ProductFormula f{p, stages, {}};
  if (p == 1) {
    for (int i = 1; i <= stages; ++i) f.schedule.push_back({i, 1.0});
  } else if (p == 2) {
    f.schedule = detail::strang(stages, 1.0);
  } else if (p == 4) {
    const double u = 1.0 / (4.0 - std::cbrt(4.0));
    for (double x : {u, u, 1 - 4 * u, u, u})
      for (auto& e : detail::strang(stages, x)) detail::push_merged(f.schedule, e);
  } else {
    throw DomainError("product formula order must be 1, 2 or 4");
  }
  return f;
}

struct CompositeSummary {
  std::string kind;
  std::uint64_t cost;
};

struct CompiledStep {
  Circuit circuit;
  std::uint64_t gateCount = 0;
  std::string method;
  double timeSlice = 0;
  bool countOnly = false;
  std::vector<CompositeSummary> composites;
};

// Collects gates, or only their cost when counting.
class Emitter {
 public:
  Emitter(int qubits, bool record) : record_(record), circuit_(record ? qubits : 0) {}

  void gate(Gate g) {
    count_ += gate_cost(g);
    if (record_) circuit_.add(std::move(g));
  }
  void pauli_exp(const PauliString& s, double theta) {
    if (record_) {
      auto before = circuit_.gates.size();
      append_pauli_exponential(circuit_, s, theta);
      for (auto i = before; i < circuit_.gates.size(); ++i) count_ += gate_cost(circuit_.gates[i]);
      return;
    }
    int act = 0, basis = 0;
    for (auto& [q, p] : s) {
      act += p != PauliKind::I;
      basis += (p == PauliKind::X || p == PauliKind::Y);
    }
    if (act == 1) count_ += 1;
    else if (act > 1) count_ += 2 * basis + 2 * (act - 1) + 1;
  }
  template <class MakePhase>
  void diagonal(const std::string& kind, std::vector<int> qubits, std::uint64_t cost, MakePhase&& make) {
    count_ += cost;
    composites_.push_back({kind, cost});
    if (record_)
      circuit_.add(CompositeDiagonalPhase{kind, std::move(qubits),
                                          std::make_shared<const std::function<double(std::uint64_t)>>(make()), cost});
  }
  void global_phase(double p) {
    if (record_) circuit_.globalPhase += p;
  }
  bool recording() const { return record_; }

  CompiledStep finish(std::string method, double t) {
    CompiledStep s;
    s.circuit = std::move(circuit_);
    s.gateCount = count_;
    s.method = std::move(method);
    s.timeSlice = t;
    s.countOnly = !record_;
    s.composites = std::move(composites_);
    return s;
  }

 private:
  bool record_;
  Circuit circuit_;
  std::uint64_t count_ = 0;
  std::vector<CompositeSummary> composites_;
};

// A unit is a set of mutually commuting terms; product formulas split between units.
using Unit = std::function<void(Emitter&, double)>;

namespace detail {

inline void run_formula(Emitter& e, const std::vector<Unit>& units, int order, double t) {
  if (units.empty()) return;
  auto f = make_product_formula(order, static_cast<int>(units.size()));
  for (auto& [stage, frac] : f.schedule) units[stage - 1](e, frac * t);
}

inline void check_mode(const HamiltonianSpec& spec, bool countOnly) {
  if (!countOnly) require_qubits(spec.n);
}

inline Unit term_unit(PauliPair pair, std::vector<std::tuple<int, int, double>> terms) {
  return [pair, terms = std::move(terms)](Emitter& e, double tau) {
    for (auto& [j, k, b] : terms) e.pauli_exp({{j - 1, pair.first}, {k - 1, pair.second}}, b * tau);
  };
}

// commuting terms share a unit, otherwise each term is its own unit
inline void add_term_units(std::vector<Unit>& units, PauliPair pair, std::vector<std::tuple<int, int, double>> terms) {
  if (terms.empty()) return;
  if (pair.first == pair.second) {
    units.push_back(term_unit(pair, std::move(terms)));
  } else {
    for (auto& t : terms) units.push_back(term_unit(pair, {t}));
  }
}

inline std::vector<std::tuple<int, int, double>> rect_terms(const CoeffMatrix& m, const Rect& r) {
  std::vector<std::tuple<int, int, double>> out;
  for (int u = r.uLo; u <= r.uHi; ++u)
    for (int v = std::max(r.vLo, u + 1); v <= r.vHi; ++v)
      if (m.at(u, v) != 0.0) out.push_back({u, v, m.at(u, v)});
  return out;
}

inline void add_onsite_units(std::vector<Unit>& units, const HamiltonianSpec& spec) {
  for (auto& [kind, v] : spec.onSite) {
    bool any = false;
    for (double x : v) any |= x != 0.0;
    if (!any) continue;
    units.push_back([kind = kind, v = v](Emitter& e, double tau) {
      for (std::size_t j = 0; j < v.size(); ++j)
        if (v[j] != 0.0) e.gate(PauliRotation{kind, static_cast<int>(j), 2 * v[j] * tau});
    });
  }
}

// basis change around a diagonal composite on a cross block
inline void cross_basis(Emitter& e, PauliPair pair, const Interval& l, const Interval& r, bool in) {
  for (int u = l.lo; u <= l.hi; ++u)
    if (pair.first == PauliKind::X) e.gate(Hadamard{u - 1});
    else if (pair.first == PauliKind::Y) e.gate(PauliRotation{PauliKind::X, u - 1, in ? M_PI / 2 : -M_PI / 2});
  for (int v = r.lo; v <= r.hi; ++v)
    if (pair.second == PauliKind::X) e.gate(Hadamard{v - 1});
    else if (pair.second == PauliKind::Y) e.gate(PauliRotation{PauliKind::X, v - 1, in ? M_PI / 2 : -M_PI / 2});
}

inline std::vector<int> cross_qubits(const Interval& l, const Interval& r) {
  std::vector<int> q;
  for (int u = l.lo; u <= l.hi; ++u) q.push_back(u - 1);
  for (int v = r.lo; v <= r.hi; ++v) q.push_back(v - 1);
  return q;
}

inline double spin(std::uint64_t x, int i) { return ((x >> i) & 1ULL) ? -1.0 : 1.0; }

}  // namespace detail

inline CompiledStep compile_sequential_step(const HamiltonianSpec& spec, double t, const ProductFormula& formula,
                                            bool countOnly = false) {
  detail::check_mode(spec, countOnly);
  std::vector<Unit> units;
  for (auto& [pair, m] : spec.twoLocal) detail::add_term_units(units, pair, detail::rect_terms(m, {1, spec.n, 1, spec.n}));
  detail::add_onsite_units(units, spec);
  Emitter e(spec.n, !countOnly);
  e.global_phase(-spec.identity * t);
  detail::run_formula(e, units, formula.order, t);
  return e.finish("sequential", t);
}

inline CompiledStep compile_lowrank_step(const HamiltonianSpec& spec, double t, double tol, int cutoff,
                                         const ProductFormula& formula, bool countOnly = false) {
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  detail::check_mode(spec, countOnly);
  auto d = lowrank_decompose(spec.n, cutoff);
  const int w = phase_register_width(spec.n, t, tol);
  std::vector<Unit> units;
  for (auto& [pair, m] : spec.twoLocal) {
    for (auto& blk : d.farField) {
      auto f = std::make_shared<const TruncatedFactor>(truncated_svd(extract_block(m, blk), tol));
      if (f->rank == 0) continue;
      const std::uint64_t cost = static_cast<std::uint64_t>(blk.left.length()) * f->rank * w;
      units.push_back([pair = pair, blk, f, cost](Emitter& e, double tau) {
        detail::cross_basis(e, pair, blk.left, blk.right, true);
        e.diagonal("rank_phase", detail::cross_qubits(blk.left, blk.right), cost, [f, tau, L = blk.left.length()] {
          return [f, tau, L](std::uint64_t x) {
            double s = 0;
            for (int r = 0; r < f->rank; ++r) {
              double a = 0, b = 0;
              for (int u = 0; u < f->left.rows(); ++u) a += f->left(u, r) * detail::spin(x, u);
              for (int v = 0; v < f->right.rows(); ++v) b += f->right(v, r) * detail::spin(x, L + v);
              s += f->singulars(r) * a * b;
            }
            return tau * s;
          };
        });
        detail::cross_basis(e, pair, blk.left, blk.right, false);
      });
    }
    for (auto& blk : d.nearField) {
      auto terms = detail::rect_terms(m, blk.rect());
      if (!terms.empty()) units.push_back(detail::term_unit(pair, std::move(terms)));
    }
    for (auto& iv : d.withinBlocks) detail::add_term_units(units, pair, detail::rect_terms(m, {iv.lo, iv.hi, iv.lo, iv.hi}));
  }
  detail::add_onsite_units(units, spec);
  Emitter e(spec.n, !countOnly);
  e.global_phase(-spec.identity * t);
  detail::run_formula(e, units, formula.order, t);
  return e.finish("lowrank", t);
}

inline CompiledStep compile_avgcost_step(const HamiltonianSpec& spec, double t, int m, const ProductFormula& formula,
                                         bool countOnly = false, double eps = 1e-3) {
  if (m < 1 || m > spec.n / 2) throw DomainError("subdivision count must lie in [1, n/2]");
  detail::check_mode(spec, countOnly);
  auto d = bisection_decompose(spec.n);
  const int w = phase_register_width(spec.n, t, eps);
  long long totalCells = 0;
  for (auto& p : d.pairs) totalCells += static_cast<long long>(std::min(m, p.left.length())) * std::min(m, p.left.length());
  totalCells *= std::max<std::size_t>(1, spec.twoLocal.size());
  const double epsCell = eps / static_cast<double>(totalCells);
  std::vector<Unit> units;
  for (auto& [pair, mat] : spec.twoLocal) {
    for (auto& p : d.pairs) {
      auto sub = subdivide(p.left.length(), std::min(m, p.left.length()));
      for (auto& cell : sub.cells) {
        Rect r = to_sites(p, cell.shifted);
        double one = restricted_1_norm(mat, r);
        if (one == 0.0) continue;
        double lam = static_cast<double>(r.cells()) * restricted_max_norm(mat, r) / one;
        Interval li{r.uLo, r.uHi}, ri{r.vLo, r.vHi};
        auto coeffs = std::make_shared<RealMatrix>(li.length(), ri.length());
        for (int u = r.uLo; u <= r.uHi; ++u)
          for (int v = r.vLo; v <= r.vHi; ++v) (*coeffs)(u - r.uLo, v - r.vLo) = mat.at(u, v);
        std::uint64_t perStep = selection_cost(li.length(), ri.length()) + preparation_cost(r.cells(), w, lam);
        units.push_back([pair = pair, li, ri, coeffs, one, perStep, epsCell](Emitter& e, double tau) {
          std::uint64_t cost = static_cast<std::uint64_t>(qubitization_step_count(one * std::abs(tau), epsCell)) * perStep;
          detail::cross_basis(e, pair, li, ri, true);
          e.diagonal("cell_evolution", detail::cross_qubits(li, ri), cost, [coeffs, tau] {
            return [coeffs, tau](std::uint64_t x) {
              const Eigen::Index a = coeffs->rows();
              double s = 0;
              for (Eigen::Index u = 0; u < a; ++u)
                for (Eigen::Index v = 0; v < coeffs->cols(); ++v)
                  s += (*coeffs)(u, v) * detail::spin(x, u) * detail::spin(x, a + v);
              return tau * s;
            };
          });
          detail::cross_basis(e, pair, li, ri, false);
        });
      }
    }
  }
  detail::add_onsite_units(units, spec);
  Emitter e(spec.n, !countOnly);
  e.global_phase(-spec.identity * t);
  detail::run_formula(e, units, formula.order, t);
  return e.finish("avgcost", t);
}

// Count model for the nested-box block-encoding method: one qubitized evolution per bisection pair.
inline CompiledStep compile_block_step_count(const HamiltonianSpec& spec, double t, double eps,
                                             const ProductFormula& formula) {
  auto d = bisection_decompose(spec.n);
  const int w = phase_register_width(spec.n, t, eps);
  const double epsPair = eps / static_cast<double>(d.pairs.size() * std::max<std::size_t>(1, spec.twoLocal.size()));
  std::vector<Unit> units;
  for (auto& [pair, mat] : spec.twoLocal)
    for (auto& p : d.pairs) {
      double one = restricted_1_norm(mat, p.rect());
      if (one == 0.0) continue;
      double box = box_1_norm(mat, p);
      long long cells = p.rect().cells();
      std::uint64_t perStep = selection_cost(p.left.length(), p.right.length()) + preparation_cost(cells, w, box / one);
      units.push_back([one, perStep, epsPair](Emitter& e, double tau) {
        e.diagonal("box_qubitization",
                   {}, static_cast<std::uint64_t>(qubitization_step_count(one * std::abs(tau), epsPair)) * perStep,
                   [] { return [](std::uint64_t) { return 0.0; }; });
      });
    }
  detail::add_onsite_units(units, spec);
  Emitter e(spec.n, false);
  detail::run_formula(e, units, formula.order, t);
  return e.finish("block", t);
}

inline nlohmann::json cost_sidecar(const CompiledStep& s) {
  nlohmann::json c = nlohmann::json::array();
  for (auto& x : s.composites) c.push_back({{"kind", x.kind}, {"cost", x.cost}});
  return {{"method", s.method}, {"gates", s.gateCount}, {"composites", c}};
}

// ---- Hamming-weight-2 reduction gadget ----

struct Hamming2Gadget {
  Circuit circuit;
  int n = 0;
  int regBits = 0;
  std::vector<int> jReg, kReg, unary;
  int flagLess = 0, flagGreater = 0;
  std::uint64_t overheadCost = 0;
  std::uint64_t evolutionCost = 0;
};

inline std::uint64_t comparator_cost(int bits) { return 4ULL * bits + 2; }
inline std::uint64_t binary_to_unary_cost(int n, int bits) { return 2ULL * n + 2ULL * bits; }

inline Hamming2Gadget compile_hamming2_reduction(const CoeffMatrix& coeffs, bool countOnly = false) {
  const int n = coeffs.size();
  if (n < 2 || !is_power_of_two(n)) throw DomainError("reduction needs n a power of two");
  Hamming2Gadget g;
  g.n = n;
  g.regBits = log2_exact(n);
  const int b = g.regBits;
  for (int i = 0; i < b; ++i) g.jReg.push_back(i), g.kReg.push_back(b + i);
  for (int i = 0; i < n; ++i) g.unary.push_back(2 * b + i);
  g.flagLess = 2 * b + n;
  g.flagGreater = 2 * b + n + 1;
  const int total = 2 * b + n + 2;
  if (!countOnly) require_qubits(total);
  g.circuit = Circuit(total, 2 * b);

  std::uint64_t nonzero = coeffs.nonzeros();
  const std::uint64_t ineqCost = comparator_cost(b), convCost = binary_to_unary_cost(n, b), evoCost = 3 * nonzero;

  auto add_perm = [&](std::string kind, std::vector<int> qs, std::uint64_t cost, auto fn) {
    g.overheadCost += cost;
    if (countOnly) return;
    auto tb = std::make_shared<std::vector<std::uint64_t>>(1ULL << qs.size());
    for (std::uint64_t x = 0; x < tb->size(); ++x) (*tb)[x] = fn(x);
    g.circuit.add(CompositePermutation{std::move(kind), std::move(qs), tb, cost});
  };
  // local layout for comparator: j bits, k bits, lt, gt
  auto ineq = [&] {
    std::vector<int> qs = g.jReg;
    qs.insert(qs.end(), g.kReg.begin(), g.kReg.end());
    qs.push_back(g.flagLess);
    qs.push_back(g.flagGreater);
    add_perm("inequality_test", qs, ineqCost, [b](std::uint64_t x) -> std::uint64_t {
      std::uint64_t j = x & ((1ULL << b) - 1), k = (x >> b) & ((1ULL << b) - 1);
      return x ^ (std::uint64_t(j < k) << (2 * b)) ^ (std::uint64_t(j > k) << (2 * b + 1));
    });
  };
  // layout: flag, a bits, c bits, unary; unary ^= e_a xor e_c when flag set
  auto convert = [&](int flag, const std::vector<int>& a, const std::vector<int>& c) {
    std::vector<int> qs{flag};
    qs.insert(qs.end(), a.begin(), a.end());
    qs.insert(qs.end(), c.begin(), c.end());
    qs.insert(qs.end(), g.unary.begin(), g.unary.end());
    add_perm("binary_to_unary", qs, convCost, [b](std::uint64_t x) -> std::uint64_t {
      if (!(x & 1)) return x;
      std::uint64_t av = (x >> 1) & ((1ULL << b) - 1), cv = (x >> (1 + b)) & ((1ULL << b) - 1);
      return x ^ (1ULL << (1 + 2 * b + av)) ^ (1ULL << (1 + 2 * b + cv));
    });
  };
  auto evolve = [&](int flag) {
    g.evolutionCost += evoCost;
    if (countOnly) return;
    std::vector<int> qs{flag};
    qs.insert(qs.end(), g.unary.begin(), g.unary.end());
    RealMatrix beta = coeffs.upper();
    auto fn = std::make_shared<const std::function<double(std::uint64_t)>>([beta, n](std::uint64_t x) {
      if (!(x & 1)) return 0.0;
      double s = 0;
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
          if (((x >> (1 + u)) & 1) && ((x >> (1 + v)) & 1)) s += 4 * beta(u, v);
      return s;
    });
    g.circuit.add(CompositeDiagonalPhase{"zz_evolution", qs, fn, evoCost});
  };

  ineq();
  convert(g.flagLess, g.jReg, g.kReg);
  evolve(g.flagLess);
  convert(g.flagLess, g.jReg, g.kReg);
  // j > k: same machinery with the registers swapped
  convert(g.flagGreater, g.kReg, g.jReg);
  evolve(g.flagGreater);
  convert(g.flagGreater, g.kReg, g.jReg);
  ineq();
  return g;
}

}  // namespace trotterforge
