#pragma once

#include "hamlib.hpp"

#include <memory>
#include <sstream>
#include <variant>

namespace trotterforge {

// exp(-i angle/2 sigma)
struct PauliRotation {
  PauliKind axis;
  int qubit;
  double angle;
};
struct Hadamard {
  int qubit;
};
struct PhaseS {
  int qubit;
  bool adjoint = false;
};
struct CNOT {
  int control, target;
};
struct CZ {
  int a, b;
};
// diag(1,1,1,e^{i angle})
struct ControlledPhase {
  int control, target;
  double angle;
};
// |x> -> exp(-i phase(x)) |x>, x packed from qubits (bit i <- qubits[i])
struct CompositeDiagonalPhase {
  std::string kind;
  std::vector<int> qubits;
  std::shared_ptr<const std::function<double(std::uint64_t)>> phase;
  std::uint64_t cost = 0;
  double sign = 1.0;
};
// maps |0..0> to the normalized target amplitudes
struct CompositeStatePrep {
  std::vector<int> qubits;
  Vector amplitudes;
  std::uint64_t cost = 0;
  bool adjoint = false;
};
// reversible classical map on the local register
struct CompositePermutation {
  std::string kind;
  std::vector<int> qubits;
  std::shared_ptr<const std::vector<std::uint64_t>> table;
  std::uint64_t cost = 0;
};

using Gate = std::variant<PauliRotation, Hadamard, PhaseS, CNOT, CZ, ControlledPhase, CompositeDiagonalPhase,
                          CompositeStatePrep, CompositePermutation>;

inline std::uint64_t gate_cost(const Gate& g) {
  return std::visit(
      [](auto& x) -> std::uint64_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, CompositeDiagonalPhase> || std::is_same_v<T, CompositeStatePrep> ||
                      std::is_same_v<T, CompositePermutation>)
          return x.cost;
        else
          return 1;
      },
      g);
}

inline std::vector<int> gate_qubits(const Gate& g) {
  return std::visit(
      [](auto& x) -> std::vector<int> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PauliRotation> || std::is_same_v<T, Hadamard> || std::is_same_v<T, PhaseS>)
          return {x.qubit};
        else if constexpr (std::is_same_v<T, CNOT> || std::is_same_v<T, ControlledPhase>)
          return {x.control, x.target};
        else if constexpr (std::is_same_v<T, CZ>)
          return {x.a, x.b};
        else
          return x.qubits;
      },
      g);
}

struct Circuit {
  int qubitCount = 0;
  int systemQubits = 0;
  std::vector<Gate> gates;
  double globalPhase = 0.0;  // overall factor exp(i globalPhase)

  Circuit() = default;
  explicit Circuit(int q, int sys = -1) : qubitCount(q), systemQubits(sys < 0 ? q : sys) {}

  void add(Gate g) {
    auto qs = gate_qubits(g);
    for (std::size_t a = 0; a < qs.size(); ++a) {
      if (qs[a] < 0 || qs[a] >= qubitCount) throw IndexError("gate qubit out of range");
      for (std::size_t b = a + 1; b < qs.size(); ++b)
        if (qs[a] == qs[b]) throw ValidationError("gate acts twice on one qubit");
    }
    std::visit(
        [](auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, PauliRotation> || std::is_same_v<T, ControlledPhase>)
            if (!std::isfinite(x.angle)) throw ValidationError("non-finite angle");
        },
        g);
    gates.push_back(std::move(g));
  }
  void append(const Circuit& o) {
    if (o.qubitCount > qubitCount) throw DimensionError("appended circuit is wider");
    for (auto& g : o.gates) gates.push_back(g);
    globalPhase += o.globalPhase;
  }
  std::uint64_t cost() const {
    std::uint64_t s = 0;
    for (auto& g : gates) s += gate_cost(g);
    return s;
  }
};

// ---- simulation on a block of column states ----

namespace detail {

inline std::uint64_t gather(std::uint64_t x, const std::vector<int>& qs) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < qs.size(); ++i) r |= ((x >> qs[i]) & 1ULL) << i;
  return r;
}
inline std::uint64_t scatter(std::uint64_t x, const std::vector<int>& qs, std::uint64_t local) {
  for (std::size_t i = 0; i < qs.size(); ++i) {
    std::uint64_t m = 1ULL << qs[i];
    x = (local >> i) & 1ULL ? (x | m) : (x & ~m);
  }
  return x;
}

inline void apply_1q(Matrix& s, int q, const Eigen::Matrix2cd& u) {
  const Eigen::Index dim = s.rows();
  const std::uint64_t m = 1ULL << q;
  for (Eigen::Index c = 0; c < s.cols(); ++c)
    for (std::uint64_t x = 0; x < static_cast<std::uint64_t>(dim); ++x) {
      if (x & m) continue;
      cplx a = s(x, c), b = s(x | m, c);
      s(x, c) = u(0, 0) * a + u(0, 1) * b;
      s(x | m, c) = u(1, 0) * a + u(1, 1) * b;
    }
}

inline void apply_local(Matrix& s, const std::vector<int>& qs, const Matrix& u) {
  const std::uint64_t dim = s.rows(), ld = 1ULL << qs.size();
  std::uint64_t mask = 0;
  for (int q : qs) mask |= 1ULL << q;
  Vector in(ld), out(ld);
  for (Eigen::Index c = 0; c < s.cols(); ++c)
    for (std::uint64_t base = 0; base < dim; ++base) {
      if (base & mask) continue;
      for (std::uint64_t l = 0; l < ld; ++l) in(l) = s(scatter(base, qs, l), c);
      out.noalias() = u * in;
      for (std::uint64_t l = 0; l < ld; ++l) s(scatter(base, qs, l), c) = out(l);
    }
}

// unitary whose first column is psi (Householder)
inline Matrix completion_unitary(const Vector& psi) {
  const Eigen::Index d = psi.size();
  cplx ph = std::abs(psi(0)) > 0 ? psi(0) / std::abs(psi(0)) : cplx(1, 0);
  Vector x = Vector::Zero(d);
  x(0) = ph;
  Vector w = x - psi;
  Matrix r = Matrix::Identity(d, d);
  double nw = w.squaredNorm();
  if (nw > 1e-300) r -= 2.0 * w * w.adjoint() / nw;
  Matrix dph = Matrix::Identity(d, d);
  dph(0, 0) = ph;
  return r * dph;
}

}  // namespace detail

inline Eigen::Matrix2cd rotation_matrix(PauliKind axis, double angle) {
  return std::cos(angle / 2) * Eigen::Matrix2cd::Identity() - cplx(0, std::sin(angle / 2)) * pauli_matrix(axis);
}

inline void apply_gate(const Gate& g, Matrix& s) {
  const std::uint64_t dim = s.rows();
  std::visit(
      [&](auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PauliRotation>) {
          detail::apply_1q(s, x.qubit, rotation_matrix(x.axis, x.angle));
        } else if constexpr (std::is_same_v<T, Hadamard>) {
          Eigen::Matrix2cd h;
          h << 1, 1, 1, -1;
          detail::apply_1q(s, x.qubit, h / std::sqrt(2.0));
        } else if constexpr (std::is_same_v<T, PhaseS>) {
          const std::uint64_t m = 1ULL << x.qubit;
          cplx f = x.adjoint ? cplx(0, -1) : cplx(0, 1);
          for (std::uint64_t i = 0; i < dim; ++i)
            if (i & m) s.row(i) *= f;
        } else if constexpr (std::is_same_v<T, CNOT>) {
          const std::uint64_t c = 1ULL << x.control, t = 1ULL << x.target;
          for (std::uint64_t i = 0; i < dim; ++i)
            if ((i & c) && !(i & t)) s.row(i).swap(s.row(i | t));
        } else if constexpr (std::is_same_v<T, CZ>) {
          const std::uint64_t m = (1ULL << x.a) | (1ULL << x.b);
          for (std::uint64_t i = 0; i < dim; ++i)
            if ((i & m) == m) s.row(i) *= -1.0;
        } else if constexpr (std::is_same_v<T, ControlledPhase>) {
          const std::uint64_t m = (1ULL << x.control) | (1ULL << x.target);
          cplx f = std::polar(1.0, x.angle);
          for (std::uint64_t i = 0; i < dim; ++i)
            if ((i & m) == m) s.row(i) *= f;
        } else if constexpr (std::is_same_v<T, CompositeDiagonalPhase>) {
          // cache per local pattern, the phase function may be expensive
          const std::uint64_t ld = 1ULL << x.qubits.size();
          std::vector<cplx> f(ld);
          for (std::uint64_t l = 0; l < ld; ++l) f[l] = std::polar(1.0, -x.sign * (*x.phase)(l));
          for (std::uint64_t i = 0; i < dim; ++i) s.row(i) *= f[detail::gather(i, x.qubits)];
        } else if constexpr (std::is_same_v<T, CompositeStatePrep>) {
          Matrix u = detail::completion_unitary(x.amplitudes);
          detail::apply_local(s, x.qubits, x.adjoint ? Matrix(u.adjoint()) : u);
        } else if constexpr (std::is_same_v<T, CompositePermutation>) {
          const auto& tb = *x.table;
          Matrix old = s;
          for (std::uint64_t i = 0; i < dim; ++i) {
            std::uint64_t j = detail::scatter(i, x.qubits, tb[detail::gather(i, x.qubits)]);
            s.row(j) = old.row(i);
          }
        }
      },
      g);
}

inline Gate inverse(const Gate& g) {
  return std::visit(
      [](auto x) -> Gate {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PauliRotation> || std::is_same_v<T, ControlledPhase>) {
          x.angle = -x.angle;
        } else if constexpr (std::is_same_v<T, PhaseS> || std::is_same_v<T, CompositeStatePrep>) {
          x.adjoint = !x.adjoint;
        } else if constexpr (std::is_same_v<T, CompositeDiagonalPhase>) {
          x.sign = -x.sign;
        } else if constexpr (std::is_same_v<T, CompositePermutation>) {
          auto inv = std::make_shared<std::vector<std::uint64_t>>(x.table->size());
          for (std::size_t i = 0; i < x.table->size(); ++i) (*inv)[(*x.table)[i]] = i;
          x.table = inv;
        }
        return x;
      },
      g);
}

inline Circuit inverse(const Circuit& c) {
  Circuit r(c.qubitCount, c.systemQubits);
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) r.gates.push_back(inverse(*it));
  r.globalPhase = -c.globalPhase;
  return r;
}

inline void simulate(const Circuit& c, Matrix& states) {
  if (states.rows() != (Eigen::Index(1) << c.qubitCount)) throw DimensionError("state dimension mismatch");
  for (auto& g : c.gates) apply_gate(g, states);
  if (c.globalPhase != 0.0) states *= std::polar(1.0, c.globalPhase);
}

inline Vector simulate(const Circuit& c, const Vector& psi) {
  Matrix s = psi;
  simulate(c, s);
  return s.col(0);
}

inline Matrix circuit_to_unitary(const Circuit& c) {
  require_qubits(c.qubitCount);
  Matrix u = Matrix::Identity(Eigen::Index(1) << c.qubitCount, Eigen::Index(1) << c.qubitCount);
  simulate(c, u);
  return u;
}

// ---- Hamiltonians as dense matrices ----

// sigma on qubit q acting on |x>: returns (phase, flipped index)
inline std::pair<cplx, std::uint64_t> pauli_on_basis(PauliKind p, int q, std::uint64_t x) {
  const bool bit = (x >> q) & 1ULL;
  switch (p) {
    case PauliKind::I: return {1.0, x};
    case PauliKind::X: return {1.0, x ^ (1ULL << q)};
    case PauliKind::Y: return {bit ? cplx(0, -1) : cplx(0, 1), x ^ (1ULL << q)};
    case PauliKind::Z: return {bit ? -1.0 : 1.0, x};
  }
  return {1.0, x};
}

// site j lives on qubit j-1
inline Matrix hamiltonian_matrix(const HamiltonianSpec& spec) {
  require_qubits(spec.n);
  const std::uint64_t dim = 1ULL << spec.n;
  Matrix h = Matrix::Zero(dim, dim);
  for (std::uint64_t x = 0; x < dim; ++x) h(x, x) += spec.identity;
  for (auto& [pair, m] : spec.twoLocal)
    for (int j = 1; j <= spec.n; ++j)
      for (int k = j + 1; k <= spec.n; ++k) {
        double b = m.at(j, k);
        if (b == 0.0) continue;
        for (std::uint64_t x = 0; x < dim; ++x) {
          auto [p1, y] = pauli_on_basis(pair.second, k - 1, x);
          auto [p2, z] = pauli_on_basis(pair.first, j - 1, y);
          h(z, x) += b * p1 * p2;
        }
      }
  for (auto& [kind, v] : spec.onSite)
    for (int j = 1; j <= spec.n; ++j) {
      if (v[j - 1] == 0.0) continue;
      for (std::uint64_t x = 0; x < dim; ++x) {
        auto [p, y] = pauli_on_basis(kind, j - 1, x);
        h(y, x) += v[j - 1] * p;
      }
    }
  return h;
}

inline Matrix evolve_hermitian(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector ph(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) ph(i) = std::polar(1.0, -t * es.eigenvalues()(i));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

inline Matrix exact_evolution(const HamiltonianSpec& spec, double t) {
  require_qubits(spec.n);
  Matrix h = hamiltonian_matrix(spec);
  if (spec.is_diagonal()) {
    Matrix u = Matrix::Zero(h.rows(), h.cols());
    for (Eigen::Index i = 0; i < h.rows(); ++i) u(i, i) = std::polar(1.0, -t * h(i, i).real());
    return u;
  }
  return evolve_hermitian(h, t);
}

// ---- distances ----

inline void same_shape(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) throw ValidationError("matrix shapes differ");
}

inline double spectral_distance(const Matrix& u, const Matrix& v) {
  same_shape(u, v);
  return spectral_norm(Matrix(u - v));
}

inline double phase_minimized_distance(const Matrix& u, const Matrix& v) {
  same_shape(u, v);
  // start from the phase aligning the traces, then refine by golden section
  cplx tr = (v.adjoint() * u).trace();
  double phi0 = std::abs(tr) > 0 ? std::arg(tr) : 0.0;
  auto f = [&](double p) { return spectral_norm(Matrix(u - std::polar(1.0, p) * v)); };
  double a = phi0 - 0.5, b = phi0 + 0.5;
  const double g = (std::sqrt(5.0) - 1) / 2;
  double c = b - g * (b - a), d = a + g * (b - a), fc = f(c), fd = f(d);
  for (int it = 0; it < 60; ++it) {
    if (fc < fd) {
      b = d, d = c, fd = fc, c = b - g * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd, d = a + g * (b - a), fd = f(d);
    }
  }
  return std::min({fc, fd, f(phi0)});
}

inline std::vector<std::uint64_t> hamming_weight_states(int n, int eta) {
  if (eta < 0 || eta > n) throw DomainError("Hamming weight out of range");
  std::vector<std::uint64_t> out;
  for (std::uint64_t x = 0; x < (1ULL << n); ++x)
    if (std::popcount(x) == eta) out.push_back(x);
  return out;
}

struct SubspaceProjector {
  int n = 0;
  int eta = 0;
  std::vector<std::uint64_t> basis;
  SubspaceProjector(int n_, int eta_) : n(n_), eta(eta_), basis(hamming_weight_states(n_, eta_)) {}
  Matrix matrix() const {
    Matrix p = Matrix::Zero(1LL << n, 1LL << n);
    for (auto x : basis) p(x, x) = 1.0;
    return p;
  }
  Matrix restrict(const Matrix& a) const {
    Matrix r(basis.size(), basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j) r(i, j) = a(basis[i], basis[j]);
    return r;
  }
};

inline double subspace_distance(const Matrix& u, const Matrix& v, int eta) {
  same_shape(u, v);
  int n = ceil_log2(u.rows());
  if ((Eigen::Index(1) << n) != u.rows()) throw ValidationError("dimension is not a power of two");
  SubspaceProjector p(n, eta);
  return spectral_norm(p.restrict(Matrix(u - v)));
}

// ---- Pauli string exponential exp(-i theta P) via a CNOT ladder ----

using PauliString = std::vector<std::pair<int, PauliKind>>;

inline void basis_in(Circuit& c, int q, PauliKind p) {
  if (p == PauliKind::X) c.add(Hadamard{q});
  if (p == PauliKind::Y) c.add(PauliRotation{PauliKind::X, q, M_PI / 2});
}
inline void basis_out(Circuit& c, int q, PauliKind p) {
  if (p == PauliKind::X) c.add(Hadamard{q});
  if (p == PauliKind::Y) c.add(PauliRotation{PauliKind::X, q, -M_PI / 2});
}

inline void append_pauli_exponential(Circuit& c, const PauliString& s, double theta) {
  if (s.empty()) throw ValidationError("empty Pauli string");
  std::vector<std::pair<int, PauliKind>> act;
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = a + 1; b < s.size(); ++b)
      if (s[a].first == s[b].first) throw ValidationError("duplicate qubit in Pauli string");
    if (s[a].second != PauliKind::I) act.push_back(s[a]);
  }
  if (act.empty()) {
    c.globalPhase -= theta;
    return;
  }
  if (act.size() == 1) {
    c.add(PauliRotation{act[0].second, act[0].first, 2 * theta});
    return;
  }
  for (auto& [q, p] : act) basis_in(c, q, p);
  for (std::size_t i = 0; i + 1 < act.size(); ++i) c.add(CNOT{act[i].first, act[i + 1].first});
  c.add(PauliRotation{PauliKind::Z, act.back().first, 2 * theta});
  for (std::size_t i = act.size() - 1; i-- > 0;) c.add(CNOT{act[i].first, act[i + 1].first});
  for (auto& [q, p] : act) basis_out(c, q, p);
}

inline Circuit pauli_string_exponential(const PauliString& s, double theta, int qubitCount = -1) {
  int q = qubitCount;
  if (q < 0)
    for (auto& e : s) q = std::max(q, e.first + 1);
  Circuit c(q);
  append_pauli_exponential(c, s, theta);
  return c;
}

// ---- text export ----

inline std::string to_text(const Circuit& c) {
  std::ostringstream o;
  o.precision(17);
  auto axis = [](PauliKind p) { return std::string("R") + char(std::toupper(pauli_char(p))); };
  for (auto& g : c.gates)
    std::visit(
        [&](auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, PauliRotation>) o << axis(x.axis) << ' ' << x.qubit << ',' << x.angle;
          else if constexpr (std::is_same_v<T, Hadamard>) o << "H " << x.qubit;
          else if constexpr (std::is_same_v<T, PhaseS>) o << (x.adjoint ? "SDG " : "S ") << x.qubit;
          else if constexpr (std::is_same_v<T, CNOT>) o << "CNOT " << x.control << ',' << x.target;
          else if constexpr (std::is_same_v<T, CZ>) o << "CZ " << x.a << ',' << x.b;
          else if constexpr (std::is_same_v<T, ControlledPhase>)
            o << "CPHASE " << x.control << ',' << x.target << ',' << x.angle;
          else {
            std::string kind;
            if constexpr (std::is_same_v<T, CompositeStatePrep>) kind = "state_prep";
            else kind = x.kind;
            o << "COMPOSITE " << kind << " cost=" << x.cost << " qubits=";
            for (std::size_t i = 0; i < x.qubits.size(); ++i) o << (i ? "," : "") << x.qubits[i];
          }
          o << '\n';
        },
        g);
  return o.str();
}

}  // namespace trotterforge
