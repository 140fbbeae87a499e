#pragma once

#include "circuit.hpp"
#include "decomp.hpp"

namespace trotterforge {

// G1^dagger U G0 = H / lambda. Ancilla index is the slow (leading) factor.
struct BlockEncoding {
  Matrix G0, G1;
  Matrix U;
  double lambda = 1.0;
  bool hermitian = true;

  Eigen::Index system_dim() const { return G0.cols(); }
  Matrix encoded() const { return G1.adjoint() * U * G0; }
};

struct LcuTerm {
  double weight;
  Matrix unitary;
};

inline BlockEncoding build_lcu_encoding(const std::vector<LcuTerm>& terms) {
  if (terms.empty()) throw DomainError("LCU needs at least one term");
  const Eigen::Index d = terms[0].unitary.rows();
  const Eigen::Index big = d * static_cast<Eigen::Index>(terms.size());
  if (big > (Eigen::Index(1) << kMaxQubits)) throw CapacityError("LCU dimension exceeds the dense cap");
  double lambda = 0;
  for (auto& t : terms) {
    if (!(t.weight > 0)) throw DomainError("LCU weights must be positive");
    if (t.unitary.rows() != d || t.unitary.cols() != d) throw ValidationError("LCU unitaries differ in shape");
    lambda += t.weight;
  }
  BlockEncoding e;
  e.lambda = lambda;
  e.G0 = Matrix::Zero(big, d);
  e.U = Matrix::Zero(big, big);
  bool herm = true;
  for (std::size_t g = 0; g < terms.size(); ++g) {
    e.G0.block(g * d, 0, d, d) = std::sqrt(terms[g].weight / lambda) * Matrix::Identity(d, d);
    e.U.block(g * d, g * d, d, d) = terms[g].unitary;
    herm = herm && (terms[g].unitary - terms[g].unitary.adjoint()).cwiseAbs().maxCoeff() < 1e-12;
  }
  e.G1 = e.G0;
  Matrix enc = e.encoded();
  e.hermitian = (enc - enc.adjoint()).cwiseAbs().maxCoeff() < 1e-10;
  (void)herm;
  return e;
}

// (X (x) I)(|0><0| U + |1><1| U^dagger)(2 |G><G| - I), |G> = (|0>G0 + |1>G1)/sqrt2.
// literalSign uses I - 2|G><G| instead, i.e. -V, whose phases are +-arccos(-E).
inline Matrix walk_operator(const BlockEncoding& e, bool literalSign = false) {
  if (!e.hermitian) throw ValidationError("walk operator needs a Hermitian encoding");
  const Eigen::Index h = e.U.rows();
  if (2 * h > (Eigen::Index(1) << kMaxQubits)) throw CapacityError("walk operator exceeds the dense cap");
  Matrix pi(2 * h, e.system_dim());
  pi << e.G0, e.G1;
  pi /= std::sqrt(2.0);
  Matrix refl = 2.0 * pi * pi.adjoint() - Matrix::Identity(2 * h, 2 * h);
  if (literalSign) refl = -refl;
  Matrix sel = Matrix::Zero(2 * h, 2 * h);
  sel.topLeftCorner(h, h) = e.U;
  sel.bottomRightCorner(h, h) = e.U.adjoint();
  Matrix v(2 * h, 2 * h);
  v.topRows(h) = (sel * refl).bottomRows(h);
  v.bottomRows(h) = (sel * refl).topRows(h);
  return v;
}

// Subspace the walk acts on nontrivially: span{Pi psi, V Pi psi}.
inline Matrix walk_invariant_basis(const BlockEncoding& e, const Matrix& v) {
  const Eigen::Index h = e.U.rows();
  Matrix pi(2 * h, e.system_dim());
  pi << e.G0, e.G1;
  pi /= std::sqrt(2.0);
  Matrix span(2 * h, 2 * pi.cols());
  span << pi, v * pi;
  Eigen::JacobiSVD<Matrix> svd(span, Eigen::ComputeThinU);
  int r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > 1e-9) ++r;
  return svd.matrixU().leftCols(r);
}

inline int qubitization_step_count(double tau, double eps) {
  if (!(eps > 0) || eps >= 1) throw DomainError("accuracy must lie in (0,1)");
  if (!(tau >= 0)) throw DomainError("effective time must be nonnegative");
  double x = std::max(2.0, std::exp(1.0) * tau + std::log(1.0 / eps));
  long long r = static_cast<long long>(std::ceil(x - 1e-12));
  if (r % 2) ++r;
  return static_cast<int>(r);
}

// ---- boxed preparation over a balanced cross block ----

struct PreparationConfig {
  std::optional<double> xi;  // inequality-test resolution; empty means exact
  int amplificationSteps = 0;
};

struct SelectionEntry {
  int u, v;  // sites
  double sign;
};

struct BoxedPreparation {
  Vector state;         // (cell, flag) with flag as the low bit
  Vector postselected;  // flag 0 branch, normalized
  std::vector<SelectionEntry> layout;
  std::vector<int> cellBox;  // box index for each layout entry
  double successProbability = 0;
  double encodingError = 0;   // sum |beta - beta~|
  double errorBound = 0;      // cells * max / Xi
  double box1 = 0;
  bool degenerate = false;
};

inline BoxedPreparation build_boxed_preparation(const CoeffMatrix& m, const IntervalPair& p,
                                                const PreparationConfig& cfg = {}) {
  if (p.left.length() != p.right.length() || p.left.hi + 1 != p.right.lo)
    throw DomainError("boxed preparation needs a bisection pair");
  if (cfg.xi && *cfg.xi < 2) throw DomainError("Xi must be at least 2");
  if (cfg.amplificationSteps < 0) throw DomainError("amplification steps must be nonnegative");
  BoxedPreparation out;
  BoxGrid g = box_grid(p.left.length());
  std::vector<double> amp2;
  for (std::size_t bi = 0; bi < g.boxes.size(); ++bi) {
    Rect r = to_sites(p, g.boxes[bi].shifted);
    if (r.cells() == 0) continue;
    double mx = restricted_max_norm(m, r);
    out.box1 += mx * r.cells();
    for (int u = r.uLo; u <= r.uHi; ++u)
      for (int v = r.vLo; v <= r.vHi; ++v) {
        double b = m.sym(u, v), a = std::abs(b);
        double at = a;
        if (cfg.xi && mx > 0) {
          at = mx * std::ceil(*cfg.xi * a / mx) / *cfg.xi;
          if (at > mx) at = mx;
          out.errorBound += mx / *cfg.xi;
        }
        out.encodingError += std::abs(at - a);
        out.layout.push_back({u, v, b < 0 ? -1.0 : 1.0});
        out.cellBox.push_back(static_cast<int>(bi));
        amp2.push_back(at);
        amp2.push_back(mx - at);
      }
  }
  if (out.box1 == 0.0) {
    out.degenerate = true;
    out.state = Vector();
    return out;
  }
  out.state.resize(amp2.size());
  for (std::size_t i = 0; i < amp2.size(); ++i) out.state(i) = std::sqrt(std::max(0.0, amp2[i]) / out.box1);
  double succ = 0;
  for (Eigen::Index i = 0; i < out.state.size(); i += 2) succ += std::norm(out.state(i));
  out.successProbability = succ;
  out.postselected = Vector::Zero(out.state.size() / 2);
  for (Eigen::Index i = 0; i < out.postselected.size(); ++i) out.postselected(i) = out.state(2 * i);
  if (succ > 0) out.postselected /= std::sqrt(succ);
  return out;
}

// sum_idx |idx><idx| (x) sign Z_u Z_v, qubits given per entry; indices past the entries act as identity
inline Matrix build_selection(const std::vector<SelectionEntry>& entries, int indexDim, int systemQubits,
                              int siteOffset = 1) {
  if (indexDim < static_cast<int>(entries.size())) throw DomainError("index register too small");
  const Eigen::Index sd = Eigen::Index(1) << systemQubits;
  if (indexDim * sd > (Eigen::Index(1) << kMaxQubits)) throw CapacityError("selection exceeds the dense cap");
  Matrix s = Matrix::Identity(indexDim * sd, indexDim * sd);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    int qu = entries[i].u - siteOffset, qv = entries[i].v - siteOffset;
    if (qu < 0 || qv < 0 || qu >= systemQubits || qv >= systemQubits) throw IndexError("selection site out of range");
    for (Eigen::Index x = 0; x < sd; ++x) {
      int par = ((x >> qu) & 1) ^ ((x >> qv) & 1);
      s(i * sd + x, i * sd + x) = entries[i].sign * (par ? -1.0 : 1.0);
    }
  }
  return s;
}

// ---- cost model shared with the compilers ----

inline std::uint64_t selection_cost(int leftLen, int rightLen) {
  int side = leftLen + rightLen;
  return 2ULL * side * std::max(1, ceil_log2(side));
}

inline std::uint64_t preparation_cost(long long cells, int width, double lambdaRatio) {
  auto amp = static_cast<std::uint64_t>(std::ceil(std::sqrt(std::max(1.0, lambdaRatio)) - 1e-12));
  return amp * (4ULL * std::max(1, ceil_log2(cells)) + 2ULL * width);
}

inline int phase_register_width(int n, double t, double eps) {
  return std::max(1, ceil_log2(static_cast<long long>(std::ceil(n * std::abs(t) / eps)))) + 4;
}

}  // namespace trotterforge
