#pragma once

#include "hamlib.hpp"

namespace trotterforge {

struct Interval {
  int lo = 1, hi = 1;
  int length() const { return hi - lo + 1; }
  bool operator==(const Interval&) const = default;
};

enum class PairKind { far, near, within };

inline const char* kind_name(PairKind k) {
  switch (k) {
    case PairKind::far: return "far";
    case PairKind::near: return "near";
    default: return "within";
  }
}

struct IntervalPair {
  int layer = 0;
  int block = 0;
  Interval left, right;
  PairKind kind = PairKind::near;
  Rect rect() const { return {left.lo, left.hi, right.lo, right.hi}; }
  int gap() const { return right.lo - left.hi - 1; }
};

struct BisectionDecomposition {
  int n = 0;
  std::vector<IntervalPair> pairs;
};

struct LowRankDecomposition {
  int n = 0;
  int cutoff = 1;
  std::vector<IntervalPair> farField;
  std::vector<IntervalPair> nearField;
  std::vector<Interval> withinBlocks;
};

inline BisectionDecomposition bisection_decompose(int n) {
  if (n < 2 || !is_power_of_two(n)) throw DomainError("bisection needs n a power of two, n >= 2");
  BisectionDecomposition d{n, {}};
  int layers = log2_exact(n);
  for (int l = 1; l <= layers; ++l) {
    int half = n >> l;
    for (int b = 0; b < (1 << (l - 1)); ++b) {
      int lo = 2 * b * half + 1;
      d.pairs.push_back({l, b, {lo, lo + half - 1}, {lo + half, lo + 2 * half - 1}, PairKind::near});
    }
  }
  return d;
}

// Far blocks at each level come in threes per parent pair; near/within only at the cutoff.
inline LowRankDecomposition lowrank_decompose(int n, int cutoff) {
  if (n < 2 || !is_power_of_two(n)) throw DomainError("lowrank decomposition needs n a power of two");
  if (cutoff < 1 || !is_power_of_two(cutoff) || cutoff > std::max(1, n / 4))
    throw DomainError("cutoff must be a power of two in [1, n/4]");
  LowRankDecomposition d;
  d.n = n;
  d.cutoff = cutoff;
  for (int len = n / 4, l = 2; len >= cutoff && len >= 1; len /= 2, ++l) {
    int blocks = n / len;  // intervals at this level
    for (int b = 0; b + 1 < blocks / 2; ++b) {
      auto iv = [&](int i) { return Interval{i * len + 1, (i + 1) * len}; };
      d.farField.push_back({l, b, iv(2 * b), iv(2 * b + 2), PairKind::far});
      d.farField.push_back({l, b, iv(2 * b), iv(2 * b + 3), PairKind::far});
      d.farField.push_back({l, b, iv(2 * b + 1), iv(2 * b + 3), PairKind::far});
    }
  }
  int blocks = n / cutoff;
  int lastLayer = log2_exact(n / cutoff);
  for (int i = 0; i + 1 < blocks; ++i)
    d.nearField.push_back({lastLayer, i, {i * cutoff + 1, (i + 1) * cutoff}, {(i + 1) * cutoff + 1, (i + 2) * cutoff},
                           PairKind::near});
  for (int i = 0; i < blocks; ++i) d.withinBlocks.push_back({i * cutoff + 1, (i + 1) * cutoff});
  return d;
}

// ---- nested boxes on the shifted cross rectangle u in [-L,-1], v in [1,L] ----

struct Box {
  int mu = -1, nu = -1;  // -1 marks a boundary strip
  Rect shifted;          // in (u,v) coordinates
  bool boundary = false;
};

struct BoxGrid {
  int halfSize = 0;
  std::vector<Box> boxes;
};

inline BoxGrid box_grid(int halfSize) {
  if (halfSize < 1 || !is_power_of_two(halfSize)) throw DomainError("halfSize must be a power of two");
  BoxGrid g{halfSize, {}};
  int levels = log2_exact(halfSize);
  for (int mu = 0; mu < levels; ++mu)
    for (int nu = 0; nu < levels; ++nu)
      g.boxes.push_back({mu, nu, {-(1 << (mu + 1)) + 1, -(1 << mu), 1 << nu, (1 << (nu + 1)) - 1}, false});
  // leftover row u=-L and column v=L
  g.boxes.push_back({-1, -1, {-halfSize, -halfSize, 1, halfSize}, true});
  if (halfSize > 1) g.boxes.push_back({-1, -1, {-halfSize + 1, -1, halfSize, halfSize}, true});
  return g;
}

inline BoxGrid nested_boxes(int halfSize) {
  if (halfSize < 2) throw DomainError("nested_boxes needs halfSize >= 2");
  return box_grid(halfSize);
}

inline int dyadic_box_count(const BoxGrid& g) {
  int c = 0;
  for (auto& b : g.boxes) c += !b.boundary;
  return c;
}

// maps a shifted rectangle into site indices of a balanced cross pair
inline Rect to_sites(const IntervalPair& p, const Rect& s) {
  int mid = p.left.hi;
  return {mid + 1 + s.uLo, mid + 1 + s.uHi, mid + s.vLo, mid + s.vHi};
}

struct Cell {
  int j, k;
  Rect shifted;
};

struct Subdivision {
  int m = 0;
  int halfSize = 0;
  std::vector<int> cuts;  // l_1 .. l_{m+1}
  std::vector<Cell> cells;
};

inline Subdivision subdivide(int halfSize, int m) {
  if (halfSize < 1) throw DomainError("halfSize must be positive");
  if (m < 1 || m > halfSize) throw DomainError("subdivision count must be in [1, halfSize]");
  Subdivision s{m, halfSize, {}, {}};
  for (int j = 1; j <= m + 1; ++j) s.cuts.push_back(1 + static_cast<int>((static_cast<long long>(j - 1) * halfSize) / m));
  for (int j = 1; j <= m; ++j)
    for (int k = 1; k <= m; ++k)
      s.cells.push_back({j, k, {-s.cuts[j] + 1, -s.cuts[j - 1], s.cuts[k - 1], s.cuts[k] - 1}});
  return s;
}

// ---- amplification ratios ----

struct RatioRow {
  PauliPair pair;
  int layer, block;
  int cellJ = 0, cellK = 0;  // zero for whole-block rows
  double ratio;
};

struct AmplificationReport {
  double lambdaBlock = 1.0;
  double lambdaAvg = 1.0;
  std::vector<RatioRow> rows;
};

inline double box_1_norm(const CoeffMatrix& m, const IntervalPair& p) {
  BoxGrid g = box_grid(p.left.length());
  std::vector<Rect> rects;
  for (auto& b : g.boxes) rects.push_back(to_sites(p, b.shifted));
  return box_1_norm(m, rects);
}

inline AmplificationReport amplification_ratios(const HamiltonianSpec& spec, const BisectionDecomposition& d,
                                                std::optional<int> m = std::nullopt) {
  if (spec.n != d.n) throw ValidationError("spec and decomposition sizes differ");
  AmplificationReport rep;
  for (auto& [pair, mat] : spec.twoLocal) {
    for (auto& p : d.pairs) {
      double one = restricted_1_norm(mat, p.rect());
      if (one == 0.0) continue;
      double r = box_1_norm(mat, p) / one;
      rep.lambdaBlock = std::max(rep.lambdaBlock, r);
      rep.rows.push_back({pair, p.layer, p.block, 0, 0, r});
      if (!m) continue;
      int L = p.left.length();
      Subdivision s = subdivide(L, std::min(*m, L));
      for (auto& c : s.cells) {
        Rect r2 = to_sites(p, c.shifted);
        double cs = restricted_1_norm(mat, r2);
        if (cs == 0.0) continue;
        double ca = static_cast<double>(r2.cells()) * restricted_max_norm(mat, r2) / cs;
        rep.lambdaAvg = std::max(rep.lambdaAvg, ca);
        rep.rows.push_back({pair, p.layer, p.block, c.j, c.k, ca});
      }
    }
  }
  return rep;
}

// ---- JSON listings ----

inline nlohmann::json pair_json(const IntervalPair& p) {
  return {{"layer", p.layer},
          {"block", p.block},
          {"left", {p.left.lo, p.left.hi}},
          {"right", {p.right.lo, p.right.hi}},
          {"kind", kind_name(p.kind)}};
}

inline nlohmann::json to_json(const BisectionDecomposition& d) {
  nlohmann::json a = nlohmann::json::array();
  for (auto& p : d.pairs) a.push_back(pair_json(p));
  return a;
}

inline nlohmann::json to_json(const LowRankDecomposition& d) {
  nlohmann::json a = nlohmann::json::array();
  for (auto& p : d.farField) a.push_back(pair_json(p));
  for (auto& p : d.nearField) a.push_back(pair_json(p));
  int i = 0;
  for (auto& w : d.withinBlocks)
    a.push_back({{"layer", log2_exact(d.n / d.cutoff)},
                 {"block", i++},
                 {"left", {w.lo, w.hi}},
                 {"right", {w.lo, w.hi}},
                 {"kind", "within"}});
  return a;
}

}  // namespace trotterforge
