#pragma once

#include "common.hpp"
#include "json.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cfenv>
#include <compare>
#include <map>
#include <optional>
#include <random>
#include <set>

namespace trotterforge {

struct PauliPair {
  PauliKind first = PauliKind::Z;
  PauliKind second = PauliKind::Z;
  auto operator<=>(const PauliPair&) const = default;
  std::string str() const { return {pauli_char(first), pauli_char(second)}; }
  static PauliPair parse(const std::string& s) {
    if (s.size() != 2) throw ValidationError("pauli pair must have two letters: " + s);
    PauliPair p{pauli_from_char(s[0]), pauli_from_char(s[1])};
    if (p.first == PauliKind::I || p.second == PauliKind::I)
      throw ValidationError("identity cannot appear in a 2-local pair");
    return p;
  }
};

// Strict upper triangle of an n x n real matrix, 1-based (j < k).
class CoeffMatrix {
 public:
  CoeffMatrix() = default;
  explicit CoeffMatrix(int n, int width = 32) : n_(n), width_(width), values_(RealMatrix::Zero(n, n)) {
    if (n < 1) throw DomainError("CoeffMatrix needs n >= 1");
  }

  int size() const { return n_; }
  int width() const { return width_; }

  double at(int j, int k) const {
    check(j, k);
    return values_(j - 1, k - 1);
  }
  void set(int j, int k, double v) {
    check(j, k);
    if (!std::isfinite(v)) throw ValidationError("non-finite coefficient");
    values_(j - 1, k - 1) = v;
  }
  // symmetric completion, zero diagonal
  double sym(int j, int k) const {
    if (j == k) return 0.0;
    return j < k ? at(j, k) : at(k, j);
  }
  RealMatrix symmetric() const {
    RealMatrix s = values_;
    s += values_.transpose().eval();
    return s;
  }
  const RealMatrix& upper() const { return values_; }

  std::size_t nonzeros() const {
    std::size_t c = 0;
    for (int j = 0; j < n_; ++j)
      for (int k = j + 1; k < n_; ++k) c += values_(j, k) != 0.0;
    return c;
  }
  bool empty() const { return nonzeros() == 0; }

 private:
  void check(int j, int k) const {
    if (j < 1 || k > n_ || j >= k)
      throw IndexError("coefficient index (" + std::to_string(j) + "," + std::to_string(k) +
                       ") outside 1 <= j < k <= " + std::to_string(n_));
  }
  int n_ = 0;
  int width_ = 32;
  RealMatrix values_;
};

using Coord = std::array<int, 3>;

inline std::vector<Coord> lattice_coordinates(int n, int d) {
  if (d < 1 || d > 3) throw DimensionError("dimension must be 1, 2 or 3");
  if (n < 1) throw DomainError("need at least one site");
  int side = static_cast<int>(std::lround(std::pow(static_cast<double>(n), 1.0 / d)));
  long long vol = 1;
  for (int i = 0; i < d; ++i) vol *= side;
  if (vol != n) throw DimensionError(std::to_string(n) + " is not a perfect power of " + std::to_string(d));
  std::vector<Coord> out(n, Coord{1, 1, 1});
  for (int s = 0; s < n; ++s) {
    int r = s;
    // first coordinate varies slowest
    for (int a = d - 1; a >= 0; --a) {
      out[s][a] = 1 + r % side;
      r /= side;
    }
  }
  return out;
}

struct HamiltonianSpec {
  int n = 0;
  int d = 1;
  std::vector<Coord> geometry;
  std::map<PauliPair, CoeffMatrix> twoLocal;
  std::map<PauliKind, std::vector<double>> onSite;
  double identity = 0.0;
  std::optional<double> alpha;

  double distance(int j, int k) const {
    const Coord& a = geometry.at(j - 1);
    const Coord& b = geometry.at(k - 1);
    double s = 0;
    for (int i = 0; i < 3; ++i) s += double(a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  }
  bool has_onsite() const {
    for (auto& [k, v] : onSite)
      for (double x : v)
        if (x != 0.0) return true;
    return false;
  }
  bool is_diagonal() const {
    for (auto& [p, m] : twoLocal)
      if (!m.empty() && (p.first != PauliKind::Z || p.second != PauliKind::Z)) return false;
    for (auto& [k, v] : onSite)
      if (k != PauliKind::Z && k != PauliKind::I)
        for (double x : v)
          if (x != 0.0) return false;
    return true;
  }
};

inline HamiltonianSpec empty_spec(int n, int d = 1) {
  HamiltonianSpec s;
  s.n = n;
  s.d = d;
  s.geometry = lattice_coordinates(n, d);
  return s;
}

enum class SignRule { all_positive, alternating, seeded_random };

inline SignRule sign_rule_from_string(const std::string& s) {
  if (s == "all-positive") return SignRule::all_positive;
  if (s == "alternating") return SignRule::alternating;
  if (s == "seeded-random") return SignRule::seeded_random;
  throw ValidationError("unknown sign rule " + s);
}

inline HamiltonianSpec build_power_law(int n, int d, double alpha, PauliPair pair,
                                       SignRule rule = SignRule::all_positive, std::uint64_t seed = 0) {
  if (n < 2) throw DomainError("need n >= 2");
  if (!(alpha > 0)) throw DomainError("alpha must be positive");
  HamiltonianSpec s = empty_spec(n, d);
  s.alpha = alpha;
  CoeffMatrix m(n);
  std::mt19937_64 rng(seed);
  for (int j = 1; j <= n; ++j)
    for (int k = j + 1; k <= n; ++k) {
      double v = std::pow(s.distance(j, k), -alpha);
      if (rule == SignRule::alternating && (j + k) % 2 == 1) v = -v;
      if (rule == SignRule::seeded_random && (rng() & 1)) v = -v;
      m.set(j, k, v);
    }
  s.twoLocal[pair] = std::move(m);
  return s;
}

// Fixed-point value with w fractional bits: raw / 2^w.
struct FixedPoint {
  std::int64_t raw = 0;
  int width = 0;
  double value() const { return std::ldexp(static_cast<double>(raw), -width); }
  std::string binary() const {
    std::string out = raw < 0 ? "-" : "";
    std::uint64_t a = static_cast<std::uint64_t>(raw < 0 ? -raw : raw);
    out += std::to_string(a >> width) + ".";
    for (int b = width - 1; b >= 0; --b) out += ((a >> b) & 1) ? '1' : '0';
    return out;
  }
  bool operator==(const FixedPoint&) const = default;
};

inline FixedPoint to_fixed_point(double v, int w) {
  if (w < 0 || w > 52) throw DomainError("fixed-point width must be in [0,52]");
  double scaled = std::ldexp(v, w);
  if (std::abs(scaled) > 9.0e15) throw DomainError("value does not fit the fixed-point range");
  int old = std::fegetround();
  std::fesetround(FE_TONEAREST);
  double r = std::nearbyint(scaled);
  std::fesetround(old);
  return {static_cast<std::int64_t>(r), w};
}

inline FixedPoint coeff_oracle(const HamiltonianSpec& spec, PauliPair pair, int j, int k, int w) {
  if (j < 1 || k > spec.n || j >= k) throw IndexError("coeff_oracle needs 1 <= j < k <= n");
  auto it = spec.twoLocal.find(pair);
  double v = it == spec.twoLocal.end() ? 0.0 : it->second.at(j, k);
  return to_fixed_point(v, w);
}

// ---- norms ----

struct Rect {
  int uLo, uHi, vLo, vHi;  // inclusive
  long long cells() const {
    return (uHi < uLo || vHi < vLo) ? 0 : static_cast<long long>(uHi - uLo + 1) * (vHi - vLo + 1);
  }
  bool contains(int u, int v) const { return u >= uLo && u <= uHi && v >= vLo && v <= vHi; }
  bool overlaps(const Rect& o) const {
    return cells() > 0 && o.cells() > 0 && uLo <= o.uHi && o.uLo <= uHi && vLo <= o.vHi && o.vLo <= vHi;
  }
};

class IndexRegion {
 public:
  IndexRegion() = default;
  explicit IndexRegion(std::vector<Rect> rects) : rects_(std::move(rects)) {
    for (std::size_t a = 0; a < rects_.size(); ++a)
      for (std::size_t b = a + 1; b < rects_.size(); ++b)
        if (rects_[a].overlaps(rects_[b])) throw ValidationError("region rectangles overlap");
  }
  const std::vector<Rect>& rects() const { return rects_; }
  long long size() const {
    long long s = 0;
    for (auto& r : rects_) s += r.cells();
    return s;
  }
  bool contains(int u, int v) const {
    for (auto& r : rects_)
      if (r.contains(u, v)) return true;
    return false;
  }

 private:
  std::vector<Rect> rects_;
};

inline double vec1_norm(const CoeffMatrix& m) {
  double s = 0;
  for (int j = 1; j <= m.size(); ++j)
    for (int k = j + 1; k <= m.size(); ++k) s += std::abs(m.at(j, k));
  return s;
}
inline double max_norm(const CoeffMatrix& m) {
  double s = 0;
  for (int j = 1; j <= m.size(); ++j)
    for (int k = j + 1; k <= m.size(); ++k) s = std::max(s, std::abs(m.at(j, k)));
  return s;
}
inline double euclid_norm(const CoeffMatrix& m) {
  double s = 0;
  for (int j = 1; j <= m.size(); ++j)
    for (int k = j + 1; k <= m.size(); ++k) s += m.at(j, k) * m.at(j, k);
  return std::sqrt(s);
}

// full square matrices (chem uses these directly)
inline double induced1_norm(const RealMatrix& a) {
  double best = 0;
  for (int r = 0; r < a.rows(); ++r) best = std::max(best, a.row(r).cwiseAbs().sum());
  return best;
}
inline double induced1_restricted_norm(const RealMatrix& a, int eta) {
  if (eta < 1 || eta > a.cols()) throw DomainError("eta out of range");
  double best = 0;
  std::vector<double> row(a.cols());
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) row[c] = std::abs(a(r, c));
    std::partial_sort(row.begin(), row.begin() + eta, row.end(), std::greater<>());
    double s = 0;
    for (int i = 0; i < eta; ++i) s += row[i];
    best = std::max(best, s);
  }
  return best;
}
inline double induced1_norm(const CoeffMatrix& m) { return induced1_norm(m.symmetric()); }
inline double induced1_restricted_norm(const CoeffMatrix& m, int eta) {
  if (eta < 1 || eta > m.size()) throw DomainError("eta out of range");
  return induced1_restricted_norm(m.symmetric(), eta);
}

inline void check_rect(const CoeffMatrix& m, const Rect& r) {
  if (r.cells() == 0) return;
  if (r.uLo < 1 || r.vLo < 1 || r.uHi > m.size() || r.vHi > m.size())
    throw DomainError("region outside index range");
}

inline double restricted_max_norm(const CoeffMatrix& m, const Rect& r) {
  check_rect(m, r);
  double s = 0;
  for (int u = r.uLo; u <= r.uHi; ++u)
    for (int v = r.vLo; v <= r.vHi; ++v) s = std::max(s, std::abs(m.sym(u, v)));
  return s;
}
inline double restricted_max_norm(const CoeffMatrix& m, const IndexRegion& b) {
  double s = 0;
  for (auto& r : b.rects()) s = std::max(s, restricted_max_norm(m, r));
  return s;
}
inline double restricted_1_norm(const CoeffMatrix& m, const Rect& r) {
  check_rect(m, r);
  double s = 0;
  for (int u = r.uLo; u <= r.uHi; ++u)
    for (int v = r.vLo; v <= r.vHi; ++v) s += std::abs(m.sym(u, v));
  return s;
}
inline double restricted_1_norm(const CoeffMatrix& m, const IndexRegion& b) {
  double s = 0;
  for (auto& r : b.rects()) s += restricted_1_norm(m, r);
  return s;
}
// sum over boxes of |box| * max over box
inline double box_1_norm(const CoeffMatrix& m, const std::vector<Rect>& boxes) {
  double s = 0;
  for (auto& r : boxes) s += static_cast<double>(r.cells()) * restricted_max_norm(m, r);
  return s;
}

// ---- Pauli basis of a two-qubit operator ----

using PauliCoefficients = std::array<double, 16>;  // index 4*a + b for a (x) b

inline PauliCoefficients pauli_decompose_term(const Eigen::Matrix4cd& m) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw ValidationError("matrix is not Hermitian");
  PauliCoefficients c{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Eigen::Matrix4cd p = Eigen::kroneckerProduct(pauli_matrix(PauliKind(a)), pauli_matrix(PauliKind(b)));
      c[4 * a + b] = (m * p).trace().real() / 4.0;
    }
  return c;
}

// ---- JSON ----

inline nlohmann::json to_json(const HamiltonianSpec& s) {
  using nlohmann::json;
  json j;
  j["n"] = s.n;
  j["d"] = s.d;
  j["alpha"] = s.alpha ? json(*s.alpha) : json(nullptr);
  json terms = json::array();
  for (auto& [p, m] : s.twoLocal) {
    json e = json::array();
    for (int a = 1; a <= m.size(); ++a)
      for (int b = a + 1; b <= m.size(); ++b)
        if (m.at(a, b) != 0.0) e.push_back(json::array({a, b, m.at(a, b)}));
    terms.push_back({{"sigma", std::string(1, pauli_char(p.first))},
                     {"sigma2", std::string(1, pauli_char(p.second))},
                     {"entries", e}});
  }
  j["terms"] = terms;
  json onsite = json::array();
  for (auto& [k, v] : s.onSite) onsite.push_back({{"sigma", std::string(1, pauli_char(k))}, {"values", v}});
  j["onsite"] = onsite;
  j["identity"] = s.identity;
  return j;
}

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ValidationError("expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (auto* a : allowed) ok |= it.key() == a;
    if (!ok) throw ValidationError("unknown field '" + it.key() + "'");
  }
}

inline HamiltonianSpec spec_from_json(const nlohmann::json& j) {
  try {
    reject_unknown(j, {"n", "d", "alpha", "terms", "onsite", "identity"});
    int n = j.at("n").get<int>();
    int d = j.value("d", 1);
    HamiltonianSpec s = empty_spec(n, d);
    if (j.contains("alpha") && !j["alpha"].is_null()) s.alpha = j["alpha"].get<double>();
    s.identity = j.value("identity", 0.0);
    for (auto& t : j.value("terms", nlohmann::json::array())) {
      reject_unknown(t, {"sigma", "sigma2", "entries"});
      PauliPair p = PauliPair::parse(t.at("sigma").get<std::string>() + t.at("sigma2").get<std::string>());
      if (s.twoLocal.count(p)) throw ValidationError("duplicate term " + p.str());
      CoeffMatrix m(n);
      for (auto& e : t.at("entries")) {
        if (!e.is_array() || e.size() != 3) throw ValidationError("entry must be [j,k,value]");
        m.set(e[0].get<int>(), e[1].get<int>(), e[2].get<double>());
      }
      s.twoLocal[p] = std::move(m);
    }
    for (auto& o : j.value("onsite", nlohmann::json::array())) {
      reject_unknown(o, {"sigma", "values"});
      std::string sg = o.at("sigma").get<std::string>();
      if (sg.size() != 1) throw ValidationError("on-site sigma must be one letter");
      PauliKind k = pauli_from_char(sg[0]);
      if (k == PauliKind::I) throw ValidationError("on-site identity belongs in 'identity'");
      auto v = o.at("values").get<std::vector<double>>();
      if (static_cast<int>(v.size()) != n) throw ValidationError("on-site vector length must equal n");
      for (double x : v)
        if (!std::isfinite(x)) throw ValidationError("non-finite on-site value");
      s.onSite[k] = std::move(v);
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed spec: ") + e.what());
  } catch (const IndexError& e) {
    throw ValidationError(std::string("malformed spec: ") + e.what());
  }
}

}  // namespace trotterforge
