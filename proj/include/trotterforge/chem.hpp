#pragma once

#include "circuit.hpp"
#include "hamlib.hpp"
#include "trotter.hpp"

namespace trotterforge {

struct Nucleus {
  double charge;
  std::array<double, 3> pos;  // same length units as the grid spacing
};

struct ElectronicSystem {
  int n = 0;
  int grid = 0;  // side length, 0 for non-grid instances
  int eta = 1;
  double omega = 1;
  RealMatrix tau;  // Hermitian (real symmetric)
  RealMatrix nu;   // symmetric, zero diagonal; V = sum_{l<m} nu_lm N_l N_m
  std::vector<Nucleus> nuclei;
  RealVector external;  // on-site potential, empty if none
};

enum class FermionKind { create, annihilate, number };

struct FermionOp {
  FermionKind kind;
  int mode;
};

inline void validate(const ElectronicSystem& s) {
  if (s.tau.rows() != s.n || s.tau.cols() != s.n || s.nu.rows() != s.n || s.nu.cols() != s.n)
    throw ValidationError("coefficient matrices must be n x n");
  if ((s.tau - s.tau.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw ValidationError("tau must be symmetric");
  if ((s.nu - s.nu.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw ValidationError("nu must be symmetric");
  if (s.nu.diagonal().cwiseAbs().maxCoeff() > 0) throw ValidationError("nu must have zero diagonal");
  if (s.eta < 1 || s.eta > s.n) throw DomainError("eta must lie in [1, n]");
}

inline std::array<int, 3> grid_coord(int s, int g) { return {s / (g * g), (s / g) % g, s % g}; }

inline double external_potential_at(const ElectronicSystem& s, int site) {
  double h = std::cbrt(s.omega / s.n), v = 0;
  auto c = grid_coord(site, s.grid);
  for (auto& nu : s.nuclei) {
    double d2 = 0;
    for (int a = 0; a < 3; ++a) d2 += std::pow(nu.pos[a] - h * c[a], 2);
    v += nu.charge / std::sqrt(d2);
  }
  return v;
}

inline double external_potential_max(const ElectronicSystem& s) {
  double best = 0;
  for (int m = 0; m < s.n; ++m) best = std::max(best, std::abs(external_potential_at(s, m)));
  return best;
}

inline ElectronicSystem build_uniform_electron_gas(int g, double omega, int eta = 1,
                                                   std::vector<Nucleus> nuclei = {}) {
  if (g < 2) throw DomainError("grid side must be at least 2");
  if (!(omega > 0)) throw DomainError("omega must be positive");
  ElectronicSystem s;
  s.grid = g;
  s.n = g * g * g;
  s.omega = omega;
  s.eta = eta;
  if (eta < 1 || eta > s.n) throw DomainError("eta must lie in [1, n]");
  const double cube = std::cbrt(static_cast<double>(s.n)), scale = cube / (2 * std::cbrt(omega));
  s.nu = RealMatrix::Zero(s.n, s.n);
  for (int a = 0; a < s.n; ++a)
    for (int b = a + 1; b < s.n; ++b) {
      auto ca = grid_coord(a, g), cb = grid_coord(b, g);
      double d2 = 0;
      for (int i = 0; i < 3; ++i) d2 += double(ca[i] - cb[i]) * (ca[i] - cb[i]);
      s.nu(a, b) = s.nu(b, a) = scale / std::sqrt(d2);
    }
  // -1/2 Laplacian, 7-point stencil, periodic
  const double hop = std::pow(s.n / omega, 2.0 / 3.0) / 2;
  s.tau = RealMatrix::Zero(s.n, s.n);
  for (int a = 0; a < s.n; ++a) {
    auto c = grid_coord(a, g);
    s.tau(a, a) += 6 * hop;
    for (int axis = 0; axis < 3; ++axis)
      for (int dir : {-1, 1}) {
        auto nb = c;
        nb[axis] = (nb[axis] + dir + g) % g;
        s.tau(a, (nb[0] * g + nb[1]) * g + nb[2]) -= hop;
      }
  }
  s.nuclei = std::move(nuclei);
  if (!s.nuclei.empty()) {
    s.external.resize(s.n);
    for (int m = 0; m < s.n; ++m) s.external(m) = -external_potential_at(s, m);
  }
  return s;
}

struct JwMatrices {
  Matrix H, T, V;
};

inline JwMatrices jw_matrix(const ElectronicSystem& s) {
  if (s.n > 10) throw CapacityError("Jordan-Wigner matrices limited to 10 modes");
  validate(s);
  const std::uint64_t dim = 1ULL << s.n;
  JwMatrices m{Matrix::Zero(dim, dim), Matrix::Zero(dim, dim), Matrix::Zero(dim, dim)};
  auto below = [](std::uint64_t x, int k) { return std::popcount(x & ((1ULL << k) - 1)); };
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (int k = 0; k < s.n; ++k) {
      if (!((x >> k) & 1)) continue;
      std::uint64_t y = x ^ (1ULL << k);
      int sk = below(x, k);
      for (int j = 0; j < s.n; ++j) {
        double c = s.tau(j, k);
        if (c == 0.0) continue;
        if ((y >> j) & 1) continue;
        int sj = below(y, j);
        double sign = ((sk + sj) % 2) ? -1.0 : 1.0;
        m.T(y | (1ULL << j), x) += c * sign;
      }
    }
    double v = 0;
    for (int l = 0; l < s.n; ++l) {
      if (!((x >> l) & 1)) continue;
      for (int k = l + 1; k < s.n; ++k)
        if ((x >> k) & 1) v += s.nu(l, k);
      if (s.external.size()) v += s.external(l);
    }
    m.V(x, x) = v;
  }
  m.H = m.T + m.V;
  return m;
}

inline Matrix number_operator(int n) {
  Matrix N = Matrix::Zero(1LL << n, 1LL << n);
  for (std::uint64_t x = 0; x < (1ULL << n); ++x) N(x, x) = std::popcount(x);
  return N;
}

struct NormRow {
  int g, n, eta;
  double omega;
  double nuRestricted, nuRatio;
  double tauInduced, tauRatio;
};

inline std::vector<NormRow> norm_scaling_report(const std::vector<int>& grids,
                                                const std::function<int(int)>& etaRule,
                                                const std::function<double(int)>& omegaRule) {
  std::vector<NormRow> rows;
  for (int g : grids) {
    int n = g * g * g;
    double omega = omegaRule(n);
    auto s = build_uniform_electron_gas(g, omega, etaRule(n));
    NormRow r{g, n, s.eta, omega, 0, 0, 0, 0};
    r.nuRestricted = induced1_restricted_norm(s.nu, s.eta);
    r.nuRatio = r.nuRestricted / (std::pow(s.eta, 2.0 / 3) * std::cbrt(double(n)) / std::cbrt(omega));
    r.tauInduced = induced1_norm(s.tau);
    r.tauRatio = r.tauInduced / std::pow(n / omega, 2.0 / 3);
    rows.push_back(r);
  }
  return rows;
}

inline long long chem_step_count(const ElectronicSystem& s, double t, double eps, int p, double constant = 1.0) {
  auto norms = fermionic_error_norms(s.tau, s.nu, s.eta);
  double coef = constant * norms.bound(p, 1.0);
  return step_count({t, eps, p}, coef);
}

// Per-dimension recursion on a g^d lattice: cube pairs at Chebyshev distance >= 2 whose parents touch.
struct LatticeBlock {
  int level;  // cube side
  std::vector<int> a, b;
};

inline std::vector<int> cube_sites(int g, int side, std::array<int, 3> idx) {
  std::vector<int> out;
  for (int x = 0; x < side; ++x)
    for (int y = 0; y < side; ++y)
      for (int z = 0; z < side; ++z)
        out.push_back(((idx[0] * side + x) * g + idx[1] * side + y) * g + idx[2] * side + z);
  return out;
}

inline std::vector<LatticeBlock> lattice_far_blocks(int g, int cutoff) {
  if (!is_power_of_two(g) || !is_power_of_two(cutoff) || cutoff > g) throw DomainError("need g, cutoff powers of two");
  std::vector<LatticeBlock> out;
  for (int side = g / 2; side >= cutoff; side /= 2) {
    int cnt = g / side;
    for (int a = 0; a < cnt * cnt * cnt; ++a)
      for (int b = a + 1; b < cnt * cnt * cnt; ++b) {
        std::array<int, 3> ia{a / (cnt * cnt), (a / cnt) % cnt, a % cnt}, ib{b / (cnt * cnt), (b / cnt) % cnt, b % cnt};
        int dist = 0, pdist = 0;
        for (int i = 0; i < 3; ++i) {
          dist = std::max(dist, std::abs(ia[i] - ib[i]));
          pdist = std::max(pdist, std::abs(ia[i] / 2 - ib[i] / 2));
        }
        if (dist >= 2 && pdist <= 1) out.push_back({side, cube_sites(g, side, ia), cube_sites(g, side, ib)});
      }
  }
  return out;
}

inline nlohmann::json to_json(const ElectronicSystem& s) {
  nlohmann::json nuc = nlohmann::json::array();
  for (auto& x : s.nuclei) nuc.push_back({{"charge", x.charge}, {"pos", x.pos}});
  return {{"grid", s.grid}, {"omega", s.omega}, {"eta", s.eta}, {"nuclei", nuc}};
}

inline ElectronicSystem system_from_json(const nlohmann::json& j) {
  try {
    reject_unknown(j, {"grid", "omega", "eta", "nuclei"});
    std::vector<Nucleus> nuc;
    for (auto& x : j.value("nuclei", nlohmann::json::array())) {
      reject_unknown(x, {"charge", "pos"});
      nuc.push_back({x.at("charge").get<double>(), x.at("pos").get<std::array<double, 3>>()});
    }
    return build_uniform_electron_gas(j.at("grid").get<int>(), j.at("omega").get<double>(), j.value("eta", 1), nuc);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed system: ") + e.what());
  }
}

}  // namespace trotterforge
