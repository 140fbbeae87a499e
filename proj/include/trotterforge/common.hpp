#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace trotterforge {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// dense simulation cap, in qubits
inline constexpr int kMaxQubits = 14;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : Error {
  using Error::Error;
};
struct DimensionError : DomainError {
  using DomainError::DomainError;
};
struct ValidationError : Error {
  using Error::Error;
};
struct IndexError : Error {
  using Error::Error;
};
struct CapacityError : Error {
  using Error::Error;
};

enum class PauliKind : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(PauliKind p) {
  static constexpr char tbl[] = {'i', 'x', 'y', 'z'};
  return tbl[static_cast<int>(p)];
}

inline PauliKind pauli_from_char(char c) {
  switch (c) {
    case 'i': case 'I': return PauliKind::I;
    case 'x': case 'X': return PauliKind::X;
    case 'y': case 'Y': return PauliKind::Y;
    case 'z': case 'Z': return PauliKind::Z;
  }
  throw ValidationError(std::string("unknown pauli '") + c + "'");
}

inline Eigen::Matrix2cd pauli_matrix(PauliKind p) {
  Eigen::Matrix2cd m;
  const cplx i(0, 1);
  switch (p) {
    case PauliKind::I: m << 1, 0, 0, 1; break;
    case PauliKind::X: m << 0, 1, 1, 0; break;
    case PauliKind::Y: m << 0, -i, i, 0; break;
    case PauliKind::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline bool is_power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

inline int log2_exact(long long v) {
  if (!is_power_of_two(v)) throw DomainError("expected a power of two, got " + std::to_string(v));
  return std::countr_zero(static_cast<unsigned long long>(v));
}

inline int ceil_log2(long long v) {
  int r = 0;
  while ((1LL << r) < v) ++r;
  return r;
}

inline void require_qubits(int q) {
  if (q > kMaxQubits)
    throw CapacityError("dense simulation limited to " + std::to_string(kMaxQubits) + " qubits, got " +
                        std::to_string(q));
}

// Largest singular value. Gram route is fine for the sizes we simulate.
inline double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  if (a.cols() <= 64 && a.rows() <= 64) {
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
  }
  Matrix g = a.cols() <= a.rows() ? Matrix(a.adjoint() * a) : Matrix(a * a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

inline double spectral_norm(const RealMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<RealMatrix> svd(a);
  return svd.singularValues()(0);
}

// TROTTERFORGE_THREADS caps the worker count; default is hardware concurrency
inline unsigned thread_cap() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* s = std::getenv("TROTTERFORGE_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
  }
  return hw;
}

template <class F>
void parallel_for(std::size_t count, F&& f) {
  unsigned workers = std::min<std::size_t>(thread_cap(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) f(i);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

// least squares slope of y on x, optional weights
struct LineFit {
  double slope = 0, intercept = 0, r2 = 0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y,
                        std::vector<double> w = {}) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("fit_line needs at least two points");
  if (w.empty()) w.assign(x.size(), 1.0);
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sw += w[i], sx += w[i] * x[i], sy += w[i] * y[i];
  double mx = sx / sw, my = sy / sw, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
    syy += w[i] * (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0;
  f.intercept = my - f.slope * mx;
  f.r2 = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

}  // namespace trotterforge
