#include <trotterforge/chem.hpp>

#include <gtest/gtest.h>

using namespace trotterforge;

TEST(Ueg, CoulombEntries) {
  auto s = build_uniform_electron_gas(2, 8.0);
  // n^{1/3} / (2 omega^{1/3}) / dist = 2 / 4 = 0.5 for nearest neighbours
  EXPECT_NEAR(s.nu(0, 1), 0.5, 1e-14);
  EXPECT_NEAR(s.nu(0, 7), 0.5 / std::sqrt(3.0), 1e-14);
  EXPECT_EQ(s.nu.diagonal().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_TRUE(s.nu.isApprox(s.nu.transpose()));
}

TEST(Ueg, KineticStencil) {
  auto s = build_uniform_electron_gas(4, 10.0);
  const double hop = std::pow(64 / 10.0, 2.0 / 3) / 2;
  for (int a = 0; a < s.n; ++a) {
    double off = s.tau.row(a).cwiseAbs().sum() - std::abs(s.tau(a, a));
    EXPECT_NEAR(off, 6 * hop, 1e-12);
  }
  EXPECT_THROW(build_uniform_electron_gas(1, 1.0), DomainError);
  EXPECT_THROW(build_uniform_electron_gas(2, -1.0), DomainError);
  EXPECT_THROW(build_uniform_electron_gas(2, 1.0, 9), DomainError);
}

TEST(Ueg, RestrictedNormLimits) {
  auto s = build_uniform_electron_gas(3, 5.0);
  EXPECT_NEAR(induced1_restricted_norm(s.nu, 1), std::cbrt(27.0) / (2 * std::cbrt(5.0)), 1e-13);
  EXPECT_NEAR(induced1_restricted_norm(s.nu, s.n), induced1_norm(s.nu), 1e-12);
}

TEST(JordanWigner, Diagonal) {
  ElectronicSystem s;
  s.n = 3;
  s.tau = RealVector::LinSpaced(3, 1, 3).asDiagonal();
  s.nu = RealMatrix::Zero(3, 3);
  auto m = jw_matrix(s);
  EXPECT_EQ((m.H - Matrix(m.H.diagonal().asDiagonal())).norm(), 0.0);
  EXPECT_DOUBLE_EQ(m.H(7, 7).real(), 6.0);
}

TEST(JordanWigner, SingleHop) {
  ElectronicSystem s;
  s.n = 2;
  s.tau = RealMatrix::Zero(2, 2);
  s.tau(0, 1) = s.tau(1, 0) = 1;
  s.nu = RealMatrix::Zero(2, 2);
  Eigen::SelfAdjointEigenSolver<Matrix> es(jw_matrix(s).H);
  RealVector ev = es.eigenvalues();
  EXPECT_NEAR(ev(0), -1, 1e-14);
  EXPECT_NEAR(ev(1), 0, 1e-14);
  EXPECT_NEAR(ev(2), 0, 1e-14);
  EXPECT_NEAR(ev(3), 1, 1e-14);
}

TEST(JordanWigner, PairInteraction) {
  ElectronicSystem s;
  s.n = 2;
  s.tau = RealMatrix::Zero(2, 2);
  s.nu = RealMatrix::Zero(2, 2);
  s.nu(0, 1) = s.nu(1, 0) = 0.7;
  auto m = jw_matrix(s);
  EXPECT_DOUBLE_EQ(m.H(3, 3).real(), 0.7);
  EXPECT_DOUBLE_EQ(m.H(1, 1).real(), 0.0);
}

TEST(JordanWigner, AnticommutationOracle) {
  // build a_j from scratch and compare the hopping term against sum tau_jk a_j^dagger a_k
  const int n = 4;
  std::mt19937 rng(2);
  std::normal_distribution<double> g;
  ElectronicSystem s;
  s.n = n;
  s.tau = RealMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = j; k < n; ++k) s.tau(j, k) = s.tau(k, j) = g(rng);
  s.nu = RealMatrix::Zero(n, n);
  auto kron = [](const Matrix& a, const Matrix& b) { return Matrix(Eigen::kroneckerProduct(a, b)); };
  Matrix lower(2, 2);
  lower << 0, 1, 0, 0;  // |0><1|
  Matrix z = pauli_matrix(PauliKind::Z), id = Matrix::Identity(2, 2);
  std::vector<Matrix> a(n);
  for (int j = 0; j < n; ++j) {
    Matrix op = Matrix::Identity(1, 1);
    for (int q = n - 1; q >= 0; --q) op = kron(op, q < j ? z : (q == j ? lower : id));
    a[j] = op;
  }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Matrix ac = a[j] * a[k].adjoint() + a[k].adjoint() * a[j];
      EXPECT_LT((ac - (j == k ? 1.0 : 0.0) * Matrix::Identity(16, 16)).norm(), 1e-14);
    }
  Matrix t = Matrix::Zero(16, 16);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) t += s.tau(j, k) * a[j].adjoint() * a[k];
  EXPECT_LT((jw_matrix(s).T - t).norm(), 1e-12);
  ElectronicSystem big;
  big.n = 11;
  EXPECT_THROW(jw_matrix(big), CapacityError);
}

TEST(JordanWigner, ConservesNumber) {
  auto s = build_uniform_electron_gas(2, 3.0, 2);
  auto m = jw_matrix(s);
  Matrix N = number_operator(8);
  EXPECT_LT((m.H * N - N * m.H).norm(), 1e-10);
}

TEST(ChemStepCount, Behaviour) {
  auto s = build_uniform_electron_gas(2, 8.0, 2);
  s.nu.setZero();
  EXPECT_EQ(chem_step_count(s, 1.0, 0.01, 2), 1);
  auto u = build_uniform_electron_gas(4, 64.0, 8);
  auto norms = fermionic_error_norms(u.tau, u.nu, 8);
  double a = norms.tau1, b = norms.nuEta;
  double want = std::ceil(std::sqrt((a + b) * a * b * 8 / 0.01) * (1 - 1e-12));
  EXPECT_EQ(chem_step_count(u, 1.0, 0.01, 2), static_cast<long long>(want));
  long long r1 = chem_step_count(u, 1.0, 1e-3, 1), r2 = chem_step_count(u, 2.0, 1e-3, 1);
  EXPECT_NEAR(double(r2) / r1, 4.0, 1e-3);
}

TEST(NormReport, RatiosAreStable) {
  auto rows = norm_scaling_report({3, 4, 5}, [](int n) { return n / 2; }, [](int n) { return double(n); });
  ASSERT_EQ(rows.size(), 3u);
  for (auto& r : rows) {
    EXPECT_GT(r.nuRatio, 0);
    EXPECT_NEAR(r.tauRatio, 6.0, 1e-9);
  }
}

TEST(ExternalPotential, Nuclei) {
  auto s = build_uniform_electron_gas(2, 8.0, 1, {{1.0, {0.5, 0.5, 0.5}}});
  ASSERT_EQ(s.external.size(), 8);
  EXPECT_NEAR(s.external(0), -1 / std::sqrt(0.75), 1e-14);
  EXPECT_NEAR(external_potential_max(s), 1 / std::sqrt(0.75), 1e-14);
}

TEST(ChemJson, RoundTrip) {
  auto s = build_uniform_electron_gas(3, 2.0, 4, {{2.0, {0.1, 0.2, 0.3}}});
  auto back = system_from_json(to_json(s));
  EXPECT_EQ(to_json(back).dump(), to_json(s).dump());
  auto bad = to_json(s);
  bad["spin"] = 1;
  EXPECT_THROW(system_from_json(bad), ValidationError);
}
