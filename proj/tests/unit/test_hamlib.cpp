#include <trotterforge/hamlib.hpp>

#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include <numeric>

using namespace trotterforge;

TEST(PowerLaw, TwoSites) {
  auto s = build_power_law(2, 1, 2.0, {PauliKind::Z, PauliKind::Z});
  auto& m = s.twoLocal.at({PauliKind::Z, PauliKind::Z});
  EXPECT_EQ(m.nonzeros(), 1u);
  EXPECT_DOUBLE_EQ(m.at(1, 2), 1.0);
}

TEST(PowerLaw, FourSitesChain) {
  auto s = build_power_law(4, 1, 2.0, {PauliKind::Z, PauliKind::Z});
  auto& m = s.twoLocal.at({PauliKind::Z, PauliKind::Z});
  const double want[4][4] = {{0, 1, 0.25, 1.0 / 9}, {0, 0, 1, 0.25}, {0, 0, 0, 1}, {}};
  for (int j = 1; j <= 4; ++j)
    for (int k = j + 1; k <= 4; ++k) EXPECT_DOUBLE_EQ(m.at(j, k), want[j - 1][k - 1]);
}

TEST(PowerLaw, SquareLatticeDiagonal) {
  auto s = build_power_law(4, 2, 1.0, {PauliKind::X, PauliKind::X});
  // sites are (1,1),(1,2),(2,1),(2,2)
  EXPECT_EQ(s.geometry[3], (Coord{2, 2, 1}));
  EXPECT_NEAR(s.twoLocal.begin()->second.at(1, 4), 1 / std::sqrt(2.0), 1e-15);
}

TEST(PowerLaw, SignRules) {
  auto alt = build_power_law(6, 1, 1.0, {PauliKind::Z, PauliKind::Z}, SignRule::alternating);
  auto& m = alt.twoLocal.begin()->second;
  EXPECT_LT(m.at(1, 2), 0);
  EXPECT_GT(m.at(1, 3), 0);
  auto a = build_power_law(6, 1, 1.0, {PauliKind::Z, PauliKind::Z}, SignRule::seeded_random, 7);
  auto b = build_power_law(6, 1, 1.0, {PauliKind::Z, PauliKind::Z}, SignRule::seeded_random, 7);
  EXPECT_EQ(a.twoLocal.begin()->second.upper(), b.twoLocal.begin()->second.upper());
  // magnitudes never change with the sign rule
  EXPECT_TRUE(a.twoLocal.begin()->second.upper().cwiseAbs().isApprox(m.upper().cwiseAbs()));
}

TEST(PowerLaw, Errors) {
  EXPECT_THROW(build_power_law(1, 1, 1.0, {}), DomainError);
  EXPECT_THROW(build_power_law(4, 1, 0.0, {}), DomainError);
  EXPECT_THROW(build_power_law(5, 2, 1.0, {}), DimensionError);
  EXPECT_THROW(build_power_law(8, 4, 1.0, {}), DimensionError);
  EXPECT_THROW(sign_rule_from_string("random"), ValidationError);
  EXPECT_THROW(PauliPair::parse("ZI"), ValidationError);
}

TEST(CoeffMatrix, IndexChecks) {
  CoeffMatrix m(4);
  EXPECT_THROW(m.at(2, 2), IndexError);
  EXPECT_THROW(m.at(3, 2), IndexError);
  EXPECT_THROW(m.at(0, 2), IndexError);
  EXPECT_THROW(m.set(1, 5, 1.0), IndexError);
  EXPECT_THROW(m.set(1, 2, NAN), ValidationError);
  m.set(1, 3, 2.0);
  EXPECT_EQ(m.sym(3, 1), 2.0);
  EXPECT_EQ(m.sym(2, 2), 0.0);
}

// exact rational rounding, ties to even
static std::int64_t oracle_round(boost::multiprecision::cpp_rational q) {
  using boost::multiprecision::cpp_int;
  cpp_int num = boost::multiprecision::numerator(q), den = boost::multiprecision::denominator(q);
  bool neg = num < 0;
  if (neg) num = -num;
  cpp_int fl = num / den, rem = num - fl * den;
  if (2 * rem > den || (2 * rem == den && (fl & 1) == 1)) fl += 1;
  return static_cast<std::int64_t>(neg ? -fl : fl);
}

TEST(FixedPoint, Examples) {
  EXPECT_EQ(to_fixed_point(0.25, 4).binary(), "0.0100");
  EXPECT_EQ(to_fixed_point(1.0 / 3, 4).binary(), "0.0101");
  EXPECT_EQ(to_fixed_point(0.0, 4).binary(), "0.0000");
  EXPECT_EQ(to_fixed_point(0.0, 9).raw, 0);
  EXPECT_THROW(to_fixed_point(0.5, -1), DomainError);
}

TEST(FixedPoint, MatchesRationalOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-4, 4);
  for (int i = 0; i < 500; ++i) {
    double v = u(rng);
    int w = 1 + static_cast<int>(rng() % 40);
    boost::multiprecision::cpp_rational q(v);
    q *= boost::multiprecision::cpp_rational(boost::multiprecision::cpp_int(1) << w);
    auto fp = to_fixed_point(v, w);
    EXPECT_EQ(fp.raw, oracle_round(q));
    EXPECT_LE(std::abs(fp.value() - v), std::ldexp(1.0, -w - 1));
  }
  // exact ties go to even
  EXPECT_EQ(to_fixed_point(3.0 / 32, 4).raw, 2);
  EXPECT_EQ(to_fixed_point(5.0 / 32, 4).raw, 2);
}

TEST(FixedPoint, Oracle) {
  auto s = build_power_law(4, 1, 2.0, {PauliKind::Z, PauliKind::Z});
  EXPECT_EQ(coeff_oracle(s, {PauliKind::Z, PauliKind::Z}, 1, 3, 4).binary(), "0.0100");
  EXPECT_EQ(coeff_oracle(s, {PauliKind::X, PauliKind::X}, 1, 3, 4).raw, 0);
  EXPECT_THROW(coeff_oracle(s, {PauliKind::Z, PauliKind::Z}, 3, 1, 4), IndexError);
}

TEST(Norms, PowerLawExamples) {
  auto s = build_power_law(4, 1, 2.0, {PauliKind::Z, PauliKind::Z});
  auto& m = s.twoLocal.begin()->second;
  EXPECT_NEAR(vec1_norm(m), 1 + 0.25 + 1.0 / 9 + 1 + 0.25 + 1, 1e-14);
  EXPECT_DOUBLE_EQ(max_norm(m), 1.0);
  EXPECT_DOUBLE_EQ(induced1_norm(m), 2.25);
  EXPECT_DOUBLE_EQ(induced1_restricted_norm(m, 2), 2.0);
  EXPECT_DOUBLE_EQ(induced1_restricted_norm(m, 4), induced1_norm(m));
  EXPECT_THROW(induced1_restricted_norm(m, 0), DomainError);
}

TEST(Norms, RestrictedMatchesBruteForce) {
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  CoeffMatrix m(9);
  for (int j = 1; j <= 9; ++j)
    for (int k = j + 1; k <= 9; ++k) m.set(j, k, g(rng));
  RealMatrix s = m.symmetric();
  for (int eta = 1; eta <= 9; ++eta) {
    double best = 0;
    for (int r = 0; r < 9; ++r) {
      std::vector<double> a;
      for (int c = 0; c < 9; ++c) a.push_back(std::abs(s(r, c)));
      std::sort(a.rbegin(), a.rend());
      best = std::max(best, std::accumulate(a.begin(), a.begin() + eta, 0.0));
    }
    EXPECT_NEAR(induced1_restricted_norm(m, eta), best, 1e-12);
  }
  Rect r{2, 4, 5, 8};
  double one = 0, mx = 0;
  for (int u = 2; u <= 4; ++u)
    for (int v = 5; v <= 8; ++v) one += std::abs(m.at(u, v)), mx = std::max(mx, std::abs(m.at(u, v)));
  EXPECT_NEAR(restricted_1_norm(m, r), one, 1e-12);
  EXPECT_DOUBLE_EQ(restricted_max_norm(m, r), mx);
  EXPECT_THROW(restricted_1_norm(m, Rect{0, 2, 3, 4}), DomainError);
  EXPECT_THROW(IndexRegion({{1, 2, 3, 4}, {2, 3, 4, 5}}), ValidationError);
}

TEST(PauliDecompose, Examples) {
  auto kron = [](PauliKind a, PauliKind b) {
    return Eigen::Matrix4cd(Eigen::kroneckerProduct(pauli_matrix(a), pauli_matrix(b)));
  };
  auto zz = pauli_decompose_term(kron(PauliKind::Z, PauliKind::Z));
  for (int i = 0; i < 16; ++i) EXPECT_NEAR(zz[i], i == 15 ? 1.0 : 0.0, 1e-15);
  auto id = pauli_decompose_term(Eigen::Matrix4cd::Identity());
  EXPECT_NEAR(id[0], 1.0, 1e-15);
  auto xy = pauli_decompose_term((kron(PauliKind::X, PauliKind::Y) + kron(PauliKind::Y, PauliKind::X)) / 2.0);
  EXPECT_NEAR(xy[4 * 1 + 2], 0.5, 1e-15);
  EXPECT_NEAR(xy[4 * 2 + 1], 0.5, 1e-15);
}

TEST(PauliDecompose, ReconstructsRandomHermitian) {
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  Eigen::Matrix4cd a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = {g(rng), g(rng)};
  Eigen::Matrix4cd h = a + a.adjoint();
  auto c = pauli_decompose_term(h);
  Eigen::Matrix4cd back = Eigen::Matrix4cd::Zero();
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      back += c[4 * p + q] * Eigen::Matrix4cd(Eigen::kroneckerProduct(pauli_matrix(PauliKind(p)), pauli_matrix(PauliKind(q))));
  EXPECT_LT((back - h).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(pauli_decompose_term(a * std::complex<double>(0, 1) + a), ValidationError);
}

TEST(SpecJson, RoundTrip) {
  auto s = build_power_law(8, 1, 2.0, {PauliKind::X, PauliKind::Y}, SignRule::seeded_random, 4);
  s.onSite[PauliKind::Z] = std::vector<double>(8, 0.5);
  s.identity = 0.25;
  auto j = to_json(s);
  auto back = spec_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(to_json(back).dump(), j.dump());
  EXPECT_EQ(j["terms"][0]["entries"].size(), 28u);
}

TEST(SpecJson, Rejections) {
  auto j = to_json(build_power_law(4, 1, 2.0, {PauliKind::Z, PauliKind::Z}));
  auto bad = j;
  bad["extra"] = 1;
  EXPECT_THROW(spec_from_json(bad), ValidationError);
  bad = j;
  bad["terms"][0]["entries"][0] = {2, 1, 0.5};
  EXPECT_THROW(spec_from_json(bad), ValidationError);
  bad = j;
  bad["onsite"] = {{{"sigma", "X"}, {"values", {1, 2}}}};
  EXPECT_THROW(spec_from_json(bad), ValidationError);
  bad = j;
  bad.erase("n");
  EXPECT_THROW(spec_from_json(bad), ValidationError);
}
