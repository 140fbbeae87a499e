#include <trotterforge/costmodel.hpp>

#include <gtest/gtest.h>

using namespace trotterforge;

TEST(Recurrence, Examples) {
  Recurrence r;
  r.cost = [](long long n) { return double(n); };
  EXPECT_DOUBLE_EQ(solve_recurrence_numeric(r, 8), 32.0);
  Recurrence leaves;
  EXPECT_DOUBLE_EQ(solve_recurrence_numeric(leaves, 64), 64.0);
  EXPECT_DOUBLE_EQ(solve_recurrence_numeric(leaves, 1), 1.0);
  Recurrence bad;
  bad.m1 = 0;
  EXPECT_THROW(solve_recurrence_numeric(bad, 8), ValidationError);
}

TEST(Recurrence, Classes) {
  Recurrence r;
  r.declared = {{1.0, 0}};
  auto c = classify_recurrence(r);
  EXPECT_EQ(c.tag, MasterCase::boundary);
  EXPECT_EQ(c.logPower, 1);
  r.declared = {{2.0, 0}};
  EXPECT_EQ(classify_recurrence(r).tag, MasterCase::top);
  EXPECT_EQ(classify_recurrence(r).exponent, 2.0);
  r.declared = {{0.0, 0}};
  EXPECT_EQ(classify_recurrence(r).tag, MasterCase::bottom);
  EXPECT_EQ(classify_recurrence(r).exponent, 1.0);
  r.declared.reset();
  EXPECT_THROW(classify_recurrence(r), ValidationError);
}

TEST(Recurrence, UnevenSplit) {
  Recurrence r;
  r.m1 = 1;
  r.m2 = 1;
  r.cost = [](long long n) { return double(n); };
  // floor/ceil halves: oracle by direct recursion
  std::function<double(long long)> f = [&](long long n) -> double {
    return n < 2 ? 1.0 : n + f(n / 2) + f((n + 1) / 2);
  };
  for (long long n : {7LL, 100LL, 1000LL}) EXPECT_DOUBLE_EQ(solve_recurrence_numeric(r, n), f(n));
}

TEST(CoupledSystem, NLogN) {
  auto cost = [](long long n) { return double(n); };
  std::vector<double> ratio;
  for (long long n = 1 << 6; n <= (1 << 16); n *= 2) {
    auto s = solve_lowrank_system(n, cost);
    ratio.push_back(s.rec / (n * std::log2(double(n))));
  }
  EXPECT_LT(*std::max_element(ratio.begin(), ratio.end()) / *std::min_element(ratio.begin(), ratio.end()), 3.0);
}

TEST(CostReport, Sequential) {
  auto r = gate_count_report("sequential", 2.0, 1, 0.1, 1e-3, {64, 128, 256, 512});
  EXPECT_NEAR(r.fittedExponent, 2.0, 0.1);
  EXPECT_EQ(r.rows.size(), 4u);
  EXPECT_EQ(r.rows[0].count, 3u * 64 * 63 / 2);
  auto csv = to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "method,alpha,d,n,count,fitted_exponent,polylog_degree,fitted_exponent_ex_polylog,predicted_exponent");
}

TEST(CostReport, LowRankAlphaTwo) {
  auto r = gate_count_report("lowrank", 2.0, 1, 0.1, 1e-3, {64, 128, 256, 512});
  EXPECT_NEAR(r.fittedExponentExPolylog, 1.0, 0.2);
}

TEST(CostReport, BlockAlphaThree) {
  auto r = gate_count_report("block", 3.0, 1, 0.1, 1e-3, {64, 128, 256, 512, 1024});
  EXPECT_LE(r.fittedExponentExPolylog, 1.2);
}

TEST(CostReport, Errors) {
  EXPECT_THROW(gate_count_report("sequential", 2, 1, 0.1, 1e-3, {64, 128, 256}), DomainError);
  EXPECT_THROW(gate_count_report("sequential", 2, 1, 0.1, 1e-3, {64, 128, 256, 1024}), DomainError);
  EXPECT_THROW(gate_count_report("bogus", 2, 1, 0.1, 1e-3, {64, 128, 256, 512}), DomainError);
  EXPECT_THROW(predicted_exponent("avgcost", 2.0, 1), DomainError);
}

TEST(CostReport, Recount) {
  auto s = build_power_law(6, 1, 1.0, {PauliKind::X, PauliKind::Z});
  auto st = compile_sequential_step(s, 0.1, make_product_formula(2));
  EXPECT_EQ(recount(st.circuit), st.gateCount);
}
