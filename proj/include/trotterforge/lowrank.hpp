#pragma once

#include "decomp.hpp"

#include <sstream>

namespace trotterforge {

struct TruncatedFactor {
  RealMatrix left;   // mu, rows x rank
  RealVector singulars;
  RealMatrix right;  // nu, cols x rank
  int rank = 0;
  double tol = 0;
  double residual = 0;  // first discarded singular value
  IntervalPair block;

  RealMatrix reconstruct() const {
    if (rank == 0) return RealMatrix::Zero(left.rows(), right.rows());
    return left * singulars.asDiagonal() * right.transpose();
  }
};

inline TruncatedFactor truncated_svd(const RealMatrix& block, double tol) {
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  if (!block.allFinite()) throw ValidationError("block has non-finite entries");
  TruncatedFactor f;
  f.tol = tol;
  if (block.size() == 0) return f;
  Eigen::BDCSVD<RealMatrix> svd(block, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  int r = 0;
  while (r < s.size() && s(r) > tol) ++r;
  f.rank = r;
  f.residual = r < s.size() ? s(r) : 0.0;
  f.left = svd.matrixU().leftCols(r);
  f.right = svd.matrixV().leftCols(r);
  f.singulars = s.head(r);
  return f;
}

inline RealMatrix extract_block(const CoeffMatrix& m, const IntervalPair& p) {
  RealMatrix b(p.left.length(), p.right.length());
  for (int u = p.left.lo; u <= p.left.hi; ++u)
    for (int v = p.right.lo; v <= p.right.hi; ++v) b(u - p.left.lo, v - p.right.lo) = m.sym(u, v);
  return b;
}

struct RankRow {
  int layer, block;
  PauliPair pair;
  int rank;
  double residual;
};

struct RankProfile {
  std::vector<RankRow> rows;
  int maxRank = 1;
};

inline RankProfile rank_profile(const HamiltonianSpec& spec, const LowRankDecomposition& d, double tol) {
  if (spec.n != d.n) throw ValidationError("spec and decomposition sizes differ");
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  std::vector<std::pair<PauliPair, const IntervalPair*>> jobs;
  for (auto& [pair, m] : spec.twoLocal)
    for (auto& p : d.farField) jobs.push_back({pair, &p});
  RankProfile prof;
  prof.rows.resize(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    auto& [pair, p] = jobs[i];
    auto f = truncated_svd(extract_block(spec.twoLocal.at(pair), *p), tol);
    prof.rows[i] = {p->layer, p->block, pair, f.rank, f.residual};
  });
  for (auto& r : prof.rows) prof.maxRank = std::max(prof.maxRank, r.rank);
  return prof;
}

inline std::string to_csv(const RankProfile& p) {
  std::ostringstream o;
  o.precision(10);
  o << "layer,block,pauliPair,rank,residual\n";
  for (auto& r : p.rows) o << r.layer << ',' << r.block << ',' << r.pair.str() << ',' << r.rank << ',' << r.residual << '\n';
  return o.str();
}

}  // namespace trotterforge
