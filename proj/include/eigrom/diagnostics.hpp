// Copyright The eigrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGROM_DIAGNOSTICS_HPP
#define EIGROM_DIAGNOSTICS_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eigrom/eigensolve.hpp"
#include "eigrom/error.hpp"
#include "eigrom/rom.hpp"

namespace eigrom
{

inline double RelativeError(double approx, double reference)
{
  if (!(reference > 0.0))
  {
    throw std::invalid_argument("RelativeError: reference value must be positive");
  }
  return std::abs(approx - reference) / reference;
}

// Which high-fidelity mode a (lifted) reduced mode approximates. Indices are 1-based.
struct ModeMatch
{
  int rom_mode = 0;
  int matched_fem_index = 0;
  // |<v, u>_M| of the M-normalized vectors.
  double correlation = 0.0;
  // |lambda_rom - lambda_fem(matched)| / lambda_fem(matched); NaN if no reduced value given.
  double relative_value_error = std::numeric_limits<double>::quiet_NaN();
};

inline constexpr double kMatchTieTolerance = 1e-12;

// Correlation of v against every FEM mode in the M inner product; argmax wins, ties within
// kMatchTieTolerance go to the smaller index.
inline ModeMatch MatchMode(const Eigen::VectorXd &v, const EigenSet &fem, const SparseMatrix &M)
{
  if (fem.Count() < 1)
  {
    throw DimensionError("mode matching needs at least one FEM mode");
  }
  if (v.size() != fem.SpaceDim() || M.rows() != v.size())
  {
    throw DimensionError("mode matching: dimension mismatch");
  }
  const Eigen::VectorXd Mv = M * v;
  const double vnorm = std::sqrt(v.dot(Mv));
  if (!(vnorm > 0.0))
  {
    throw std::invalid_argument("mode matching: zero vector");
  }
  ModeMatch m;
  m.correlation = -1.0;
  for (int j = 0; j < fem.Count(); j++)
  {
    const Eigen::VectorXd u = fem.vectors.col(j);
    const double unorm = std::sqrt(u.dot(M * u));
    const double c = std::abs(u.dot(Mv)) / (vnorm * unorm);
    if (c > m.correlation + kMatchTieTolerance)
    {
      m.correlation = c;
      m.matched_fem_index = j + 1;
    }
  }
  return m;
}

// Matches every lifted reduced mode and fills in the eigenvalue error against the match.
inline std::vector<ModeMatch> MatchModes(const Eigen::MatrixXd &lifted, const EigenSet &reduced,
                                         const EigenSet &fem, const SparseMatrix &M)
{
  std::vector<ModeMatch> out;
  for (Eigen::Index i = 0; i < lifted.cols(); i++)
  {
    ModeMatch m = MatchMode(lifted.col(i), fem, M);
    m.rom_mode = static_cast<int>(i + 1);
    m.relative_value_error =
        RelativeError(reduced.values(i), fem.values(m.matched_fem_index - 1));
    out.push_back(m);
  }
  return out;
}

struct TrackingAmbiguity
{
  // Transition from sweep point `step` to `step + 1`.
  int step = 0;
  int mode_a = 0;
  int mode_b = 0;
  double correlation_a = 0.0;
  double correlation_b = 0.0;
};

//
// Continuity-consistent mode labels along a parameter sweep. labels[t][i] is the tracked
// label (0-based) of the i-th sorted eigenpair at sweep point t; labels[0] is the identity.
//
struct SweepTracking
{
  std::vector<std::vector<int>> labels;
  std::vector<TrackingAmbiguity> ambiguities;

  bool IsIdentity(std::size_t t) const
  {
    for (std::size_t i = 0; i < labels[t].size(); i++)
    {
      if (labels[t][i] != static_cast<int>(i))
      {
        return false;
      }
    }
    return true;
  }
};

inline constexpr double kAmbiguityTolerance = 1e-6;

// Greedy maximum-correlation assignment between consecutive sweep points. Near-ties are
// recorded as ambiguities; the greedy choice is still used so labels stay a permutation.
inline SweepTracking TrackSweep(const std::vector<EigenSet> &sets, const SparseMatrix &M)
{
  SweepTracking tr;
  if (sets.empty())
  {
    return tr;
  }
  const int k = sets.front().Count();
  std::vector<int> identity(k);
  std::iota(identity.begin(), identity.end(), 0);
  tr.labels.push_back(identity);
  for (std::size_t t = 0; t + 1 < sets.size(); t++)
  {
    const auto &a = sets[t], &b = sets[t + 1];
    if (b.Count() != k || b.SpaceDim() != a.SpaceDim())
    {
      throw DimensionError("consecutive sweep points must share dimension and mode count");
    }
    const Eigen::MatrixXd C = (a.vectors.transpose() * (M * b.vectors)).cwiseAbs();
    std::vector<bool> row_used(k, false), col_used(k, false);
    std::vector<int> next(k, -1);
    for (int round = 0; round < k; round++)
    {
      double best = -1.0;
      int bi = -1, bj = -1;
      for (int i = 0; i < k; i++)
      {
        for (int j = 0; j < k; j++)
        {
          if (!row_used[i] && !col_used[j] && C(i, j) > best)
          {
            best = C(i, j);
            bi = i;
            bj = j;
          }
        }
      }
      // A rival in the same row or column that is (nearly) as good makes the choice unsafe.
      for (int x = 0; x < k; x++)
      {
        if (x != bj && !col_used[x] && best - C(bi, x) <= kAmbiguityTolerance)
        {
          tr.ambiguities.push_back({static_cast<int>(t), bj + 1, x + 1, best, C(bi, x)});
        }
        if (x != bi && !row_used[x] && best - C(x, bj) <= kAmbiguityTolerance)
        {
          tr.ambiguities.push_back({static_cast<int>(t), bi + 1, x + 1, best, C(x, bj)});
        }
      }
      row_used[bi] = col_used[bj] = true;
      next[bj] = tr.labels.back()[bi];
    }
    tr.labels.push_back(next);
  }
  return tr;
}

// One (N, reduced mode) row of a convergence study.
struct ConvergenceRow
{
  int N = 0;
  int rom_mode = 0;
  double rom_value = 0.0;
  // Against the FEM eigenvalue with the same index (NaN if the FEM set is too short).
  double relative_error = std::numeric_limits<double>::quiet_NaN();
  ModeMatch match;
};

// Re-truncates one projected system to each N and solves at mu; no snapshots are recomputed.
inline std::vector<ConvergenceRow> ConvergenceStudy(const RomSystem &full, const Parameter &mu,
                                                    const std::vector<int> &N_list,
                                                    const EigenSet &fem, const SparseMatrix &M,
                                                    int modes)
{
  std::vector<ConvergenceRow> rows;
  int prev = 0;
  for (int N : N_list)
  {
    if (N <= prev)
    {
      throw ConfigError("convergence N list must be strictly ascending");
    }
    prev = N;
    const RomSystem rom = TruncateRom(full, N);
    const int k = std::min(modes, N);
    const EigenSet red = RomSolve(rom, mu, k);
    const Eigen::MatrixXd lifted = Lift(rom, red, M);
    const auto matches = MatchModes(lifted, red, fem, M);
    for (int i = 0; i < k; i++)
    {
      ConvergenceRow r;
      r.N = N;
      r.rom_mode = i + 1;
      r.rom_value = red.values(i);
      if (i < fem.Count())
      {
        r.relative_error = RelativeError(red.values(i), fem.values(i));
      }
      r.match = matches[i];
      rows.push_back(r);
    }
  }
  return rows;
}

}  // namespace eigrom

#endif  // EIGROM_DIAGNOSTICS_HPP
