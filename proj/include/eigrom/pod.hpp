// Copyright The eigrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGROM_POD_HPP
#define EIGROM_POD_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eigrom/eigensolve.hpp"
#include "eigrom/error.hpp"
#include "eigrom/sampling.hpp"

namespace eigrom
{

//
// Which high-fidelity eigenvectors go into the snapshot matrix: either every listed mode as
// its own column, or one column per sample holding sum_j c_j u_j.
//
class SnapshotStrategy
{
public:
  enum class Kind
  {
    kModes,
    kCombination,
  };

  static SnapshotStrategy Modes(std::vector<int> modes)
  {
    Validate(modes);
    return SnapshotStrategy(Kind::kModes, std::move(modes), {});
  }

  static SnapshotStrategy Combination(std::vector<int> modes, std::vector<double> coefficients)
  {
    Validate(modes);
    if (coefficients.size() != modes.size())
    {
      throw ConfigError("combination needs one coefficient per mode");
    }
    for (double c : coefficients)
    {
      if (c == 0.0 || !std::isfinite(c))
      {
        throw ConfigError("combination coefficients must be finite and nonzero");
      }
    }
    return SnapshotStrategy(Kind::kCombination, std::move(modes), std::move(coefficients));
  }

  // Sum of the listed modes with unit coefficients.
  static SnapshotStrategy Sum(std::vector<int> modes)
  {
    std::vector<double> ones(modes.size(), 1.0);
    return Combination(std::move(modes), std::move(ones));
  }

  Kind GetKind() const { return kind_; }
  const std::vector<int> &ModeIndices() const { return modes_; }
  const std::vector<double> &Coefficients() const { return coefficients_; }
  int MaxMode() const { return modes_.back(); }
  int ColumnsPerSample() const
  {
    return kind_ == Kind::kModes ? static_cast<int>(modes_.size()) : 1;
  }

  // "modes(1,2,3)" or "combination(1,2,3;1,1,1)".
  std::string Describe() const
  {
    std::ostringstream os;
    os.precision(17);
    os << (kind_ == Kind::kModes ? "modes(" : "combination(");
    for (std::size_t i = 0; i < modes_.size(); i++)
    {
      os << (i ? "," : "") << modes_[i];
    }
    if (kind_ == Kind::kCombination)
    {
      os << ';';
      for (std::size_t i = 0; i < coefficients_.size(); i++)
      {
        os << (i ? "," : "") << coefficients_[i];
      }
    }
    os << ')';
    return os.str();
  }

private:
  SnapshotStrategy(Kind kind, std::vector<int> modes, std::vector<double> coefficients)
    : kind_(kind), modes_(std::move(modes)), coefficients_(std::move(coefficients))
  {
  }

  static void Validate(const std::vector<int> &modes)
  {
    if (modes.empty())
    {
      throw ConfigError("snapshot strategy needs at least one mode");
    }
    for (std::size_t i = 0; i < modes.size(); i++)
    {
      if (modes[i] < 1 || (i > 0 && modes[i] <= modes[i - 1]))
      {
        throw ConfigError("mode indices must be positive and strictly increasing");
      }
    }
  }

  Kind kind_;
  std::vector<int> modes_;
  std::vector<double> coefficients_;
};

// Where a snapshot column came from. mode is 1-based, 0 for a combination column.
struct SnapshotSource
{
  Parameter mu;
  int mode = 0;
};

struct SnapshotSet
{
  Eigen::MatrixXd matrix;
  std::vector<SnapshotSource> provenance;
  SnapshotStrategy strategy = SnapshotStrategy::Modes({1});
  SampleSet samples;
};

// Snapshot matrix from already computed eigensets, one per sample. Columns are ordered by
// sample, then by ascending mode: u_1(mu_1) | u_2(mu_1) | ... | u_1(mu_2) | ...
inline SnapshotSet BuildSnapshots(const std::vector<EigenSet> &sets, const SampleSet &samples,
                                  const SnapshotStrategy &strategy)
{
  if (sets.empty() || sets.size() != samples.points.size())
  {
    throw DimensionError("need one eigenset per sample");
  }
  const int rows = sets.front().SpaceDim();
  const int per = strategy.ColumnsPerSample();
  SnapshotSet s{Eigen::MatrixXd(rows, per * static_cast<Eigen::Index>(sets.size())), {}, strategy,
                samples};
  const auto &modes = strategy.ModeIndices();
  for (std::size_t t = 0; t < sets.size(); t++)
  {
    const auto &set = sets[t];
    if (set.Count() < strategy.MaxMode() || set.SpaceDim() != rows)
    {
      throw DimensionError("eigenset at mu = " + FormatParameter(set.mu) + " has " +
                           std::to_string(set.Count()) + " modes, strategy needs " +
                           std::to_string(strategy.MaxMode()));
    }
    const Eigen::Index base = static_cast<Eigen::Index>(t) * per;
    if (strategy.GetKind() == SnapshotStrategy::Kind::kModes)
    {
      for (int j = 0; j < per; j++)
      {
        s.matrix.col(base + j) = set.vectors.col(modes[j] - 1);
        s.provenance.push_back({set.mu, modes[j]});
      }
    }
    else
    {
      Eigen::VectorXd col = Eigen::VectorXd::Zero(rows);
      for (std::size_t j = 0; j < modes.size(); j++)
      {
        col += strategy.Coefficients()[j] * set.vectors.col(modes[j] - 1);
      }
      s.matrix.col(base) = col;
      s.provenance.push_back({set.mu, 0});
    }
  }
  return s;
}

// Solves the high-fidelity problem at every sample (k modes each) and assembles snapshots.
inline SnapshotSet CollectSnapshots(const AffineOperator &op, const SampleSet &samples,
                                    const SnapshotStrategy &strategy, int k,
                                    std::vector<EigenSet> *solved = nullptr)
{
  if (samples.points.empty())
  {
    throw DimensionError("no samples to collect snapshots from");
  }
  if (strategy.MaxMode() > k)
  {
    throw DimensionError("strategy uses mode " + std::to_string(strategy.MaxMode()) +
                         " but only " + std::to_string(k) + " modes are solved");
  }
  std::vector<EigenSet> sets = SweepHifi(op, samples.points, k);
  SnapshotSet s = BuildSnapshots(sets, samples, strategy);
  if (solved)
  {
    *solved = std::move(sets);
  }
  return s;
}

//
// POD basis from the snapshot method: V holds the leading left singular vectors of S,
// singular_values the full descending list down to the numerical rank.
//
struct PodBasis
{
  Eigen::MatrixXd V;
  Eigen::VectorXd singular_values;
  // Right singular vectors (N_s x rank), kept for reconstruction checks.
  Eigen::MatrixXd right_vectors;
  int N = 0;
  int rank = 0;
  // Tolerance used to pick N; NaN when N was fixed directly.
  double eps_tol = std::numeric_limits<double>::quiet_NaN();
};

//
// Method of snapshots: eigendecompose the Gram matrix S^T S, take sigma_i = sqrt of its
// eigenvalues, drop sigma_i <= max(N_h, N_s) eps sigma_1, recover zeta_i = S psi_i / sigma_i
// and re-orthonormalize with one Householder QR (signs chosen so that R has a positive
// diagonal, which keeps each zeta_i's orientation).
//
inline PodBasis GramSvd(const Eigen::MatrixXd &S)
{
  if (S.rows() == 0 || S.cols() == 0)
  {
    throw RankError("empty snapshot matrix");
  }
  Eigen::MatrixXd G = S.transpose() * S;
  G = 0.5 * (G + G.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  if (es.info() != Eigen::Success)
  {
    throw ConvergenceError("Gram eigensolver did not converge");
  }
  const Eigen::Index ns = S.cols();
  Eigen::VectorXd sigma(ns);
  Eigen::MatrixXd psi(ns, ns);
  for (Eigen::Index i = 0; i < ns; i++)
  {
    sigma(i) = std::sqrt(std::max(es.eigenvalues()(ns - 1 - i), 0.0));
    psi.col(i) = es.eigenvectors().col(ns - 1 - i);
  }
  if (!(sigma(0) > 0.0))
  {
    throw RankError("snapshot matrix has rank 0");
  }
  const double tau = static_cast<double>(std::max(S.rows(), S.cols())) *
                     std::numeric_limits<double>::epsilon() * sigma(0);
  int r = 0;
  while (r < ns && r < S.rows() && sigma(r) > tau)
  {
    r++;
  }

  Eigen::MatrixXd Z = S * psi.leftCols(r);
  for (int i = 0; i < r; i++)
  {
    Z.col(i) /= sigma(i);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Z);
  Eigen::MatrixXd V = qr.householderQ() * Eigen::MatrixXd::Identity(S.rows(), r);
  const Eigen::MatrixXd R = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  for (int i = 0; i < r; i++)
  {
    if (R(i, i) < 0.0)
    {
      V.col(i) *= -1.0;
    }
  }

  PodBasis b;
  b.V = std::move(V);
  b.singular_values = sigma.head(r);
  b.right_vectors = psi.leftCols(r);
  b.N = r;
  b.rank = r;
  return b;
}

// Smallest N with sum_{i<=N} sigma_i^2 / sum_{i<=r} sigma_i^2 >= 1 - eps_tol.
inline int SelectDim(const Eigen::VectorXd &singular_values, double eps_tol)
{
  if (!(eps_tol > 0.0 && eps_tol < 1.0))
  {
    throw ConfigError("eps_tol must lie in (0, 1)");
  }
  if (singular_values.size() == 0)
  {
    throw RankError("no singular values");
  }
  const double total = singular_values.squaredNorm();
  double partial = 0.0;
  for (Eigen::Index i = 0; i < singular_values.size(); i++)
  {
    partial += singular_values(i) * singular_values(i);
    if (partial / total >= 1.0 - eps_tol)
    {
      return static_cast<int>(i + 1);
    }
  }
  return static_cast<int>(singular_values.size());
}

// Keeps the first N basis vectors; singular values are retained in full for reporting.
inline PodBasis Truncate(const PodBasis &basis, int N)
{
  if (N < 1 || N > basis.rank || N > basis.V.cols())
  {
    throw DimensionError("cannot truncate a basis with " + std::to_string(basis.V.cols()) +
                         " vectors (rank " + std::to_string(basis.rank) + ") to " +
                         std::to_string(N));
  }
  PodBasis b = basis;
  b.V = basis.V.leftCols(N);
  b.N = N;
  return b;
}

// Truncation chosen by the energy criterion.
inline PodBasis TruncateByTolerance(const PodBasis &basis, double eps_tol)
{
  PodBasis b = Truncate(basis, SelectDim(basis.singular_values, eps_tol));
  b.eps_tol = eps_tol;
  return b;
}

// ||S - V V^T S||_F^2, the squared error of projecting the snapshots onto span(V).
inline double ProjectionErrorSquared(const Eigen::MatrixXd &S, const Eigen::MatrixXd &V)
{
  return (S - V * (V.transpose() * S)).squaredNorm();
}

}  // namespace eigrom

#endif  // EIGROM_POD_HPP
