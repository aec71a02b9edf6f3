// Copyright The eigrom Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "eigrom/pod.hpp"
#include "oracles.hpp"

using namespace eigrom;

namespace
{

const AffineOperator &Op1D()
{
  static const AffineOperator op = [] {
    const auto p = BuildProblem1D();
    return BuildAffineOperator(p, BuildStructuredMesh(p.rect, 40, DiagonalPattern::kAlternating));
  }();
  return op;
}

const std::vector<EigenSet> &Sets29()
{
  static const std::vector<EigenSet> sets =
      SweepHifi(Op1D(), Uniform1D(-1.4, 1.4, 0.1).points, 6);
  return sets;
}

double TailEnergy(const Eigen::VectorXd &s, int N)
{
  return s.tail(s.size() - N).squaredNorm() / s.squaredNorm();
}

}  // namespace

TEST(Strategy, Validation)
{
  EXPECT_THROW(SnapshotStrategy::Modes({}), ConfigError);
  EXPECT_THROW(SnapshotStrategy::Modes({0}), ConfigError);
  EXPECT_THROW(SnapshotStrategy::Modes({2, 1}), ConfigError);
  EXPECT_THROW(SnapshotStrategy::Modes({1, 1}), ConfigError);
  EXPECT_THROW(SnapshotStrategy::Combination({1, 2}, {1.0}), ConfigError);
  EXPECT_THROW(SnapshotStrategy::Combination({1, 2}, {1.0, 0.0}), ConfigError);
  const auto s = SnapshotStrategy::Sum({1, 2, 3});
  EXPECT_EQ(s.GetKind(), SnapshotStrategy::Kind::kCombination);
  EXPECT_EQ(s.ColumnsPerSample(), 1);
  EXPECT_EQ(s.MaxMode(), 3);
  EXPECT_EQ(s.Describe(), "combination(1,2,3;1,1,1)");
  EXPECT_EQ(SnapshotStrategy::Modes({3, 4}).Describe(), "modes(3,4)");
  EXPECT_EQ(SnapshotStrategy::Modes({3, 4}).ColumnsPerSample(), 2);
}

TEST(Snapshots, ColumnCountsAndOrder)
{
  const SampleSet s29 = Uniform1D(-1.4, 1.4, 0.1);
  const auto &sets = Sets29();
  const SnapshotSet one = BuildSnapshots(sets, s29, SnapshotStrategy::Modes({1}));
  EXPECT_EQ(one.matrix.cols(), 29);
  EXPECT_EQ(one.matrix.rows(), 1521);
  const SnapshotSet three = BuildSnapshots(sets, s29, SnapshotStrategy::Modes({1, 2, 3}));
  ASSERT_EQ(three.matrix.cols(), 87);
  ASSERT_EQ(three.provenance.size(), 87u);
  EXPECT_EQ(three.provenance[4].mu, s29.points[1]);
  EXPECT_EQ(three.provenance[4].mode, 2);
  EXPECT_EQ(three.matrix.col(4), sets[1].vectors.col(1));
  EXPECT_EQ(three.matrix.col(86), sets[28].vectors.col(2));
  const SnapshotSet sum = BuildSnapshots(sets, s29, SnapshotStrategy::Sum({1, 2, 3}));
  EXPECT_EQ(sum.matrix.cols(), 29);
  EXPECT_EQ(sum.provenance[3].mode, 0);
  EXPECT_THROW(BuildSnapshots(sets, s29, SnapshotStrategy::Modes({7})), DimensionError);
  EXPECT_THROW(BuildSnapshots({}, SampleSet{}, SnapshotStrategy::Modes({1})), DimensionError);
  EXPECT_THROW(CollectSnapshots(Op1D(), s29, SnapshotStrategy::Modes({7}), 6), DimensionError);
}

TEST(Snapshots, CombinationEqualsIndependentSolves)
{
  const SampleSet pts = Explicit({{-0.3}, {1.1}});
  const SnapshotSet c =
      CollectSnapshots(Op1D(), pts, SnapshotStrategy::Combination({1, 3}, {2.0, -0.5}), 4);
  for (int t = 0; t < 2; t++)
  {
    // Same k, so the sign-fixed vectors are the ones that entered the snapshot.
    const EigenSet e = SolveHifi(Op1D(), pts.points[t], 4);
    const Eigen::VectorXd expected = 2.0 * e.vectors.col(0) - 0.5 * e.vectors.col(2);
    EXPECT_LE((c.matrix.col(t) - expected).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(GramSvd, SingleColumn)
{
  Eigen::MatrixXd S(3, 1);
  S << 3.0, 0.0, 4.0;
  const PodBasis b = GramSvd(S);
  EXPECT_EQ(b.rank, 1);
  EXPECT_NEAR(b.singular_values(0), 5.0, 1e-14);
  EXPECT_NEAR(b.V(0, 0), 0.6, 1e-14);
  EXPECT_NEAR(b.V(2, 0), 0.8, 1e-14);
}

TEST(GramSvd, MatchesJacobiOracle)
{
  const Eigen::MatrixXd S = oracle::RandomMatrix(50, 12, 3);
  const PodBasis b = GramSvd(S);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeThinU);
  ASSERT_EQ(b.rank, 12);
  EXPECT_LE((b.singular_values - svd.singularValues()).cwiseAbs().maxCoeff(),
            1e-12 * svd.singularValues()(0));
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(12, 12);
  EXPECT_LE(oracle::MaxAbs(b.V.transpose() * b.V - I), 1e-12);
  for (int i = 0; i < 12; i++)
  {
    EXPECT_NEAR(std::abs(b.V.col(i).dot(svd.matrixU().col(i))), 1.0, 1e-8);
  }
}

TEST(GramSvd, RankDetection)
{
  Eigen::VectorXd sigma(4);
  sigma << 10.0, 1.0, 0.1, 0.0;
  const Eigen::MatrixXd S = oracle::WithSingularValues(30, sigma, 9);
  const PodBasis b = GramSvd(S);
  // The Gram matrix resolves singular values only down to about sqrt(eps) * sigma_1, so the
  // exact zero may survive as a tiny noise value.
  ASSERT_GE(b.rank, 3);
  ASSERT_LE(b.rank, 4);
  EXPECT_NEAR(b.singular_values(2), 0.1, 1e-10);
  if (b.rank == 4)
  {
    EXPECT_LE(b.singular_values(3), 1e-6 * b.singular_values(0));
  }
  EXPECT_LE(oracle::MaxAbs(b.V.transpose() * b.V - Eigen::MatrixXd::Identity(b.rank, b.rank)),
            1e-12);
  EXPECT_THROW(GramSvd(Eigen::MatrixXd::Zero(5, 3)), RankError);
  EXPECT_THROW(GramSvd(Eigen::MatrixXd(0, 0)), RankError);
}

TEST(SelectDim, EnergyCriterion)
{
  Eigen::VectorXd s(3);
  s << 1.0, 1e-3, 1e-5;
  EXPECT_EQ(SelectDim(s, 1e-5), 1);
  EXPECT_EQ(SelectDim(s, 1e-7), 2);
  EXPECT_EQ(SelectDim(s, 1e-11), 3);
  EXPECT_EQ(SelectDim(s, 0.5), 1);
  Eigen::VectorXd flat = Eigen::VectorXd::Ones(4);
  EXPECT_EQ(SelectDim(flat, 0.25), 3);
  EXPECT_EQ(SelectDim(flat, 1e-8), 4);
  EXPECT_THROW(SelectDim(s, 0.0), ConfigError);
  EXPECT_THROW(SelectDim(s, 1.0), ConfigError);
}

TEST(Truncate, IdempotentAndChecked)
{
  const PodBasis b = GramSvd(oracle::RandomMatrix(20, 6, 5));
  const PodBasis t3 = Truncate(b, 3);
  EXPECT_EQ(t3.N, 3);
  EXPECT_EQ(t3.V.cols(), 3);
  EXPECT_EQ(t3.singular_values.size(), 6);
  EXPECT_EQ(Truncate(t3, 3).V, t3.V);
  EXPECT_EQ(t3.V, b.V.leftCols(3));
  EXPECT_THROW(Truncate(b, 0), DimensionError);
  EXPECT_THROW(Truncate(b, 7), DimensionError);
  EXPECT_THROW(Truncate(t3, 4), DimensionError);
}

// The squared projection error of the snapshots equals the discarded energy.
TEST(Truncate, EckartYoungOnRandomData)
{
  Eigen::VectorXd sigma(10);
  for (int i = 0; i < 10; i++)
  {
    sigma(i) = std::pow(10.0, -i);
  }
  const Eigen::MatrixXd S = oracle::WithSingularValues(80, sigma, 21);
  const PodBasis b = TruncateByTolerance(GramSvd(S), 5e-8);
  EXPECT_EQ(b.N, 4);
  EXPECT_EQ(b.eps_tol, 5e-8);
  const double err = ProjectionErrorSquared(S, b.V) / S.squaredNorm();
  EXPECT_LE(err, 5e-8);
  EXPECT_NEAR(err, TailEnergy(b.singular_values, b.N), 1e-12);
}

TEST(Truncate, EckartYoungOnEigenvectorSnapshots)
{
  const SnapshotSet s =
      BuildSnapshots(Sets29(), Uniform1D(-1.4, 1.4, 0.1), SnapshotStrategy::Modes({1}));
  const PodBasis full = GramSvd(s.matrix);
  const PodBasis b = TruncateByTolerance(full, 1e-8);
  EXPECT_EQ(b.N, 9);
  const double err = ProjectionErrorSquared(s.matrix, b.V) / s.matrix.squaredNorm();
  EXPECT_LE(err, 1e-8);
  EXPECT_NEAR(err, TailEnergy(full.singular_values, b.N), 1e-11);
  EXPECT_LE(oracle::MaxAbs(b.V.transpose() * b.V - Eigen::MatrixXd::Identity(b.N, b.N)), 1e-12);
}

TEST(GramSvd, SpanInvariantUnderColumnSigns)
{
  Eigen::MatrixXd S =
      BuildSnapshots(Sets29(), Uniform1D(-1.4, 1.4, 0.1), SnapshotStrategy::Modes({2})).matrix;
  const PodBasis a = GramSvd(S);
  for (int j = 0; j < S.cols(); j += 3)
  {
    S.col(j) *= -1.0;
  }
  const PodBasis b = GramSvd(S);
  EXPECT_LE((a.singular_values - b.singular_values).cwiseAbs().maxCoeff(),
            1e-10 * a.singular_values(0));
  const Eigen::MatrixXd Va = a.V.leftCols(8), Vb = b.V.leftCols(8);
  EXPECT_LE(oracle::MaxAbs(Va * Va.transpose() - Vb * Vb.transpose()), 1e-8);
}

TEST(Snapshots, OrthogonalityStructure)
{
  const auto &sets = Sets29();
  const SparseMatrix M = Op1D().Mass({0.0});
  // Modes at one parameter are M-orthogonal.
  EXPECT_LE(MOrthonormalityError(M, sets[5].vectors), 1e-10);
  // Modes at different parameters are not.
  double cross = 0.0;
  for (int i = 0; i < 3; i++)
  {
    for (int j = 0; j < 3; j++)
    {
      if (i != j)
      {
        cross = std::max(cross, std::abs(sets[2].vectors.col(i).dot(M * sets[20].vectors.col(j))));
      }
    }
  }
  EXPECT_GT(cross, 1e-3);
}
