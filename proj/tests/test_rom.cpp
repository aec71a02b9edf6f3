// Copyright The eigrom Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "eigrom/rom.hpp"
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

const SampleSet &Train29()
{
  static const SampleSet s = Uniform1D(-1.4, 1.4, 0.1);
  return s;
}

const std::vector<EigenSet> &Sets29()
{
  static const std::vector<EigenSet> sets = SweepHifi(Op1D(), Train29().points, 6);
  return sets;
}

PodBasis BasisFor(const SnapshotStrategy &strategy)
{
  return GramSvd(BuildSnapshots(Sets29(), Train29(), strategy).matrix);
}

PodBasis FromColumns(const Eigen::MatrixXd &V)
{
  PodBasis b;
  b.V = V;
  b.N = b.rank = static_cast<int>(V.cols());
  b.singular_values = Eigen::VectorXd::Ones(V.cols());
  return b;
}

}  // namespace

TEST(Project, IdentityBasisReproducesOperator)
{
  const auto p = BuildProblem1D();
  const AffineOperator op = BuildAffineOperator(p, BuildStructuredMesh(p.rect, 6));
  const RomSystem rom = Project(op, FromColumns(Eigen::MatrixXd::Identity(op.Dim(), op.Dim())));
  ASSERT_EQ(rom.Dim(), op.Dim());
  for (std::size_t k = 0; k < op.StiffnessTerms().size(); k++)
  {
    EXPECT_LE(oracle::MaxAbs(rom.StiffnessTerms()[k].matrix -
                             Eigen::MatrixXd(op.StiffnessTerms()[k].matrix)),
              1e-15);
  }
  const auto [A, M] = rom.Evaluate({0.4});
  EXPECT_LE(oracle::MaxAbs(A - Eigen::MatrixXd(op.Stiffness({0.4}))), 1e-14);
  EXPECT_LE(oracle::MaxAbs(M - Eigen::MatrixXd(op.Mass({0.4}))), 1e-15);
  const EigenSet red = RomSolve(rom, {0.4}, 3), hifi = SolveHifi(op, {0.4}, 3);
  EXPECT_LE((red.values - hifi.values).cwiseAbs().maxCoeff(), 1e-12 * hifi.values(2));
}

TEST(Project, RayleighQuotientOfOneEigenvector)
{
  const EigenSet e = SolveHifi(Op1D(), {0.9}, 1);
  const Eigen::MatrixXd v = e.vectors.col(0).normalized();
  const RomSystem rom = Project(Op1D(), FromColumns(v));
  const EigenSet red = RomSolve(rom, {0.9}, 1);
  EXPECT_NEAR(red.values(0), e.values(0), 1e-10 * e.values(0));
}

TEST(Project, SingleSnapshotGivesRayleighQuotient)
{
  const Eigen::VectorXd x = oracle::RandomMatrix(Op1D().Dim(), 1, 4).col(0);
  const RomSystem rom = Project(Op1D(), FromColumns(x));
  const auto [A, M] = Op1D().Evaluate({-0.2});
  const double rq = x.dot(A * x) / x.dot(M * x);
  EXPECT_NEAR(RomSolve(rom, {-0.2}, 1).values(0), rq, 1e-12 * rq);
}

TEST(Project, SymmetricAndChecked)
{
  const RomSystem rom = Project(Op1D(), BasisFor(SnapshotStrategy::Modes({1, 2})));
  for (const auto *terms : {&rom.StiffnessTerms(), &rom.MassTerms()})
  {
    for (const auto &t : *terms)
    {
      EXPECT_EQ(t.matrix, t.matrix.transpose());
      EXPECT_EQ(t.matrix.rows(), rom.Dim());
    }
  }
  EXPECT_THROW(Project(Op1D(), FromColumns(Eigen::MatrixXd::Identity(10, 2))), DimensionError);
  EXPECT_THROW(RomSolve(rom, {0.0}, rom.Dim() + 1), DimensionError);
  EXPECT_THROW(RomSolve(rom, {0.0}, 0), DimensionError);
  EXPECT_THROW(RomSolve(rom, {1.6}, 1), AdmissibilityError);
}

TEST(RomSolve, FirstModeAtMinusPointSevenFive)
{
  const PodBasis b = TruncateByTolerance(BasisFor(SnapshotStrategy::Modes({1})), 1e-8);
  const RomSystem rom = Project(Op1D(), b);
  const EigenSet red = RomSolve(rom, {-0.75}, 1);
  const EigenSet fem = SolveHifi(Op1D(), {-0.75}, 1);
  EXPECT_LE(std::abs(red.values(0) - fem.values(0)) / fem.values(0), 1e-6);
  // Loose cross-check against the published value; the meshes differ.
  EXPECT_NEAR(red.values(0), 7.00305328, 1e-2 * 7.0);
}

TEST(RomSolve, ExactAtTrainingPointsWithFullRank)
{
  const RomSystem rom = Project(Op1D(), BasisFor(SnapshotStrategy::Modes({1, 2, 3})));
  for (int t : {0, 9, 19, 28})
  {
    const EigenSet &fem = Sets29()[t];
    const EigenSet red = RomSolve(rom, fem.mu, 3);
    for (int i = 0; i < 3; i++)
    {
      EXPECT_NEAR(red.values(i), fem.values(i), 1e-9 * fem.values(i));
    }
  }
}

TEST(RomSolve, UpperBoundAndMonotoneInN)
{
  const PodBasis full = BasisFor(SnapshotStrategy::Modes({1, 2}));
  const RomSystem rom = Project(Op1D(), full);
  for (double mu : {-1.25, -0.75, 0.5, 1.25})
  {
    const EigenSet fem = SolveHifi(Op1D(), {mu}, 4);
    for (int N : {4, 8, 16, full.rank})
    {
      const EigenSet red = RomSolve(TruncateRom(rom, N), {mu}, 4);
      for (int i = 0; i < 4; i++)
      {
        EXPECT_GE(red.values(i), fem.values(i) * (1.0 - 1e-9));
      }
    }
  }
  const Parameter mu_t = Sets29()[7].mu;
  double prev = std::numeric_limits<double>::infinity();
  for (int N = 1; N <= full.rank; N++)
  {
    const double l = RomSolve(TruncateRom(rom, N), mu_t, 1).values(0);
    EXPECT_LE(l, prev + 1e-12 * std::abs(prev));
    prev = l;
  }
}

TEST(TruncateRom, EqualsProjectionOfTruncatedBasis)
{
  const PodBasis full = BasisFor(SnapshotStrategy::Modes({2}));
  const RomSystem a = TruncateRom(Project(Op1D(), full), 7);
  const RomSystem b = Project(Op1D(), Truncate(full, 7));
  EXPECT_EQ(a.Dim(), 7);
  for (std::size_t k = 0; k < a.StiffnessTerms().size(); k++)
  {
    EXPECT_LE(oracle::MaxAbs(a.StiffnessTerms()[k].matrix - b.StiffnessTerms()[k].matrix), 1e-11);
  }
  EXPECT_LE(oracle::MaxAbs(a.MassTerms()[0].matrix - b.MassTerms()[0].matrix), 1e-14);
  EXPECT_THROW(TruncateRom(a, 8), DimensionError);
}

TEST(Lift, NormalizedAndSignFixed)
{
  const RomSystem rom = Project(Op1D(), BasisFor(SnapshotStrategy::Modes({1, 2, 3})));
  const EigenSet red = RomSolve(rom, {0.3}, 3);
  const SparseMatrix M = Op1D().Mass({0.3});
  const Eigen::MatrixXd U = Lift(rom, red, M);
  ASSERT_EQ(U.rows(), Op1D().Dim());
  EXPECT_LE(MOrthonormalityError(M, U), 1e-10);
  for (int j = 0; j < 3; j++)
  {
    Eigen::Index imax = 0;
    U.col(j).cwiseAbs().maxCoeff(&imax);
    EXPECT_GT(U(imax, j), 0.0);
  }
}
