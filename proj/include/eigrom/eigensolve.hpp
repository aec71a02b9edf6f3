// Copyright The eigrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGROM_EIGENSOLVE_HPP
#define EIGROM_EIGENSOLVE_HPP

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "eigrom/error.hpp"
#include "eigrom/fem.hpp"

namespace eigrom
{

//
// k smallest eigenpairs of a symmetric-definite pencil (A, M) at one parameter value.
// Values ascend; columns of `vectors` are M-orthonormal and sign-fixed so that the entry of
// largest magnitude is positive (ties go to the lowest index).
//
struct EigenSet
{
  Parameter mu;
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  int Count() const { return static_cast<int>(values.size()); }
  int SpaceDim() const { return static_cast<int>(vectors.rows()); }
};

// Residual bound every returned eigenpair must satisfy.
inline constexpr double kResidualTolerance = 1e-9;

// Flips each column so that its entry of largest magnitude is positive; ties go to the
// lowest index.
inline void FixSigns(Eigen::MatrixXd &vectors)
{
  for (Eigen::Index j = 0; j < vectors.cols(); j++)
  {
    if (vectors.rows() == 0)
    {
      continue;
    }
    Eigen::Index imax = 0;
    vectors.col(j).cwiseAbs().maxCoeff(&imax);
    if (vectors(imax, j) < 0.0)
    {
      vectors.col(j) *= -1.0;
    }
  }
}

// Relative residual ||A u - lambda M u|| / (|lambda| ||M u||) of one eigenpair.
template <typename MatA, typename MatM>
double RelativeResidual(const MatA &A, const MatM &M, double lambda, const Eigen::VectorXd &u)
{
  const Eigen::VectorXd Au = A * u, Mu = M * u;
  const double r = (Au - lambda * Mu).norm();
  double denom = std::abs(lambda) * Mu.norm();
  if (denom == 0.0)
  {
    denom = Au.norm();
  }
  return denom == 0.0 ? r : r / denom;
}

template <typename MatA, typename MatM>
double MaxRelativeResidual(const MatA &A, const MatM &M, const EigenSet &set)
{
  double r = 0.0;
  for (int i = 0; i < set.Count(); i++)
  {
    r = std::max(r, RelativeResidual(A, M, set.values(i), set.vectors.col(i)));
  }
  return r;
}

// max_ij |u_i^T M u_j - delta_ij|.
template <typename MatM>
double MOrthonormalityError(const MatM &M, const Eigen::MatrixXd &vectors)
{
  const Eigen::MatrixXd G = vectors.transpose() * (M * vectors);
  return (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
}

namespace detail
{

// Pencils up to this size are solved densely.
inline constexpr int kDenseCutoff = 300;
inline constexpr int kMaxSubspaceIterations = 2000;
// Convergence target of the iteration, two orders below the contract.
inline constexpr double kSubspaceTolerance = 1e-11;

inline void CheckRequest(Eigen::Index rows_a, Eigen::Index cols_a, Eigen::Index rows_m,
                         Eigen::Index cols_m, int k)
{
  if (rows_a != cols_a || rows_m != cols_m || rows_a != rows_m)
  {
    throw DimensionError("pencil matrices must be square with equal dimensions");
  }
  if (rows_a == 0)
  {
    throw EmptySystemError("empty system: pencil has dimension 0");
  }
  if (k < 1 || k > rows_a)
  {
    throw DimensionError("requested " + std::to_string(k) + " eigenpairs of a pencil of dimension " +
                         std::to_string(rows_a));
  }
}

template <typename MatA, typename MatM>
void Finalize(const MatA &A, const MatM &M, EigenSet &set)
{
  FixSigns(set.vectors);
  const double r = MaxRelativeResidual(A, M, set);
  if (!(r <= kResidualTolerance))
  {
    throw ConvergenceError("eigensolver residual " + std::to_string(r) + " exceeds tolerance");
  }
}

}  // namespace detail

// Dense pencil, reduced to a standard symmetric problem through the Cholesky factor of M.
inline EigenSet SolveGevp(const Eigen::MatrixXd &A, const Eigen::MatrixXd &M, int k)
{
  detail::CheckRequest(A.rows(), A.cols(), M.rows(), M.cols(), k);
  const Eigen::MatrixXd Ms = 0.5 * (M + M.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(Ms);
  if (llt.info() != Eigen::Success)
  {
    throw NotPositiveDefiniteError("mass not positive definite");
  }
  const auto L = llt.matrixL();
  Eigen::MatrixXd C = L.solve(A);
  C = L.solve(C.transpose().eval());
  C = 0.5 * (C + C.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  if (es.info() != Eigen::Success)
  {
    throw ConvergenceError("dense symmetric eigensolver did not converge");
  }
  EigenSet set;
  set.values = es.eigenvalues().head(k);
  set.vectors = llt.matrixU().solve(es.eigenvectors().leftCols(k));
  detail::Finalize(A, Ms, set);
  return set;
}

//
// Sparse pencil: shift-invert subspace iteration. A block of p > k vectors is driven by
// (A - sigma M)^{-1} M, orthonormalized, and Rayleigh-Ritz projected every step; the k
// smallest Ritz pairs converge at rate (lambda_i - sigma) / (lambda_{p+1} - sigma). sigma = 0
// whenever A is positive definite, otherwise the first negative shift that makes
// A - sigma M positive definite.
//
inline EigenSet SolveGevp(const SparseMatrix &A, const SparseMatrix &M, int k)
{
  detail::CheckRequest(A.rows(), A.cols(), M.rows(), M.cols(), k);
  const int n = static_cast<int>(A.rows());
  {
    Eigen::SimplicialLLT<SparseMatrix> mass_llt(M);
    if (mass_llt.info() != Eigen::Success)
    {
      throw NotPositiveDefiniteError("mass not positive definite");
    }
  }
  if (n <= detail::kDenseCutoff)
  {
    return SolveGevp(Eigen::MatrixXd(A), Eigen::MatrixXd(M), k);
  }

  // Shift below the spectrum.
  double sigma = 0.0;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  for (int attempt = 0;; attempt++)
  {
    ldlt.compute(SparseMatrix(A - sigma * M));
    if (ldlt.info() == Eigen::Success && (ldlt.vectorD().array() > 0.0).all())
    {
      break;
    }
    if (attempt == 60)
    {
      throw ConvergenceError("could not find a shift below the spectrum");
    }
    if (sigma == 0.0)
    {
      const double a_norm = Eigen::MatrixXd(A).cwiseAbs().rowwise().sum().maxCoeff();
      sigma = -std::max(a_norm / M.diagonal().maxCoeff(), 1.0);
    }
    else
    {
      sigma *= 4.0;
    }
  }

  const int p = std::min(n, std::max(2 * k, k + 8));
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd X(n, p);
  for (Eigen::Index j = 0; j < X.cols(); j++)
  {
    for (Eigen::Index i = 0; i < X.rows(); i++)
    {
      X(i, j) = dist(rng);
    }
  }

  EigenSet set;
  for (int it = 0; it < detail::kMaxSubspaceIterations; it++)
  {
    const Eigen::MatrixXd Y = ldlt.solve(M * X);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
    const Eigen::MatrixXd AQ = A * Q, MQ = M * Q;
    Eigen::MatrixXd Ar = Q.transpose() * AQ, Mr = Q.transpose() * MQ;
    Ar = 0.5 * (Ar + Ar.transpose()).eval();
    Mr = 0.5 * (Mr + Mr.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ritz(Ar, Mr);
    if (ritz.info() != Eigen::Success)
    {
      throw ConvergenceError("Rayleigh-Ritz step failed");
    }
    X = Q * ritz.eigenvectors();
    set.values = ritz.eigenvalues().head(k);
    set.vectors = X.leftCols(k);
    if (MaxRelativeResidual(A, M, set) <= detail::kSubspaceTolerance)
    {
      detail::Finalize(A, M, set);
      return set;
    }
  }
  throw ConvergenceError("subspace iteration did not converge in " +
                         std::to_string(detail::kMaxSubspaceIterations) + " steps");
}

// Thread count for parameter sweeps, from EIGROM_NUM_THREADS (default 1).
inline int SweepThreads()
{
  if (const char *env = std::getenv("EIGROM_NUM_THREADS"))
  {
    const int n = std::atoi(env);
    if (n > 0)
    {
      return n;
    }
  }
  return 1;
}

// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index is handled by exactly
// one worker, so results written to slot i are independent of scheduling.
template <typename Fn>
void ParallelFor(int count, int threads, Fn &&fn)
{
  threads = std::max(1, std::min(threads, count));
  if (threads == 1)
  {
    for (int i = 0; i < count; i++)
    {
      fn(i);
    }
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; t++)
  {
    pool.emplace_back(
        [&, t]()
        {
          for (int i = t; i < count; i += threads)
          {
            try
            {
              fn(i);
            }
            catch (...)
            {
              errors[i] = std::current_exception();
            }
          }
        });
  }
  for (auto &th : pool)
  {
    th.join();
  }
  for (const auto &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
}

// High-fidelity solve at one parameter.
inline EigenSet SolveHifi(const AffineOperator &op, const Parameter &mu, int k)
{
  try
  {
    const auto [A, M] = op.Evaluate(mu);
    EigenSet set = SolveGevp(A, M, k);
    set.mu = mu;
    return set;
  }
  catch (const AdmissibilityError &)
  {
    throw;
  }
  catch (const NotPositiveDefiniteError &e)
  {
    throw NotPositiveDefiniteError(std::string(e.what()) + " at mu = " + FormatParameter(mu));
  }
  catch (const ConvergenceError &e)
  {
    throw ConvergenceError(std::string(e.what()) + " at mu = " + FormatParameter(mu));
  }
}

// Independent high-fidelity solves; output order matches the parameter list.
inline std::vector<EigenSet> SweepHifi(const AffineOperator &op, const std::vector<Parameter> &mus,
                                       int k, int threads = SweepThreads())
{
  for (const auto &mu : mus)
  {
    op.CheckAdmissible(mu);
  }
  std::vector<EigenSet> sets(mus.size());
  ParallelFor(static_cast<int>(mus.size()), threads,
              [&](int i) { sets[i] = SolveHifi(op, mus[i], k); });
  return sets;
}

}  // namespace eigrom

#endif  // EIGROM_EIGENSOLVE_HPP
