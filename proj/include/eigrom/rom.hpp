// Copyright The eigrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGROM_ROM_HPP
#define EIGROM_ROM_HPP

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eigrom/eigensolve.hpp"
#include "eigrom/error.hpp"
#include "eigrom/fem.hpp"
#include "eigrom/pod.hpp"

namespace eigrom
{

struct ReducedTerm
{
  Eigen::MatrixXd matrix;
  Coefficient coeff;
  std::string label;
};

//
// Galerkin projection of an affine operator onto span(V). The reduced matrices
// V^T A_h^k V and V^T M_h^k V are computed once; online evaluation only sums N x N terms.
//
class RomSystem
{
public:
  RomSystem(std::vector<ReducedTerm> stiffness, std::vector<ReducedTerm> mass, PodBasis basis,
            std::function<bool(const Parameter &)> admissible)
    : stiffness_(std::move(stiffness)), mass_(std::move(mass)), basis_(std::move(basis)),
      admissible_(std::move(admissible))
  {
  }

  int Dim() const { return basis_.N; }
  const PodBasis &Basis() const { return basis_; }
  const std::vector<ReducedTerm> &StiffnessTerms() const { return stiffness_; }
  const std::vector<ReducedTerm> &MassTerms() const { return mass_; }
  const std::function<bool(const Parameter &)> &Admissibility() const { return admissible_; }

  // Online stage: A_N(mu), M_N(mu) from the coefficient functions only.
  std::pair<Eigen::MatrixXd, Eigen::MatrixXd> Evaluate(const Parameter &mu) const
  {
    if (admissible_ && !admissible_(mu))
    {
      throw AdmissibilityError("parameter " + FormatParameter(mu) + " is not admissible");
    }
    return {Combine(stiffness_, mu), Combine(mass_, mu)};
  }

private:
  static Eigen::MatrixXd Combine(const std::vector<ReducedTerm> &terms, const Parameter &mu)
  {
    Eigen::MatrixXd A = terms.front().coeff(mu) * terms.front().matrix;
    for (std::size_t k = 1; k < terms.size(); k++)
    {
      A += terms[k].coeff(mu) * terms[k].matrix;
    }
    return A;
  }

  std::vector<ReducedTerm> stiffness_, mass_;
  PodBasis basis_;
  std::function<bool(const Parameter &)> admissible_;
};

namespace detail
{

inline Eigen::MatrixXd Galerkin(const SparseMatrix &A, const Eigen::MatrixXd &V)
{
  Eigen::MatrixXd R = V.transpose() * (A * V);
  return 0.5 * (R + R.transpose());
}

}  // namespace detail

// Offline stage: project every affine term onto the basis.
inline RomSystem Project(const AffineOperator &op, const PodBasis &basis)
{
  if (basis.V.rows() != op.Dim())
  {
    throw DimensionError("basis has " + std::to_string(basis.V.rows()) +
                         " rows, operator dimension is " + std::to_string(op.Dim()));
  }
  if (basis.V.cols() != basis.N || basis.N < 1)
  {
    throw DimensionError("basis holds " + std::to_string(basis.V.cols()) +
                         " vectors, expected N = " + std::to_string(basis.N));
  }
  std::vector<ReducedTerm> stiffness, mass;
  for (const auto &t : op.StiffnessTerms())
  {
    stiffness.push_back({detail::Galerkin(t.matrix, basis.V), t.coeff, t.label});
  }
  for (const auto &t : op.MassTerms())
  {
    mass.push_back({detail::Galerkin(t.matrix, basis.V), t.coeff, t.label});
  }
  return {std::move(stiffness), std::move(mass), basis, op.Admissibility()};
}

// Same system restricted to the first N basis vectors: the leading N x N blocks of the
// reduced matrices, identical to projecting onto Truncate(basis, N).
inline RomSystem TruncateRom(const RomSystem &rom, int N)
{
  PodBasis basis = Truncate(rom.Basis(), N);
  const auto cut = [N](const std::vector<ReducedTerm> &terms)
  {
    std::vector<ReducedTerm> out;
    for (const auto &t : terms)
    {
      out.push_back({t.matrix.topLeftCorner(N, N), t.coeff, t.label});
    }
    return out;
  };
  return {cut(rom.StiffnessTerms()), cut(rom.MassTerms()), std::move(basis), rom.Admissibility()};
}

// Reduced eigenproblem A_N(mu) x = lambda M_N(mu) x; vectors in reduced coordinates.
inline EigenSet RomSolve(const RomSystem &rom, const Parameter &mu, int k)
{
  if (k < 1 || k > rom.Dim())
  {
    throw DimensionError("requested " + std::to_string(k) + " reduced eigenpairs, N = " +
                         std::to_string(rom.Dim()));
  }
  const auto [A, M] = rom.Evaluate(mu);
  try
  {
    EigenSet set = SolveGevp(A, M, k);
    set.mu = mu;
    return set;
  }
  catch (const NotPositiveDefiniteError &)
  {
    const auto &sv = rom.Basis().singular_values;
    throw NotPositiveDefiniteError(
        "reduced mass not positive definite at mu = " + FormatParameter(mu) + " (N = " +
        std::to_string(rom.Dim()) + ", sigma_N / sigma_1 = " +
        std::to_string(sv(rom.Dim() - 1) / sv(0)) + ")");
  }
}

// Reduced eigenvectors mapped back to finite element coordinates, M_h-normalized and
// sign-fixed like high-fidelity eigenvectors.
inline Eigen::MatrixXd Lift(const RomSystem &rom, const EigenSet &reduced,
                            const SparseMatrix &mass)
{
  Eigen::MatrixXd U = rom.Basis().V * reduced.vectors;
  for (Eigen::Index j = 0; j < U.cols(); j++)
  {
    const double norm = std::sqrt(U.col(j).dot(mass * U.col(j)));
    U.col(j) /= norm;
  }
  FixSigns(U);
  return U;
}

}  // namespace eigrom

#endif  // EIGROM_ROM_HPP
