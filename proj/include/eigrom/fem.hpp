// Copyright The eigrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGROM_FEM_HPP
#define EIGROM_FEM_HPP

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "eigrom/error.hpp"
#include "eigrom/mesh.hpp"

namespace eigrom
{

using SparseMatrix = Eigen::SparseMatrix<double>;
using Parameter = std::vector<double>;
using Coefficient = std::function<double(const Parameter &)>;

inline std::string FormatParameter(const Parameter &mu)
{
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < mu.size(); i++)
  {
    os << (i ? ", " : "") << mu[i];
  }
  os << ')';
  return os.str();
}

// One affine diffusion contribution theta(mu) * div(D grad u).
struct DiffusionTerm
{
  Eigen::Matrix2d D = Eigen::Matrix2d::Zero();
  Coefficient coeff;
  std::string label;
};

// One affine mass contribution Theta(mu) * density * (u, v)_{L2}.
struct MassTerm
{
  double density = 1.0;
  Coefficient coeff;
  std::string label;
};

struct ParameterBox
{
  std::vector<double> lower, upper;

  int Dim() const { return static_cast<int>(lower.size()); }
  bool Contains(const Parameter &mu) const
  {
    if (mu.size() != lower.size())
    {
      return false;
    }
    for (std::size_t i = 0; i < mu.size(); i++)
    {
      if (!(mu[i] >= lower[i] && mu[i] <= upper[i]))
      {
        return false;
      }
    }
    return true;
  }
};

//
// Parametric elliptic eigenproblem -div(A(mu) grad u) = lambda u on a rectangle with
// homogeneous Dirichlet data, where A(mu) = sum_k theta_k(mu) D_k.
//
struct ProblemDef
{
  std::string name;
  Rect rect;
  std::vector<DiffusionTerm> diffusion_terms;
  std::vector<MassTerm> mass_terms;
  ParameterBox domain;

  Eigen::Matrix2d DiffusionAt(const Parameter &mu) const
  {
    Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
    for (const auto &t : diffusion_terms)
    {
      A += t.coeff(mu) * t.D;
    }
    return A;
  }

  // A(mu) must be symmetric positive definite for the problem to be elliptic.
  bool IsAdmissible(const Parameter &mu) const
  {
    if (static_cast<int>(mu.size()) != domain.Dim())
    {
      return false;
    }
    for (double m : mu)
    {
      if (!std::isfinite(m))
      {
        return false;
      }
    }
    const Eigen::Matrix2d A = DiffusionAt(mu);
    if (!A.allFinite())
    {
      return false;
    }
    const double det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    return A(0, 0) > 0.0 && det > 0.0;
  }
};

// -div(A(mu) grad u) = lambda u on (-1,1)^2 with A(mu) = [[1, mu], [mu, 2]], |mu| < sqrt(2).
inline ProblemDef BuildProblem1D()
{
  ProblemDef p;
  p.name = "problem_1d";
  p.rect = {-1.0, 1.0, -1.0, 1.0};
  Eigen::Matrix2d d1, d2;
  d1 << 1.0, 0.0, 0.0, 2.0;
  d2 << 0.0, 1.0, 1.0, 0.0;
  p.diffusion_terms.push_back({d1, [](const Parameter &) { return 1.0; }, "diag(1,2)"});
  p.diffusion_terms.push_back({d2, [](const Parameter &mu) { return mu[0]; }, "offdiag*mu"});
  p.mass_terms.push_back({1.0, [](const Parameter &) { return 1.0; }, "L2"});
  p.domain = {{-std::sqrt(2.0)}, {std::sqrt(2.0)}};
  return p;
}

// -div(A(mu) grad u) = lambda u on (0,1)^2 with
// A(mu) = [[1/mu1^2, 0.7/mu2], [0.7/mu2, 1/mu2^2]], mu in [0.4, 1]^2.
inline ProblemDef BuildProblem2D()
{
  ProblemDef p;
  p.name = "problem_2d";
  p.rect = {0.0, 1.0, 0.0, 1.0};
  Eigen::Matrix2d d1, d2, d3;
  d1 << 1.0, 0.0, 0.0, 0.0;
  d2 << 0.0, 1.0, 1.0, 0.0;
  d3 << 0.0, 0.0, 0.0, 1.0;
  p.diffusion_terms.push_back(
      {d1, [](const Parameter &mu) { return 1.0 / (mu[0] * mu[0]); }, "xx/mu1^2"});
  p.diffusion_terms.push_back({d2, [](const Parameter &mu) { return 0.7 / mu[1]; }, "xy*0.7/mu2"});
  p.diffusion_terms.push_back(
      {d3, [](const Parameter &mu) { return 1.0 / (mu[1] * mu[1]); }, "yy/mu2^2"});
  p.mass_terms.push_back({1.0, [](const Parameter &) { return 1.0; }, "L2"});
  p.domain = {{0.4, 0.4}, {1.0, 1.0}};
  return p;
}

// Parameter-free Dirichlet Laplacian, used for sanity checks against analytic spectra.
inline ProblemDef BuildLaplaceProblem(const Rect &rect)
{
  ProblemDef p;
  p.name = "laplace";
  p.rect = rect;
  p.diffusion_terms.push_back(
      {Eigen::Matrix2d::Identity(), [](const Parameter &) { return 1.0; }, "laplace"});
  p.mass_terms.push_back({1.0, [](const Parameter &) { return 1.0; }, "L2"});
  return p;
}

namespace detail
{

// Gradients of the three P1 hat functions on a triangle (constant per element).
inline std::array<Eigen::Vector2d, 3> HatGradients(const TriMesh &mesh, const Triangle &t,
                                                   double area)
{
  const auto &p = mesh.Vertices();
  std::array<Eigen::Vector2d, 3> g;
  for (int a = 0; a < 3; a++)
  {
    const auto &pb = p[t[(a + 1) % 3]], &pc = p[t[(a + 2) % 3]];
    g[a] = Eigen::Vector2d(pb.y - pc.y, pc.x - pb.x) / (2.0 * area);
  }
  return g;
}

// Builds an exactly symmetric matrix from per-element local matrices. Off-diagonal
// contributions are pushed as mirrored pairs, so (i,j) and (j,i) accumulate the same
// values in the same order.
template <typename LocalFn>
SparseMatrix AssembleSymmetric(const TriMesh &mesh, bool interior_only, LocalFn &&local)
{
  const int n = interior_only ? mesh.NumInterior() : mesh.NumVertices();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(9 * mesh.Triangles().size());
  for (const auto &t : mesh.Triangles())
  {
    const double area = mesh.SignedArea(t);
    const Eigen::Matrix3d K = local(t, area);
    std::array<int, 3> dof;
    for (int a = 0; a < 3; a++)
    {
      dof[a] = interior_only ? mesh.InteriorIndex(t[a]) : t[a];
    }
    for (int a = 0; a < 3; a++)
    {
      if (dof[a] < 0)
      {
        continue;
      }
      for (int b = a; b < 3; b++)
      {
        if (dof[b] < 0)
        {
          continue;
        }
        triplets.emplace_back(dof[a], dof[b], K(a, b));
        if (a != b)
        {
          triplets.emplace_back(dof[b], dof[a], K(a, b));
        }
      }
    }
  }
  SparseMatrix A(n, n);
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();
  return A;
}

inline void RequireUnknowns(const TriMesh &mesh)
{
  if (mesh.NumInterior() == 0)
  {
    throw EmptySystemError("empty system: mesh has no interior degrees of freedom");
  }
}

}  // namespace detail

// Stiffness matrix of a(u, v) = int (D grad u) . grad v over the interior unknowns.
inline SparseMatrix AssembleStiffnessTerm(const TriMesh &mesh, const Eigen::Matrix2d &D)
{
  detail::RequireUnknowns(mesh);
  if (D(0, 1) != D(1, 0))
  {
    throw std::invalid_argument("AssembleStiffnessTerm: diffusion matrix is not symmetric");
  }
  return detail::AssembleSymmetric(mesh, true,
                                   [&](const Triangle &t, double area)
                                   {
                                     const auto g = detail::HatGradients(mesh, t, area);
                                     Eigen::Matrix3d K;
                                     for (int a = 0; a < 3; a++)
                                     {
                                       for (int b = 0; b < 3; b++)
                                       {
                                         K(a, b) = area * g[a].dot(D * g[b]);
                                       }
                                     }
                                     return K;
                                   });
}

namespace detail
{

inline Eigen::Matrix3d LocalMass(double area)
{
  Eigen::Matrix3d K;
  K << 2.0, 1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0, 2.0;
  return K * (area / 12.0);
}

}  // namespace detail

// Consistent P1 mass matrix over the interior unknowns.
inline SparseMatrix AssembleMass(const TriMesh &mesh)
{
  detail::RequireUnknowns(mesh);
  return detail::AssembleSymmetric(mesh, true, [](const Triangle &, double area)
                                   { return detail::LocalMass(area); });
}

// Mass matrix over all vertices, before Dirichlet elimination.
inline SparseMatrix AssembleMassAllVertices(const TriMesh &mesh)
{
  return detail::AssembleSymmetric(mesh, false, [](const Triangle &, double area)
                                   { return detail::LocalMass(area); });
}

struct AffineTerm
{
  SparseMatrix matrix;
  Coefficient coeff;
  std::string label;
};

//
// Affine decomposition A_h(mu) = sum_k theta_k(mu) A_h^k, M_h(mu) = sum_k Theta_k(mu) M_h^k
// with parameter-independent matrices assembled once.
//
class AffineOperator
{
public:
  AffineOperator() = default;
  AffineOperator(std::vector<AffineTerm> stiffness, std::vector<AffineTerm> mass,
                 std::function<bool(const Parameter &)> admissible, std::string problem_name)
    : stiffness_(std::move(stiffness)), mass_(std::move(mass)),
      admissible_(std::move(admissible)), problem_name_(std::move(problem_name))
  {
    if (stiffness_.empty() || mass_.empty())
    {
      throw std::invalid_argument("AffineOperator: need at least one stiffness and mass term");
    }
    const auto n = stiffness_.front().matrix.rows();
    for (const auto *terms : {&stiffness_, &mass_})
    {
      for (const auto &t : *terms)
      {
        if (t.matrix.rows() != n || t.matrix.cols() != n)
        {
          throw DimensionError("AffineOperator: all terms must share dimension " +
                               std::to_string(n));
        }
      }
    }
  }

  int Dim() const { return static_cast<int>(stiffness_.front().matrix.rows()); }
  const std::vector<AffineTerm> &StiffnessTerms() const { return stiffness_; }
  const std::vector<AffineTerm> &MassTerms() const { return mass_; }
  const std::string &ProblemName() const { return problem_name_; }

  bool IsAdmissible(const Parameter &mu) const { return !admissible_ || admissible_(mu); }
  void CheckAdmissible(const Parameter &mu) const
  {
    if (!IsAdmissible(mu))
    {
      throw AdmissibilityError("parameter " + FormatParameter(mu) + " is not admissible for " +
                               problem_name_);
    }
  }
  const std::function<bool(const Parameter &)> &Admissibility() const { return admissible_; }

  SparseMatrix Stiffness(const Parameter &mu) const
  {
    CheckAdmissible(mu);
    return Combine(stiffness_, mu);
  }
  SparseMatrix Mass(const Parameter &mu) const
  {
    CheckAdmissible(mu);
    return Combine(mass_, mu);
  }
  std::pair<SparseMatrix, SparseMatrix> Evaluate(const Parameter &mu) const
  {
    CheckAdmissible(mu);
    return {Combine(stiffness_, mu), Combine(mass_, mu)};
  }

private:
  static SparseMatrix Combine(const std::vector<AffineTerm> &terms, const Parameter &mu)
  {
    SparseMatrix A = terms.front().coeff(mu) * terms.front().matrix;
    for (std::size_t k = 1; k < terms.size(); k++)
    {
      A += terms[k].coeff(mu) * terms[k].matrix;
    }
    return A;
  }

  std::vector<AffineTerm> stiffness_, mass_;
  std::function<bool(const Parameter &)> admissible_;
  std::string problem_name_;
};

// Offline stage: assemble every parameter-independent matrix of the problem on the mesh.
inline AffineOperator BuildAffineOperator(const ProblemDef &problem, const TriMesh &mesh)
{
  std::vector<AffineTerm> stiffness, mass;
  for (const auto &t : problem.diffusion_terms)
  {
    stiffness.push_back({AssembleStiffnessTerm(mesh, t.D), t.coeff, t.label});
  }
  const SparseMatrix m = AssembleMass(mesh);
  for (const auto &t : problem.mass_terms)
  {
    mass.push_back({t.density * m, t.coeff, t.label});
  }
  return {std::move(stiffness), std::move(mass),
          [problem](const Parameter &mu) { return problem.IsAdmissible(mu); }, problem.name};
}

// Checks (i,j) == (j,i) bit-for-bit.
inline bool IsExactlySymmetric(const SparseMatrix &A)
{
  if (A.rows() != A.cols())
  {
    return false;
  }
  const SparseMatrix At = A.transpose();
  const SparseMatrix D = A - At;
  for (int k = 0; k < D.outerSize(); k++)
  {
    for (SparseMatrix::InnerIterator it(D, k); it; ++it)
    {
      if (it.value() != 0.0)
      {
        return false;
      }
    }
  }
  return true;
}

}  // namespace eigrom

#endif  // EIGROM_FEM_HPP
