// Copyright The eigrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGROM_SAMPLING_HPP
#define EIGROM_SAMPLING_HPP

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "eigrom/error.hpp"
#include "eigrom/fem.hpp"

namespace eigrom
{

enum class SampleKind
{
  kUniform1D,
  kUniformGrid2D,
  kExplicit,
};

inline const char *ToString(SampleKind k)
{
  switch (k)
  {
    case SampleKind::kUniform1D:
      return "uniform_1d";
    case SampleKind::kUniformGrid2D:
      return "uniform_grid_2d";
    case SampleKind::kExplicit:
      return "explicit";
  }
  return "explicit";
}

struct SampleSet
{
  std::vector<Parameter> points;
  SampleKind kind = SampleKind::kExplicit;

  int Size() const { return static_cast<int>(points.size()); }
};

// Number of steps of width `step` in [a, b], or ConfigError when the step does not divide
// the interval.
inline int CommensurateSteps(double a, double b, double step)
{
  if (!(a < b))
  {
    throw ConfigError("empty parameter interval [" + std::to_string(a) + ", " +
                      std::to_string(b) + "]");
  }
  if (!(step > 0.0))
  {
    throw ConfigError("parameter step must be positive");
  }
  const double ratio = (b - a) / step;
  const double count = std::round(ratio);
  if (count < 1.0 || std::abs(ratio - count) > 1e-9 * std::max(1.0, count))
  {
    throw ConfigError("step " + std::to_string(step) + " does not divide [" + std::to_string(a) +
                      ", " + std::to_string(b) + "]");
  }
  return static_cast<int>(count);
}

// a, a + step, ..., b; points are a + i * step, the last one pinned to b.
inline SampleSet Uniform1D(double a, double b, double step)
{
  const int n = CommensurateSteps(a, b, step);
  SampleSet s;
  s.kind = SampleKind::kUniform1D;
  s.points.reserve(n + 1);
  for (int i = 0; i <= n; i++)
  {
    s.points.push_back({i == n ? b : a + i * step});
  }
  return s;
}

// Tensor grid over a 2D box including its corners, first coordinate fastest.
inline SampleSet UniformGrid2D(const ParameterBox &box, int n1, int n2)
{
  if (box.Dim() != 2)
  {
    throw ConfigError("UniformGrid2D needs a two-dimensional box");
  }
  if (n1 < 2 || n2 < 2)
  {
    throw ConfigError("UniformGrid2D needs at least two points per axis");
  }
  const auto axis = [](double lo, double hi, int n, int i)
  { return i == n - 1 ? hi : lo + i * (hi - lo) / (n - 1); };
  SampleSet s;
  s.kind = SampleKind::kUniformGrid2D;
  for (int j = 0; j < n2; j++)
  {
    for (int i = 0; i < n1; i++)
    {
      s.points.push_back(
          {axis(box.lower[0], box.upper[0], n1, i), axis(box.lower[1], box.upper[1], n2, j)});
    }
  }
  return s;
}

inline SampleSet Explicit(std::vector<Parameter> points)
{
  return {std::move(points), SampleKind::kExplicit};
}

// Test parameters of the one-parameter study.
inline SampleSet TestPoints1D()
{
  return Explicit({{-1.25}, {-0.75}, {-0.5}, {0.5}, {0.75}, {1.25}});
}

// Test parameters of the two-parameter study.
inline SampleSet TestPoints2D()
{
  return Explicit({{0.5, 0.6}, {0.5, 0.8}, {0.8, 0.6}, {0.8, 0.8}});
}

// One point per row, coordinates comma-separated, header mu1,...,muP.
inline void WriteSamplesCsv(std::ostream &os, const SampleSet &s)
{
  const std::size_t dim = s.points.empty() ? 0 : s.points.front().size();
  for (std::size_t d = 0; d < dim; d++)
  {
    os << (d ? "," : "") << "mu" << d + 1;
  }
  os << '\n';
  const auto old_precision = os.precision(17);
  for (const auto &p : s.points)
  {
    for (std::size_t d = 0; d < p.size(); d++)
    {
      os << (d ? "," : "") << p[d];
    }
    os << '\n';
  }
  os.precision(old_precision);
}

}  // namespace eigrom

#endif  // EIGROM_SAMPLING_HPP
