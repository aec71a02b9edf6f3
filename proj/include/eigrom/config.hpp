// Copyright The eigrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGROM_CONFIG_HPP
#define EIGROM_CONFIG_HPP

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eigrom/error.hpp"
#include "eigrom/fem.hpp"
#include "eigrom/io.hpp"
#include "eigrom/mesh.hpp"
#include "eigrom/pod.hpp"
#include "eigrom/sampling.hpp"

namespace eigrom
{

namespace detail
{

inline std::string Trim(const std::string &s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
  {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> Split(const std::string &s, char sep)
{
  std::vector<std::string> out;
  std::string cur;
  for (char c : s)
  {
    if (c == sep)
    {
      out.push_back(Trim(cur));
      cur.clear();
    }
    else
    {
      cur += c;
    }
  }
  out.push_back(Trim(cur));
  return out;
}

inline double ParseDouble(const std::string &s, const std::string &what)
{
  const std::string t = Trim(s);
  char *end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
  {
    throw ConfigError(what + ": '" + s + "' is not a number");
  }
  return v;
}

inline int ParseInt(const std::string &s, const std::string &what)
{
  const std::string t = Trim(s);
  char *end = nullptr;
  errno = 0;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE ||
      v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
  {
    throw ConfigError(what + ": '" + s + "' is not an integer");
  }
  return static_cast<int>(v);
}

inline std::vector<int> ParseIntList(const std::string &s, const std::string &what)
{
  std::vector<int> out;
  for (const auto &tok : Split(s, ','))
  {
    out.push_back(ParseInt(tok, what));
  }
  return out;
}

inline std::vector<double> ParseDoubleList(const std::string &s, const std::string &what)
{
  std::vector<double> out;
  for (const auto &tok : Split(s, ','))
  {
    out.push_back(ParseDouble(tok, what));
  }
  return out;
}

// "name(args)" -> {name, args}; throws if the shape is wrong.
inline std::pair<std::string, std::string> ParseCall(const std::string &s, const std::string &what)
{
  const std::string t = Trim(s);
  const auto open = t.find('(');
  if (open == std::string::npos || t.back() != ')')
  {
    throw ConfigError(what + ": expected name(...), got '" + s + "'");
  }
  return {Trim(t.substr(0, open)), Trim(t.substr(open + 1, t.size() - open - 2))};
}

// "a, b; c, d" -> {{a, b}, {c, d}}.
inline std::vector<Parameter> ParsePointList(const std::string &s, const std::string &what)
{
  std::vector<Parameter> out;
  for (const auto &p : Split(s, ';'))
  {
    out.push_back(ParseDoubleList(p, what));
  }
  return out;
}

}  // namespace detail

// Training set description; grids are resolved against the problem's parameter box.
struct SampleSpec
{
  enum class Kind
  {
    kUniform,
    kGrid,
    kPoints,
  };
  Kind kind = Kind::kUniform;
  double lo = 0.0, hi = 0.0, step = 0.0;
  int n1 = 0, n2 = 0;
  std::vector<Parameter> points;

  static SampleSpec Parse(const std::string &text)
  {
    const auto [name, args] = detail::ParseCall(text, "samples");
    SampleSpec s;
    if (name == "uniform")
    {
      const auto v = detail::ParseDoubleList(args, "samples");
      if (v.size() != 3)
      {
        throw ConfigError("samples: uniform(lo, hi, step) takes three numbers");
      }
      s.kind = Kind::kUniform;
      s.lo = v[0];
      s.hi = v[1];
      s.step = v[2];
      CommensurateSteps(s.lo, s.hi, s.step);
    }
    else if (name == "grid")
    {
      const auto v = detail::ParseIntList(args, "samples");
      if (v.size() != 2)
      {
        throw ConfigError("samples: grid(n1, n2) takes two integers");
      }
      s.kind = Kind::kGrid;
      s.n1 = v[0];
      s.n2 = v[1];
    }
    else if (name == "points")
    {
      s.kind = Kind::kPoints;
      s.points = detail::ParsePointList(args, "samples");
    }
    else
    {
      throw ConfigError("samples: unknown generator '" + name + "'");
    }
    return s;
  }

  SampleSet Resolve(const ParameterBox &box) const
  {
    switch (kind)
    {
      case Kind::kUniform:
        return Uniform1D(lo, hi, step);
      case Kind::kGrid:
        return UniformGrid2D(box, n1, n2);
      case Kind::kPoints:
        break;
    }
    return Explicit(points);
  }
};

inline SnapshotStrategy ParseStrategy(const std::string &text)
{
  const auto [name, args] = detail::ParseCall(text, "strategy");
  if (name == "modes")
  {
    return SnapshotStrategy::Modes(detail::ParseIntList(args, "strategy"));
  }
  if (name == "sum")
  {
    return SnapshotStrategy::Sum(detail::ParseIntList(args, "strategy"));
  }
  if (name == "combination")
  {
    const auto parts = detail::Split(args, ';');
    if (parts.size() != 2)
    {
      throw ConfigError("strategy: combination(modes; coefficients)");
    }
    return SnapshotStrategy::Combination(detail::ParseIntList(parts[0], "strategy"),
                                         detail::ParseDoubleList(parts[1], "strategy"));
  }
  throw ConfigError("strategy: unknown kind '" + name + "'");
}

// Parameter path: segments separated by ';', each a comma list of coordinates where exactly
// one coordinate is a range lo:hi:step (end point included).
inline std::vector<Parameter> ParseSweep(const std::string &text, int dim)
{
  std::vector<Parameter> out;
  for (const auto &segment : detail::Split(text, ';'))
  {
    const auto coords = detail::Split(segment, ',');
    if (static_cast<int>(coords.size()) != dim)
    {
      throw ConfigError("sweep segment '" + segment + "' must have " + std::to_string(dim) +
                        " coordinates");
    }
    int range_axis = -1;
    Parameter fixed(dim, 0.0);
    std::vector<double> range;
    for (int d = 0; d < dim; d++)
    {
      if (coords[d].find(':') != std::string::npos)
      {
        if (range_axis >= 0)
        {
          throw ConfigError("sweep segment '" + segment + "' has more than one range");
        }
        range_axis = d;
        const auto parts = detail::Split(coords[d], ':');
        if (parts.size() != 3)
        {
          throw ConfigError("sweep range must be lo:hi:step");
        }
        range = {detail::ParseDouble(parts[0], "sweep"), detail::ParseDouble(parts[1], "sweep"),
                 detail::ParseDouble(parts[2], "sweep")};
      }
      else
      {
        fixed[d] = detail::ParseDouble(coords[d], "sweep");
      }
    }
    if (range_axis < 0)
    {
      throw ConfigError("sweep segment '" + segment + "' has no range");
    }
    for (const auto &p : Uniform1D(range[0], range[1], range[2]).points)
    {
      Parameter mu = fixed;
      mu[range_axis] = p[0];
      out.push_back(mu);
    }
  }
  return out;
}

//
// One experiment, read from "key = value" lines ('#' starts a comment). Keys:
//   name, problem (problem_1d | problem_2d | laplace), mesh_n, mesh_diagonal
//   (alternating | right), samples, test_points (default | points(...)), strategy, eps_tol |
//   rom_dim (integer or "rank"), k, modes, convergence_mu, convergence_N, sweep, rom_sweep
//   (true | false), output_dir, note, compare (preset names), compare_mode.
//
struct ExperimentConfig
{
  std::string name = "experiment";
  std::string problem = "problem_1d";
  int mesh_n = 40;
  DiagonalPattern diagonal = DiagonalPattern::kAlternating;
  SampleSpec samples;
  std::optional<std::vector<Parameter>> test_points;
  SnapshotStrategy strategy = SnapshotStrategy::Modes({1});
  std::optional<double> eps_tol;
  // 0 means "use the full rank".
  std::optional<int> rom_dim;
  int k = 6;
  // Reduced modes tabulated per test point (1-based).
  std::vector<int> modes{1};
  std::optional<Parameter> convergence_mu;
  std::vector<int> convergence_N;
  std::vector<Parameter> sweep;
  bool rom_sweep = false;
  std::string output_dir;
  // Free text copied into the report, e.g. a remark on the source table.
  std::string note;
  // Comparison presets: other experiments whose mode `compare_mode` errors are tabulated.
  std::vector<std::string> compare;
  int compare_mode = 0;
  // Normalized key/value pairs, for the report echo and the hash.
  std::map<std::string, std::string> entries;

  bool IsComparison() const { return !compare.empty(); }

  std::string Canonical() const
  {
    std::string out;
    for (const auto &[key, value] : entries)
    {
      out += key + " = " + value + "\n";
    }
    return out;
  }

  std::string Hash() const { return HexDigest(Fnv1a(Canonical())); }
};

inline ProblemDef MakeProblem(const std::string &id)
{
  if (id == "problem_1d")
  {
    return BuildProblem1D();
  }
  if (id == "problem_2d")
  {
    return BuildProblem2D();
  }
  if (id == "laplace")
  {
    return BuildLaplaceProblem({0.0, 1.0, 0.0, 1.0});
  }
  throw ConfigError("unknown problem '" + id + "'");
}

inline ExperimentConfig ParseConfig(const std::string &text)
{
  ExperimentConfig c;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line))
  {
    lineno++;
    if (const auto hash = line.find('#'); hash != std::string::npos)
    {
      line.erase(hash);
    }
    line = detail::Trim(line);
    if (line.empty())
    {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
    {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = detail::Trim(line.substr(0, eq));
    const std::string value = detail::Trim(line.substr(eq + 1));
    if (c.entries.count(key))
    {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    c.entries[key] = value;
  }

  bool have_samples = false;
  for (const auto &[key, value] : c.entries)
  {
    if (key == "name")
    {
      c.name = value;
    }
    else if (key == "problem")
    {
      MakeProblem(value);
      c.problem = value;
    }
    else if (key == "mesh_n")
    {
      c.mesh_n = detail::ParseInt(value, key);
      if (c.mesh_n < 1)
      {
        throw ConfigError("mesh_n must be positive");
      }
    }
    else if (key == "mesh_diagonal")
    {
      if (value == "alternating")
      {
        c.diagonal = DiagonalPattern::kAlternating;
      }
      else if (value == "right")
      {
        c.diagonal = DiagonalPattern::kRight;
      }
      else
      {
        throw ConfigError("mesh_diagonal must be alternating or right");
      }
    }
    else if (key == "samples")
    {
      c.samples = SampleSpec::Parse(value);
      have_samples = true;
    }
    else if (key == "test_points")
    {
      if (value != "default")
      {
        const auto [name, args] = detail::ParseCall(value, key);
        if (name != "points")
        {
          throw ConfigError("test_points must be default or points(...)");
        }
        c.test_points = detail::ParsePointList(args, key);
      }
    }
    else if (key == "strategy")
    {
      c.strategy = ParseStrategy(value);
    }
    else if (key == "eps_tol")
    {
      c.eps_tol = detail::ParseDouble(value, key);
      if (!(*c.eps_tol > 0.0 && *c.eps_tol < 1.0))
      {
        throw ConfigError("eps_tol must lie in (0, 1)");
      }
    }
    else if (key == "rom_dim")
    {
      c.rom_dim = value == "rank" ? 0 : detail::ParseInt(value, key);
      if (*c.rom_dim < 0 || (value != "rank" && *c.rom_dim == 0))
      {
        throw ConfigError("rom_dim must be a positive integer or rank");
      }
    }
    else if (key == "k")
    {
      c.k = detail::ParseInt(value, key);
      if (c.k < 1)
      {
        throw ConfigError("k must be positive");
      }
    }
    else if (key == "modes")
    {
      c.modes = detail::ParseIntList(value, key);
    }
    else if (key == "convergence_mu")
    {
      c.convergence_mu = detail::ParseDoubleList(value, key);
    }
    else if (key == "convergence_N")
    {
      c.convergence_N = detail::ParseIntList(value, key);
    }
    else if (key == "sweep")
    {
      // Resolved below, once the problem dimension is known.
    }
    else if (key == "rom_sweep")
    {
      if (value != "true" && value != "false")
      {
        throw ConfigError("rom_sweep must be true or false");
      }
      c.rom_sweep = value == "true";
    }
    else if (key == "output_dir")
    {
      c.output_dir = value;
    }
    else if (key == "note")
    {
      c.note = value;
    }
    else if (key == "compare")
    {
      c.compare = detail::Split(value, ',');
    }
    else if (key == "compare_mode")
    {
      c.compare_mode = detail::ParseInt(value, key);
    }
    else
    {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  if (c.output_dir.empty())
  {
    c.output_dir = "out/" + c.name;
  }

  if (c.IsComparison())
  {
    if (c.compare_mode < 1)
    {
      throw ConfigError("compare needs compare_mode >= 1");
    }
    return c;
  }

  const ProblemDef problem = MakeProblem(c.problem);
  const int dim = problem.domain.Dim();
  if (!have_samples)
  {
    throw ConfigError("samples is required");
  }
  if (c.eps_tol && c.rom_dim)
  {
    throw ConfigError("eps_tol and rom_dim are mutually exclusive");
  }
  if (!c.eps_tol && !c.rom_dim)
  {
    c.eps_tol = 1e-8;
  }
  if (c.strategy.MaxMode() > c.k)
  {
    throw ConfigError("strategy uses mode " + std::to_string(c.strategy.MaxMode()) +
                      " but k = " + std::to_string(c.k));
  }
  if (c.modes.empty())
  {
    throw ConfigError("modes must list at least one reduced mode");
  }
  for (std::size_t i = 0; i < c.modes.size(); i++)
  {
    if (c.modes[i] < 1 || c.modes[i] > c.k || (i && c.modes[i] <= c.modes[i - 1]))
    {
      throw ConfigError("modes must be ascending and within 1..k");
    }
  }
  const auto check_dim = [dim](const Parameter &mu, const std::string &what)
  {
    if (static_cast<int>(mu.size()) != dim)
    {
      throw ConfigError(what + " " + FormatParameter(mu) + " does not have dimension " +
                        std::to_string(dim));
    }
  };
  for (const auto &mu : c.samples.Resolve(problem.domain).points)
  {
    check_dim(mu, "sample");
  }
  if (c.test_points)
  {
    for (const auto &mu : *c.test_points)
    {
      check_dim(mu, "test point");
    }
  }
  if (c.convergence_mu)
  {
    check_dim(*c.convergence_mu, "convergence_mu");
  }
  if (auto it = c.entries.find("sweep"); it != c.entries.end())
  {
    c.sweep = ParseSweep(it->second, dim);
  }
  return c;
}

inline ExperimentConfig LoadConfig(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("cannot open config '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str());
}

}  // namespace eigrom

#endif  // EIGROM_CONFIG_HPP
