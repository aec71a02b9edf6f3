// Copyright The eigrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGROM_PRESETS_HPP
#define EIGROM_PRESETS_HPP

#include <cstdio>
#include <string>
#include <vector>

#include "eigrom/config.hpp"
#include "eigrom/error.hpp"

namespace eigrom
{

struct Preset
{
  std::string name;
  std::string description;
  std::string text;
  // "1d", "2d" or "compare".
  std::string suite;
};

namespace detail
{

inline std::string Range(int last)
{
  std::string s;
  for (int i = 1; i <= last; i++)
  {
    s += (i > 1 ? ", " : "") + std::to_string(i);
  }
  return s;
}

inline Preset Preset1D(const std::string &name, const std::string &description,
                       const std::string &strategy, int max_mode, double step)
{
  char samples[64];
  std::snprintf(samples, sizeof(samples), "uniform(-1.4, 1.4, %g)", step);
  std::string t;
  t += "# " + description + "\n";
  t += "name = " + name + "\n";
  t += "problem = problem_1d\n";
  t += "mesh_n = 40\n";
  t += "mesh_diagonal = alternating\n";
  t += "samples = " + std::string(samples) + "\n";
  t += "test_points = default\n";
  t += "strategy = " + strategy + "\n";
  t += "eps_tol = 1e-8\n";
  t += "k = 6\n";
  t += "modes = " + Range(max_mode) + "\n";
  t += "convergence_mu = 1.25\n";
  t += "sweep = -1.4:1.4:0.01\n";
  t += "rom_sweep = true\n";
  return {name, description, t, "1d"};
}

inline Preset Preset2D(const std::string &name, const std::string &description,
                       const std::string &strategy, int max_mode, int grid,
                       const std::string &note = "")
{
  const std::string g = std::to_string(grid);
  std::string t;
  t += "# " + description + "\n";
  t += "name = " + name + "\n";
  t += "problem = problem_2d\n";
  t += "mesh_n = 20\n";
  t += "mesh_diagonal = alternating\n";
  t += "samples = grid(" + g + ", " + g + ")\n";
  t += "test_points = default\n";
  t += "strategy = " + strategy + "\n";
  t += "eps_tol = 1e-8\n";
  t += "k = 6\n";
  t += "modes = " + Range(max_mode) + "\n";
  t += "convergence_mu = 0.8, 0.8\n";
  t += "sweep = 0.4:1:0.02, 0.6; 0.4:1:0.02, 0.8\n";
  t += "rom_sweep = true\n";
  if (!note.empty())
  {
    t += "note = " + note + "\n";
  }
  return {name, description, t, "2d"};
}

inline Preset PresetCompare(const std::string &name, const std::string &description,
                            const std::string &a, const std::string &b, int mode)
{
  std::string t;
  t += "# " + description + "\n";
  t += "name = " + name + "\n";
  t += "compare = " + a + ", " + b + "\n";
  t += "compare_mode = " + std::to_string(mode) + "\n";
  return {name, description, t, "compare"};
}

}  // namespace detail

// Every table of the one- and two-parameter studies as a named configuration.
inline const std::vector<Preset> &Presets()
{
  static const std::vector<Preset> presets = []
  {
    using detail::Preset1D;
    using detail::Preset2D;
    using detail::PresetCompare;
    struct Row1D
    {
      const char *name, *description, *strategy;
      int max_mode;
    };
    const Row1D rows1d[] = {
        {"table1", "lambda_1 from u_1 snapshots", "modes(1)", 1},
        {"table2", "lambda_2 from u_2 snapshots", "modes(2)", 2},
        {"table3", "lambda_2 from u_1 + u_2 snapshots", "sum(1, 2)", 2},
        {"table4", "lambda_3 from u_3 snapshots", "modes(3)", 3},
        {"table5", "lambda_3 and lambda_4 from u_3, u_4 snapshots", "modes(3, 4)", 4},
        {"table6", "lambda_1..3 from u_1, u_2, u_3 snapshots", "modes(1, 2, 3)", 3},
        {"table7", "lambda_1..3 from u_1 + u_2 + u_3 snapshots", "sum(1, 2, 3)", 3},
        {"table9", "lambda_4 from u_4 snapshots", "modes(4)", 4},
        {"table10", "lambda_3 and lambda_4 from u_3, u_4 snapshots", "modes(3, 4)", 4},
        {"table11", "lambda_1..4 from u_1..u_4 snapshots", "modes(1, 2, 3, 4)", 4},
        {"table12", "lambda_1..4 from u_1 + u_2 + u_3 + u_4 snapshots", "sum(1, 2, 3, 4)", 4},
    };
    std::vector<Preset> out;
    for (const auto &r : rows1d)
    {
      out.push_back(Preset1D(r.name, std::string(r.description) + ", 29 samples", r.strategy,
                             r.max_mode, 0.1));
      out.push_back(Preset1D(std::string(r.name) + "_57",
                             std::string(r.description) + ", 57 samples", r.strategy,
                             r.max_mode, 0.05));
    }
    out.push_back(PresetCompare("table8", "lambda_3 errors, u_1, u_2, u_3 vs their sum, 29 samples",
                                "table6", "table7", 3));
    out.push_back(PresetCompare("table8_57",
                                "lambda_3 errors, u_1, u_2, u_3 vs their sum, 57 samples",
                                "table6_57", "table7_57", 3));
    out.push_back(PresetCompare("table13",
                                "lambda_4 errors, u_1..u_4 vs their sum, 29 samples", "table11",
                                "table12", 4));
    out.push_back(PresetCompare("table13_57",
                                "lambda_4 errors, u_1..u_4 vs their sum, 57 samples",
                                "table11_57", "table12_57", 4));

    struct Row2D
    {
      const char *name, *description, *strategy;
      int max_mode;
      const char *note = "";
    };
    const Row2D rows2d[] = {
        {"u1", "lambda_1 from u_1 snapshots", "modes(1)", 1},
        {"u2", "lambda_2 from u_2 snapshots", "modes(2)", 2},
        {"u3", "lambda_3 from u_3 snapshots", "modes(3)", 3},
        {"u13", "lambda_3 from u_1, u_2, u_3 snapshots", "modes(1, 2, 3)", 3,
         "the published header of this table reads 45 samples; read as the 7x7 grid of 49"},
        {"au3", "lambda_3 from u_1 + u_2 + u_3 snapshots", "sum(1, 2, 3)", 3},
        {"u4", "lambda_4 from u_4 snapshots", "modes(4)", 4},
        {"u34", "lambda_4 from u_3, u_4 snapshots", "modes(3, 4)", 4},
        {"u14", "lambda_4 from u_1..u_4 snapshots", "modes(1, 2, 3, 4)", 4},
        {"au4", "lambda_4 from u_1 + u_2 + u_3 + u_4 snapshots", "sum(1, 2, 3, 4)", 4},
    };
    for (const auto &r : rows2d)
    {
      for (int grid : {5, 7})
      {
        const int n = grid * grid;
        out.push_back(Preset2D("2d_" + std::string(r.name) + "_" + std::to_string(n),
                               "two parameters, " + std::string(r.description) + ", " +
                                   std::to_string(n) + " samples",
                               r.strategy, r.max_mode, grid, grid == 7 ? r.note : ""));
      }
    }
    return out;
  }();
  return presets;
}

inline const Preset &FindPreset(const std::string &name)
{
  for (const auto &p : Presets())
  {
    if (p.name == name)
    {
      return p;
    }
  }
  throw ConfigError("unknown preset '" + name + "'");
}

inline ExperimentConfig PresetConfig(const std::string &name)
{
  return ParseConfig(FindPreset(name).text);
}

}  // namespace eigrom

#endif  // EIGROM_PRESETS_HPP
