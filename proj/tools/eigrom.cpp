// Copyright The eigrom Authors.
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "eigrom/eigrom.hpp"

namespace fs = std::filesystem;
using namespace eigrom;

namespace
{

// Comparison entries ending in .cfg are files next to the referring config; anything else is
// a preset name.
ConfigResolver MakeResolver(const fs::path &base)
{
  return [base](const std::string &name)
  {
    if (name.size() > 4 && name.compare(name.size() - 4, 4, ".cfg") == 0)
    {
      return LoadConfig((base / name).string());
    }
    return PresetConfig(name);
  };
}

void RunOne(const ExperimentConfig &config, const fs::path &out, const ConfigResolver &resolve,
            SolveCache &cache)
{
  const auto start = std::chrono::steady_clock::now();
  std::string summary;
  if (config.IsComparison())
  {
    const auto rep = RunComparison(config, resolve, &cache);
    EmitOutputs(rep, out);
    summary = std::to_string(rep.runs.size()) + " runs";
  }
  else
  {
    const auto rep = RunExperiment(config, &cache);
    EmitOutputs(rep, out);
    summary = "N = " + std::to_string(rep.N) + ", rank = " + std::to_string(rep.rank);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%-14s %-28s %6.1f s  -> %s\n", config.name.c_str(), summary.c_str(), secs,
              out.string().c_str());
}

void MeshInfo(const ExperimentConfig &config)
{
  const TriMesh mesh = BuildExperimentMesh(config);
  const MeshReport r = MakeMeshReport(mesh);
  std::printf("problem        %s\n", config.problem.c_str());
  std::printf("n per side     %d (%s diagonals)\n", config.mesh_n, ToString(config.diagonal));
  std::printf("vertices       %d\n", r.vertices);
  std::printf("triangles      %d\n", r.triangles);
  std::printf("interior dofs  %d\n", r.interior);
  std::printf("h              %.17g\n", r.h);
  std::printf("area min/max   %.17g / %.17g\n", r.min_area, r.max_area);
  std::printf("total area     %.17g\n", r.total_area);
}

void ExportMatrices(const ExperimentConfig &config, const fs::path &dir)
{
  const TriMesh mesh = BuildExperimentMesh(config);
  const AffineOperator op = BuildAffineOperator(MakeProblem(config.problem), mesh);
  fs::create_directories(dir);
  std::ofstream manifest(dir / "manifest.txt", std::ios::binary);
  manifest << "# file coefficient\n";
  const auto write = [&](const std::vector<AffineTerm> &terms, const std::string &prefix)
  {
    for (std::size_t k = 0; k < terms.size(); k++)
    {
      const std::string file = prefix + std::to_string(k + 1) + ".mtx";
      std::ofstream out(dir / file, std::ios::binary);
      WriteMatrixMarket(out, terms[k].matrix, true);
      manifest << file << ' ' << terms[k].label << '\n';
    }
  };
  write(op.StiffnessTerms(), "A");
  write(op.MassTerms(), "M");
  std::ofstream mesh_out(dir / "mesh.txt", std::ios::binary);
  WriteMesh(mesh_out, mesh);
  std::printf("wrote %zu stiffness and %zu mass terms (%d dofs) to %s\n",
              op.StiffnessTerms().size(), op.MassTerms().size(), op.Dim(), dir.string().c_str());
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"POD reduced-order models for parametric elliptic eigenvalue problems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("eigrom ") + kVersion);

  std::string config_path, out_dir, preset_name, export_dir, dump_dir;

  auto *run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--out", out_dir, "output directory (overrides output_dir)");

  auto *presets = app.add_subcommand("presets", "built-in table configurations");
  presets->require_subcommand(1);
  auto *list = presets->add_subcommand("list", "list presets");
  auto *prun = presets->add_subcommand("run", "run a preset, or all / 1d / 2d / compare");
  prun->add_option("name", preset_name, "preset name or suite")->required();
  prun->add_option("-o,--out", out_dir, "base output directory (default out)");
  auto *dump = presets->add_subcommand("dump", "write every preset as <dir>/<name>.cfg");
  dump->add_option("dir", dump_dir, "target directory")->required();

  auto *mesh = app.add_subcommand("mesh-info", "print mesh statistics for a config");
  mesh->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);

  auto *exp = app.add_subcommand("export-matrices", "write affine matrices as Matrix Market");
  exp->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
  exp->add_option("dir", export_dir, "target directory")->required();

  CLI11_PARSE(app, argc, argv);

  try
  {
    SolveCache cache;
    if (*run)
    {
      const ExperimentConfig config = LoadConfig(config_path);
      const fs::path out = out_dir.empty() ? fs::path(config.output_dir) : fs::path(out_dir);
      RunOne(config, out, MakeResolver(fs::path(config_path).parent_path()), cache);
    }
    else if (*list)
    {
      for (const auto &p : Presets())
      {
        std::printf("%-14s %-8s %s\n", p.name.c_str(), p.suite.c_str(), p.description.c_str());
      }
    }
    else if (*prun)
    {
      const fs::path base = out_dir.empty() ? fs::path("out") : fs::path(out_dir);
      const bool suite = preset_name == "all" || preset_name == "1d" || preset_name == "2d" ||
                         preset_name == "compare";
      for (const auto &p : Presets())
      {
        const bool in_suite = preset_name == "all" || p.suite == preset_name ||
                              (preset_name == "1d" && p.suite == "compare");
        if ((suite && in_suite) || p.name == preset_name)
        {
          RunOne(ParseConfig(p.text), base / p.name, MakeResolver(fs::current_path()), cache);
        }
      }
      if (!suite)
      {
        FindPreset(preset_name);
      }
    }
    else if (*dump)
    {
      fs::create_directories(dump_dir);
      for (const auto &p : Presets())
      {
        std::ofstream out(fs::path(dump_dir) / (p.name + ".cfg"), std::ios::binary);
        out << p.text;
      }
      std::printf("wrote %zu presets to %s\n", Presets().size(), dump_dir.c_str());
    }
    else if (*mesh)
    {
      MeshInfo(LoadConfig(config_path));
    }
    else if (*exp)
    {
      ExportMatrices(LoadConfig(config_path), export_dir);
    }
  }
  catch (const std::exception &e)
  {
    std::fprintf(stderr, "eigrom: %s\n", e.what());
    return 1;
  }
  return 0;
}
