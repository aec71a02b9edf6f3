// Copyright The eigrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGROM_EXPERIMENTS_HPP
#define EIGROM_EXPERIMENTS_HPP

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "eigrom/config.hpp"
#include "eigrom/diagnostics.hpp"
#include "eigrom/eigensolve.hpp"
#include "eigrom/error.hpp"
#include "eigrom/fem.hpp"
#include "eigrom/io.hpp"
#include "eigrom/mesh.hpp"
#include "eigrom/pod.hpp"
#include "eigrom/rom.hpp"
#include "eigrom/sampling.hpp"
#include "eigrom/version.hpp"

namespace eigrom
{

// Failure inside one pipeline stage; what() names the stage.
class StageError : public Error
{
public:
  StageError(const std::string &stage, const std::string &message)
    : Error("stage '" + stage + "': " + message), stage_(stage)
  {
  }
  const std::string &Stage() const { return stage_; }

private:
  std::string stage_;
};

//
// Memo of high-fidelity solves keyed by problem, mesh, k and parameter, so presets that share
// a discretization (sweeps, training sets) solve each pencil once per process.
//
class SolveCache
{
public:
  std::vector<EigenSet> Sweep(const std::string &discretization, const AffineOperator &op,
                              const std::vector<Parameter> &mus, int k)
  {
    std::vector<EigenSet> out(mus.size());
    std::vector<Parameter> missing;
    std::vector<std::size_t> slots;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      for (std::size_t i = 0; i < mus.size(); i++)
      {
        auto it = sets_.find(Key(discretization, k, mus[i]));
        if (it != sets_.end())
        {
          out[i] = it->second;
        }
        else
        {
          missing.push_back(mus[i]);
          slots.push_back(i);
        }
      }
    }
    if (missing.empty())
    {
      return out;
    }
    auto solved = SweepHifi(op, missing, k);
    std::lock_guard<std::mutex> lock(mutex_);
    for (std::size_t j = 0; j < solved.size(); j++)
    {
      sets_.emplace(Key(discretization, k, missing[j]), solved[j]);
      out[slots[j]] = std::move(solved[j]);
    }
    return out;
  }

  std::size_t Size() const
  {
    std::lock_guard<std::mutex> lock(mutex_);
    return sets_.size();
  }

private:
  static std::string Key(const std::string &discretization, int k, const Parameter &mu)
  {
    std::string key = discretization + "|" + std::to_string(k);
    for (double x : mu)
    {
      key += "|" + FormatDouble(x);
    }
    return key;
  }

  mutable std::mutex mutex_;
  std::map<std::string, EigenSet> sets_;
};

struct TestRecord
{
  Parameter mu;
  // All k high-fidelity values.
  Eigen::VectorXd fem_values;
  // Reduced values 1..max(modes).
  Eigen::VectorXd rom_values;
  std::vector<ModeMatch> matches;
};

struct ExperimentReport
{
  ExperimentConfig config;
  MeshReport mesh;
  int dofs = 0;
  int num_samples = 0;
  int snapshot_columns = 0;
  int rank = 0;
  int N = 0;
  Eigen::VectorXd singular_values;
  std::vector<TestRecord> tests;
  Parameter convergence_mu;
  std::vector<ConvergenceRow> convergence;
  std::vector<Parameter> sweep_mu;
  std::vector<Eigen::VectorXd> sweep_values;
  std::vector<TrackingAmbiguity> sweep_ambiguities;
  // Sweep points whose tracked labels differ from the sorted order.
  std::vector<int> sweep_reordered;
  std::vector<Eigen::VectorXd> rom_sweep_values;

  // Index-aligned relative error of reduced mode `mode` (1-based) at test point t.
  double AlignedError(std::size_t t, int mode) const
  {
    return RelativeError(tests[t].rom_values(mode - 1), tests[t].fem_values(mode - 1));
  }
};

namespace detail
{

template <typename Fn>
auto Stage(const std::string &name, Fn &&fn) -> decltype(fn())
{
  try
  {
    return fn();
  }
  catch (const StageError &)
  {
    throw;
  }
  catch (const std::exception &e)
  {
    throw StageError(name, e.what());
  }
}

inline std::string Discretization(const ExperimentConfig &c)
{
  return c.problem + "|" + std::to_string(c.mesh_n) + "|" + ToString(c.diagonal);
}

}  // namespace detail

inline TriMesh BuildExperimentMesh(const ExperimentConfig &c)
{
  return BuildStructuredMesh(MakeProblem(c.problem).rect, c.mesh_n, c.diagonal);
}

inline std::vector<Parameter> ExperimentTestPoints(const ExperimentConfig &c)
{
  if (c.test_points)
  {
    return *c.test_points;
  }
  if (c.problem == "problem_1d")
  {
    return TestPoints1D().points;
  }
  if (c.problem == "problem_2d")
  {
    return TestPoints2D().points;
  }
  return {Parameter{}};
}

// Sweep, snapshots, POD, projection, then reduced solves and diagnostics at every test point.
inline ExperimentReport RunExperiment(const ExperimentConfig &c, SolveCache *cache = nullptr)
{
  if (c.IsComparison())
  {
    throw ConfigError("'" + c.name + "' is a comparison; use RunComparison");
  }
  SolveCache local;
  SolveCache &solves = cache ? *cache : local;
  const std::string disc = detail::Discretization(c);

  ExperimentReport r;
  r.config = c;
  const ProblemDef problem = MakeProblem(c.problem);
  const TriMesh mesh = detail::Stage("mesh", [&] { return BuildExperimentMesh(c); });
  r.mesh = MakeMeshReport(mesh);
  const AffineOperator op =
      detail::Stage("assembly", [&] { return BuildAffineOperator(problem, mesh); });
  r.dofs = op.Dim();

  const SampleSet samples = c.samples.Resolve(problem.domain);
  r.num_samples = samples.Size();
  const auto training = detail::Stage(
      "training solves", [&] { return solves.Sweep(disc, op, samples.points, c.k); });
  const SnapshotSet snaps =
      detail::Stage("snapshots", [&] { return BuildSnapshots(training, samples, c.strategy); });
  r.snapshot_columns = static_cast<int>(snaps.matrix.cols());

  const PodBasis full = detail::Stage("pod", [&] { return GramSvd(snaps.matrix); });
  r.rank = full.rank;
  r.singular_values = full.singular_values;
  const PodBasis basis = detail::Stage(
      "pod",
      [&]
      {
        if (c.rom_dim)
        {
          return *c.rom_dim == 0 ? full : Truncate(full, *c.rom_dim);
        }
        return TruncateByTolerance(full, *c.eps_tol);
      });
  r.N = basis.N;
  const RomSystem full_rom = detail::Stage("projection", [&] { return Project(op, full); });
  const RomSystem rom = TruncateRom(full_rom, r.N);

  const int kr = c.modes.back();
  const auto tests = ExperimentTestPoints(c);
  const auto fem =
      detail::Stage("reference solves", [&] { return solves.Sweep(disc, op, tests, c.k); });
  for (std::size_t t = 0; t < tests.size(); t++)
  {
    detail::Stage("rom solve at mu = " + FormatParameter(tests[t]),
                  [&]
                  {
                    const EigenSet red = RomSolve(rom, tests[t], kr);
                    const SparseMatrix M = op.Mass(tests[t]);
                    const Eigen::MatrixXd lifted = Lift(rom, red, M);
                    r.tests.push_back(
                        {tests[t], fem[t].values, red.values, MatchModes(lifted, red, fem[t], M)});
                    return 0;
                  });
  }

  r.convergence_mu = c.convergence_mu ? *c.convergence_mu : tests.back();
  detail::Stage("convergence",
                [&]
                {
                  std::vector<int> Ns = c.convergence_N;
                  if (Ns.empty())
                  {
                    for (int n = 1; n <= r.rank; n++)
                    {
                      Ns.push_back(n);
                    }
                  }
                  const EigenSet ref = solves.Sweep(disc, op, {r.convergence_mu}, c.k).front();
                  r.convergence = ConvergenceStudy(full_rom, r.convergence_mu, Ns, ref,
                                                   op.Mass(r.convergence_mu), kr);
                  return 0;
                });

  if (!c.sweep.empty())
  {
    detail::Stage("sweep",
                  [&]
                  {
                    const auto sets = solves.Sweep(disc, op, c.sweep, c.k);
                    r.sweep_mu = c.sweep;
                    for (const auto &s : sets)
                    {
                      r.sweep_values.push_back(s.values);
                    }
                    const SweepTracking tr = TrackSweep(sets, op.Mass(c.sweep.front()));
                    r.sweep_ambiguities = tr.ambiguities;
                    for (std::size_t t = 0; t < tr.labels.size(); t++)
                    {
                      if (!tr.IsIdentity(t))
                      {
                        r.sweep_reordered.push_back(static_cast<int>(t));
                      }
                    }
                    if (c.rom_sweep)
                    {
                      for (const auto &mu : c.sweep)
                      {
                        r.rom_sweep_values.push_back(RomSolve(rom, mu, std::min(kr, r.N)).values);
                      }
                    }
                    return 0;
                  });
  }
  return r;
}

namespace detail
{

inline nlohmann::json ToJson(const Eigen::VectorXd &v)
{
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); i++)
  {
    a.push_back(v(i));
  }
  return a;
}

inline nlohmann::json ToJson(const ModeMatch &m)
{
  return {{"rom_mode", m.rom_mode},
          {"matched_fem_index", m.matched_fem_index},
          {"correlation", m.correlation},
          {"matched_relative_error", m.relative_value_error}};
}

inline void MuHeader(CsvRow &row, std::size_t dim)
{
  for (std::size_t d = 0; d < dim; d++)
  {
    row << "mu" + std::to_string(d + 1);
  }
}

inline void MuCells(CsvRow &row, const Parameter &mu)
{
  for (double x : mu)
  {
    row << x;
  }
}

inline std::ofstream OpenOutput(const std::filesystem::path &path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw Error("cannot write '" + path.string() + "'");
  }
  return out;
}

}  // namespace detail

inline nlohmann::json ReportJson(const ExperimentReport &r)
{
  using nlohmann::json;
  json j;
  j["library"] = std::string("eigrom ") + kVersion;
  j["name"] = r.config.name;
  j["config"] = r.config.entries;
  j["config_hash"] = r.config.Hash();
  if (!r.config.note.empty())
  {
    j["note"] = r.config.note;
  }
  j["mesh"] = {{"vertices", r.mesh.vertices}, {"triangles", r.mesh.triangles},
               {"interior_dofs", r.mesh.interior}, {"min_area", r.mesh.min_area},
               {"max_area", r.mesh.max_area}, {"total_area", r.mesh.total_area},
               {"h", r.mesh.h}, {"n_per_side", r.config.mesh_n},
               {"diagonal", ToString(r.config.diagonal)}};
  j["samples"] = r.num_samples;
  j["strategy"] = r.config.strategy.Describe();
  j["snapshot_columns"] = r.snapshot_columns;
  j["pod"] = {{"rank", r.rank},
              {"N", r.N},
              {"eps_tol", r.config.eps_tol ? json(*r.config.eps_tol) : json(nullptr)},
              {"singular_values", detail::ToJson(r.singular_values)}};
  json tests = json::array();
  for (const auto &t : r.tests)
  {
    json matches = json::array();
    for (const auto &m : t.matches)
    {
      matches.push_back(detail::ToJson(m));
    }
    tests.push_back({{"mu", t.mu},
                     {"fem_values", detail::ToJson(t.fem_values)},
                     {"rom_values", detail::ToJson(t.rom_values)},
                     {"matches", matches}});
  }
  j["tests"] = tests;
  json conv = json::array();
  for (const auto &row : r.convergence)
  {
    conv.push_back({{"N", row.N},
                    {"rom_mode", row.rom_mode},
                    {"rom_value", row.rom_value},
                    {"relative_error", row.relative_error},
                    {"match", detail::ToJson(row.match)}});
  }
  j["convergence"] = {{"mu", r.convergence_mu}, {"rows", conv}};
  json amb = json::array();
  for (const auto &a : r.sweep_ambiguities)
  {
    amb.push_back({{"step", a.step},
                   {"mode_a", a.mode_a},
                   {"mode_b", a.mode_b},
                   {"correlation_a", a.correlation_a},
                   {"correlation_b", a.correlation_b}});
  }
  j["sweep"] = {{"points", r.sweep_mu.size()},
                {"reordered_points", r.sweep_reordered},
                {"ambiguities", amb}};
  return j;
}

//
// report.json, table.csv, singular_values.csv, convergence.csv and, when a sweep was run,
// sweep_eigenvalues.csv (plus rom_sweep.csv if requested).
//
inline void EmitOutputs(const ExperimentReport &r, const std::filesystem::path &dir)
{
  std::filesystem::create_directories(dir);
  const std::size_t dim = r.tests.empty() ? 0 : r.tests.front().mu.size();
  {
    auto out = detail::OpenOutput(dir / "report.json");
    out << ReportJson(r).dump(2) << '\n';
  }
  {
    auto out = detail::OpenOutput(dir / "table.csv");
    CsvRow head;
    detail::MuHeader(head, dim);
    head << "N";
    for (int m : r.config.modes)
    {
      const std::string s = std::to_string(m);
      head << "fem_lambda" + s << "rom_lambda" + s << "rel_error" + s << "match" + s
           << "correlation" + s << "fem_lambda_match" + s << "rel_error_match" + s;
    }
    out << head;
    for (const auto &t : r.tests)
    {
      CsvRow row;
      detail::MuCells(row, t.mu);
      row << r.N;
      for (int m : r.config.modes)
      {
        const ModeMatch &mm = t.matches[m - 1];
        row << t.fem_values(m - 1) << t.rom_values(m - 1)
            << RelativeError(t.rom_values(m - 1), t.fem_values(m - 1)) << mm.matched_fem_index
            << mm.correlation << t.fem_values(mm.matched_fem_index - 1) << mm.relative_value_error;
      }
      out << row;
    }
  }
  {
    auto out = detail::OpenOutput(dir / "singular_values.csv");
    out << (CsvRow() << "index" << "sigma" << "energy_fraction");
    const double total = r.singular_values.squaredNorm();
    double partial = 0.0;
    for (Eigen::Index i = 0; i < r.singular_values.size(); i++)
    {
      partial += r.singular_values(i) * r.singular_values(i);
      out << (CsvRow() << static_cast<int>(i + 1) << r.singular_values(i) << partial / total);
    }
  }
  {
    auto out = detail::OpenOutput(dir / "convergence.csv");
    CsvRow head;
    detail::MuHeader(head, r.convergence_mu.size());
    head << "N" << "rom_mode" << "rom_lambda" << "rel_error" << "match" << "correlation";
    out << head;
    for (const auto &row : r.convergence)
    {
      CsvRow line;
      detail::MuCells(line, r.convergence_mu);
      line << row.N << row.rom_mode << row.rom_value << row.relative_error
           << row.match.matched_fem_index << row.match.correlation;
      out << line;
    }
  }
  if (!r.sweep_mu.empty())
  {
    auto out = detail::OpenOutput(dir / "sweep_eigenvalues.csv");
    CsvRow head;
    detail::MuHeader(head, r.sweep_mu.front().size());
    for (Eigen::Index i = 0; i < r.sweep_values.front().size(); i++)
    {
      head << "lambda" + std::to_string(i + 1);
    }
    out << head;
    for (std::size_t t = 0; t < r.sweep_mu.size(); t++)
    {
      CsvRow row;
      detail::MuCells(row, r.sweep_mu[t]);
      for (Eigen::Index i = 0; i < r.sweep_values[t].size(); i++)
      {
        row << r.sweep_values[t](i);
      }
      out << row;
    }
  }
  if (!r.rom_sweep_values.empty())
  {
    auto out = detail::OpenOutput(dir / "rom_sweep.csv");
    CsvRow head;
    detail::MuHeader(head, r.sweep_mu.front().size());
    for (Eigen::Index i = 0; i < r.rom_sweep_values.front().size(); i++)
    {
      head << "rom_lambda" + std::to_string(i + 1);
    }
    out << head;
    for (std::size_t t = 0; t < r.sweep_mu.size(); t++)
    {
      CsvRow row;
      detail::MuCells(row, r.sweep_mu[t]);
      for (Eigen::Index i = 0; i < r.rom_sweep_values[t].size(); i++)
      {
        row << r.rom_sweep_values[t](i);
      }
      out << row;
    }
  }
}

// Several experiments tabulated side by side for one mode.
struct ComparisonReport
{
  ExperimentConfig config;
  std::vector<ExperimentReport> runs;
};

using ConfigResolver = std::function<ExperimentConfig(const std::string &)>;

inline ComparisonReport RunComparison(const ExperimentConfig &c, const ConfigResolver &resolve,
                                      SolveCache *cache = nullptr)
{
  if (!c.IsComparison())
  {
    throw ConfigError("'" + c.name + "' is not a comparison");
  }
  SolveCache local;
  ComparisonReport rep{c, {}};
  for (const auto &name : c.compare)
  {
    const ExperimentConfig sub = resolve(name);
    if (sub.IsComparison())
    {
      throw ConfigError("comparison '" + c.name + "' cannot nest '" + name + "'");
    }
    if (sub.modes.back() < c.compare_mode)
    {
      throw ConfigError("'" + name + "' does not compute reduced mode " +
                        std::to_string(c.compare_mode));
    }
    rep.runs.push_back(RunExperiment(sub, cache ? cache : &local));
  }
  for (std::size_t i = 1; i < rep.runs.size(); i++)
  {
    if (rep.runs[i].tests.size() != rep.runs[0].tests.size())
    {
      throw ConfigError("compared experiments must share test points");
    }
  }
  return rep;
}

// comparison.csv (one row per test point) and report.json.
inline void EmitOutputs(const ComparisonReport &rep, const std::filesystem::path &dir)
{
  std::filesystem::create_directories(dir);
  const int m = rep.config.compare_mode;
  const auto &first = rep.runs.front();
  {
    auto out = detail::OpenOutput(dir / "comparison.csv");
    CsvRow head;
    detail::MuHeader(head, first.tests.front().mu.size());
    head << "fem_lambda" + std::to_string(m);
    for (const auto &r : rep.runs)
    {
      head << r.config.name + "_N" << r.config.name + "_rom_lambda" + std::to_string(m)
           << r.config.name + "_rel_error";
    }
    out << head;
    for (std::size_t t = 0; t < first.tests.size(); t++)
    {
      CsvRow row;
      detail::MuCells(row, first.tests[t].mu);
      row << first.tests[t].fem_values(m - 1);
      for (const auto &r : rep.runs)
      {
        row << r.N << r.tests[t].rom_values(m - 1) << r.AlignedError(t, m);
      }
      out << row;
    }
  }
  nlohmann::json j;
  j["library"] = std::string("eigrom ") + kVersion;
  j["name"] = rep.config.name;
  j["config"] = rep.config.entries;
  j["config_hash"] = rep.config.Hash();
  j["runs"] = nlohmann::json::array();
  for (const auto &r : rep.runs)
  {
    j["runs"].push_back(ReportJson(r));
  }
  auto out = detail::OpenOutput(dir / "report.json");
  out << j.dump(2) << '\n';
}

}  // namespace eigrom

#endif  // EIGROM_EXPERIMENTS_HPP
