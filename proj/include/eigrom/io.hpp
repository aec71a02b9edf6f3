// Copyright The eigrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGROM_IO_HPP
#define EIGROM_IO_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "eigrom/error.hpp"
#include "eigrom/fem.hpp"

namespace eigrom
{

// 17 significant digits, "nan" / "inf" / "-inf" for non-finite values.
inline std::string FormatDouble(double x)
{
  if (std::isnan(x))
  {
    return "nan";
  }
  if (std::isinf(x))
  {
    return x > 0 ? "inf" : "-inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// RFC 4180 quoting: fields with a comma, quote or line break are quoted, quotes doubled.
inline std::string CsvField(const std::string &s)
{
  if (s.find_first_of(",\"\r\n") == std::string::npos)
  {
    return s;
  }
  std::string out = "\"";
  for (char c : s)
  {
    out += c;
    if (c == '"')
    {
      out += '"';
    }
  }
  return out + "\"";
}

// One CSV row, written with a trailing '\n'.
class CsvRow
{
public:
  CsvRow &operator<<(const std::string &s)
  {
    Sep();
    line_ += CsvField(s);
    return *this;
  }
  CsvRow &operator<<(const char *s) { return *this << std::string(s); }
  CsvRow &operator<<(double x)
  {
    Sep();
    line_ += FormatDouble(x);
    return *this;
  }
  CsvRow &operator<<(int x)
  {
    Sep();
    line_ += std::to_string(x);
    return *this;
  }
  const std::string &Str() const { return line_; }

private:
  void Sep()
  {
    if (!first_)
    {
      line_ += ',';
    }
    first_ = false;
  }
  std::string line_;
  bool first_ = true;
};

inline std::ostream &operator<<(std::ostream &os, const CsvRow &row)
{
  return os << row.Str() << '\n';
}

// 64-bit FNV-1a.
inline std::uint64_t Fnv1a(const std::string &data)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data)
  {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string HexDigest(std::uint64_t h)
{
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Matrix Market coordinate format. Symmetric matrices store the lower triangle only.
inline void WriteMatrixMarket(std::ostream &os, const SparseMatrix &A, bool symmetric)
{
  std::vector<Eigen::Triplet<double>> entries;
  for (int j = 0; j < A.outerSize(); j++)
  {
    for (SparseMatrix::InnerIterator it(A, j); it; ++it)
    {
      if (!symmetric || it.row() >= it.col())
      {
        entries.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
      }
    }
  }
  os << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general") << '\n';
  os << A.rows() << ' ' << A.cols() << ' ' << entries.size() << '\n';
  for (const auto &e : entries)
  {
    os << e.row() + 1 << ' ' << e.col() + 1 << ' ' << FormatDouble(e.value()) << '\n';
  }
}

// Matrix Market array format (column-major), for dense data such as POD bases.
inline void WriteMatrixMarket(std::ostream &os, const Eigen::MatrixXd &A)
{
  os << "%%MatrixMarket matrix array real general\n";
  os << A.rows() << ' ' << A.cols() << '\n';
  for (Eigen::Index j = 0; j < A.cols(); j++)
  {
    for (Eigen::Index i = 0; i < A.rows(); i++)
    {
      os << FormatDouble(A(i, j)) << '\n';
    }
  }
}

// Reads a real coordinate matrix (general or symmetric).
inline SparseMatrix ReadMatrixMarket(std::istream &is)
{
  std::string line;
  if (!std::getline(is, line))
  {
    throw ConfigError("Matrix Market: empty input");
  }
  std::istringstream head(line);
  std::string banner, object, format, field, symmetry;
  head >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || object != "matrix" || format != "coordinate" ||
      field != "real" || (symmetry != "general" && symmetry != "symmetric"))
  {
    throw ConfigError("Matrix Market: unsupported header '" + line + "'");
  }
  while (std::getline(is, line) && (line.empty() || line[0] == '%'))
  {
  }
  long rows = 0, cols = 0, nnz = 0;
  std::istringstream size(line);
  if (!(size >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
  {
    throw ConfigError("Matrix Market: bad size line");
  }
  std::vector<Eigen::Triplet<double>> t;
  for (long e = 0; e < nnz; e++)
  {
    long i = 0, j = 0;
    double v = 0.0;
    if (!(is >> i >> j >> v) || i < 1 || j < 1 || i > rows || j > cols)
    {
      throw ConfigError("Matrix Market: bad entry " + std::to_string(e + 1));
    }
    t.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1), v);
    if (symmetry == "symmetric" && i != j)
    {
      t.emplace_back(static_cast<int>(j - 1), static_cast<int>(i - 1), v);
    }
  }
  SparseMatrix A(rows, cols);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

}  // namespace eigrom

#endif  // EIGROM_IO_HPP
