// Copyright 2026 The MVMF Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mvmf/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mvmf/errors.hpp"

namespace mvmf {

namespace {

constexpr const char* kMagic = "mvmf-factorization";
constexpr int kFormatVersion = 1;

void write_matrix(std::ostream& out, const std::string& name, const Matrix& m) {
  out << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

[[noreturn]] void malformed(const std::string& what) {
  throw Error(Errc::kFormatError, "factorization file: " + what);
}

Eigen::Index read_count(std::istream& in, const std::string& key) {
  std::string token;
  long long value = -1;
  if (!(in >> token) || token != key || !(in >> value) || value < 0) {
    malformed("expected '" + key + " <count>'");
  }
  return static_cast<Eigen::Index>(value);
}

Matrix read_matrix(std::istream& in, const std::string& name) {
  std::string token, got;
  long long rows = -1, cols = -1;
  if (!(in >> token) || token != "matrix" || !(in >> got)) {
    malformed("expected 'matrix " + name + "'");
  }
  if (got != name) malformed("expected block " + name + ", found " + got);
  if (!(in >> rows >> cols) || rows < 0 || cols < 0) {
    malformed("bad shape for " + name);
  }
  Matrix m(rows, cols);
  for (long long i = 0; i < rows; ++i) {
    for (long long j = 0; j < cols; ++j) {
      if (!(in >> token)) malformed("truncated block " + name);
      double value = 0.0;
      const auto [ptr, ec] =
          std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        malformed("non-numeric entry '" + token + "' in " + name);
      }
      m(i, j) = value;
    }
  }
  return m;
}

std::string indexed(const char* base, std::size_t m) {
  return std::string(base) + "[" + std::to_string(m) + "]";
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_factorization(std::ostream& out, const Factorization& f) {
  validate_shapes(f);
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "d " << f.d << '\n';
  out << "r " << f.r << '\n';
  out << "views " << f.views.size() << '\n';
  write_matrix(out, "V_star", f.V_star);
  for (std::size_t m = 0; m < f.views.size(); ++m) {
    write_matrix(out, indexed("U", m), f.views[m].U);
    write_matrix(out, indexed("W", m), f.views[m].W);
    write_matrix(out, indexed("V", m), f.views[m].V);
  }
}

void write_factorization(const std::filesystem::path& path,
                         const Factorization& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIoError, "cannot write " + path.string());
  write_factorization(out, f);
}

Factorization read_factorization(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kMagic) malformed("missing header");
  if (version != kFormatVersion) {
    malformed("unsupported version " + std::to_string(version));
  }
  Factorization f;
  f.d = read_count(in, "d");
  f.r = read_count(in, "r");
  const Eigen::Index views = read_count(in, "views");
  f.V_star = read_matrix(in, "V_star");
  for (Eigen::Index m = 0; m < views; ++m) {
    const auto idx = static_cast<std::size_t>(m);
    ViewFactors v;
    v.U = read_matrix(in, indexed("U", idx));
    v.W = read_matrix(in, indexed("W", idx));
    v.V = read_matrix(in, indexed("V", idx));
    f.views.push_back(std::move(v));
  }
  validate_shapes(f);
  return f;
}

Factorization read_factorization(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open " + path.string());
  return read_factorization(in);
}

}  // namespace mvmf
