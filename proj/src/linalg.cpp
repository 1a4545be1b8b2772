// Copyright 2026 The RealityLab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "realitylab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace realitylab::linalg {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  require(rows_ * cols_ == entries_.size(), "CMatrix: rows*cols must equal the number of entries");
}

CMatrix CMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  CMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    require(row.size() == c, "CMatrix::from_rows: ragged row list");
    std::size_t j = 0;
    for (const auto& x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::zero(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }

CMatrix CMatrix::diagonal(const std::vector<Complex>& diag) {
  CMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix addition: shape mismatch");
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix subtraction: shape mismatch");
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

CMatrix operator*(Complex scalar, const CMatrix& m) {
  CMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = scalar * m(i, j);
  return out;
}

CVector operator+(const CVector& a, const CVector& b) {
  require(a.dim() == b.dim(), "vector addition: dimension mismatch");
  CVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + b[i];
  return out;
}

CVector operator-(const CVector& a, const CVector& b) {
  require(a.dim() == b.dim(), "vector subtraction: dimension mismatch");
  CVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] - b[i];
  return out;
}

CVector operator*(Complex scalar, const CVector& v) {
  CVector out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) out[i] = scalar * v[i];
  return out;
}

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ia = 0; ia < a.rows(); ++ia)
    for (std::size_t ja = 0; ja < a.cols(); ++ja) {
      const Complex aij = a(ia, ja);
      if (aij == Complex{0.0, 0.0}) continue;
      for (std::size_t ib = 0; ib < b.rows(); ++ib)
        for (std::size_t jb = 0; jb < b.cols(); ++jb)
          out(ia * b.rows() + ib, ja * b.cols() + jb) = aij * b(ib, jb);
    }
  return out;
}

CVector tensor(const CVector& a, const CVector& b) {
  CVector out(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) out[i * b.dim() + j] = a[i] * b[j];
  return out;
}

bool is_projector(const CMatrix& m, double tol) {
  require(m.is_square(), "is_projector: matrix must be square");
  return frobenius_norm(matmul(m, m) - m) <= tol && frobenius_norm(adjoint(m) - m) <= tol;
}

double commutator_norm(const CMatrix& a, const CMatrix& b) {
  require(a.is_square() && b.is_square() && a.rows() == b.rows(),
          "commutator_norm: operators must share one square dimension");
  return frobenius_norm(matmul(a, b) - matmul(b, a));
}

CMatrix adjoint(const CMatrix& m) {
  CMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
  return out;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  require(a.cols() == b.rows(), "matmul: inner dimensions must agree");
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

CVector apply(const CMatrix& m, const CVector& v) {
  require(m.cols() == v.dim(), "apply: matrix columns must match vector dimension");
  CVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

Complex inner(const CVector& u, const CVector& v) {
  require(u.dim() == v.dim(), "inner: dimension mismatch");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < u.dim(); ++i) acc += std::conj(u[i]) * v[i];
  return acc;
}

double norm(const CVector& v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.dim(); ++i) acc += std::norm(v[i]);
  return std::sqrt(acc);
}

double frobenius_norm(const CMatrix& m) {
  double acc = 0.0;
  for (const auto& x : m.entries()) acc += std::norm(x);
  return std::sqrt(acc);
}

Complex trace(const CMatrix& m) {
  require(m.is_square(), "trace: matrix must be square");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) acc += m(i, i);
  return acc;
}

CMatrix outer(const CVector& u, const CVector& v) {
  CMatrix out(u.dim(), v.dim());
  for (std::size_t i = 0; i < u.dim(); ++i)
    for (std::size_t j = 0; j < v.dim(); ++j) out(i, j) = u[i] * std::conj(v[j]);
  return out;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& m) {
  require(m.is_square(), "hermitian_eigenvalues: matrix must be square");
  require(frobenius_norm(adjoint(m) - m) <= 1e-8 * (1.0 + frobenius_norm(m)),
          "hermitian_eigenvalues: matrix is not Hermitian");
  const std::size_t n = m.rows();
  CMatrix a = m;
  // Symmetrize to kill roundoff asymmetry before rotating.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Complex s = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = s;
      a(j, i) = std::conj(s);
    }

  auto off_diag_sq = [&]() {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) acc += std::norm(a(i, j));
    return acc;
  };

  const double scale = frobenius_norm(a) + 1.0;
  const double conv = 1e-28 * scale * scale;
  for (int sweep = 0; sweep < 100 && off_diag_sq() > conv; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r < 1e-300) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const Complex phase = apq / r;  // e^{i phi}
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? -1.0 : 1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const Complex s = t * c * phase;
        // Unitary plane rotation V: V_pp = c, V_pq = -conj(... ) applied as a <- V^dagger a V
        // with V = [[c, -s], [conj(s), c]] acting on the (p, q) plane.
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp + std::conj(s) * akq;
          a(k, q) = -s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk + s * aqk;
          a(q, k) = -std::conj(s) * apk + c * aqk;
        }
      }
    }
  }

  std::vector<double> eigs(n);
  for (std::size_t i = 0; i < n; ++i) eigs[i] = a(i, i).real();
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

}  // namespace realitylab::linalg
