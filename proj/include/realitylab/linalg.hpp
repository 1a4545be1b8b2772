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

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace realitylab::linalg {

using Complex = std::complex<double>;

/// Default tolerance for algebraic identity checks. Amplitudes in this
/// codebase are surds of small rationals, so double precision leaves
/// plenty of headroom below this.
inline constexpr double kDefaultTol = 1e-10;

/// Dense complex vector. Dimensions stay small (<= ~64).
class CVector {
 public:
  CVector() = default;
  explicit CVector(std::size_t dim) : entries_(dim) {}
  CVector(std::initializer_list<Complex> entries) : entries_(entries) {}
  explicit CVector(std::vector<Complex> entries) : entries_(std::move(entries)) {}

  std::size_t dim() const { return entries_.size(); }
  Complex& operator[](std::size_t i) { return entries_[i]; }
  const Complex& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Complex>& entries() const { return entries_; }

  bool operator==(const CVector&) const = default;

 private:
  std::vector<Complex> entries_;
};

/// Dense complex matrix, row-major storage.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  /// Builds a matrix from an explicit row list, e.g. {{1, 0}, {0, 1}}.
  static CMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
  static CMatrix identity(std::size_t n);
  static CMatrix zero(std::size_t rows, std::size_t cols);
  static CMatrix diagonal(const std::vector<Complex>& diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  const std::vector<Complex>& entries() const { return entries_; }

  bool operator==(const CMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

CMatrix operator+(const CMatrix& a, const CMatrix& b);
CMatrix operator-(const CMatrix& a, const CMatrix& b);
CMatrix operator*(Complex scalar, const CMatrix& m);
CVector operator+(const CVector& a, const CVector& b);
CVector operator-(const CVector& a, const CVector& b);
CVector operator*(Complex scalar, const CVector& v);

/// Kronecker product; dimensions multiply.
CMatrix tensor(const CMatrix& a, const CMatrix& b);
CVector tensor(const CVector& a, const CVector& b);

/// True iff m is (numerically) an orthogonal projector:
/// ||m^2 - m||_F <= tol and ||m^dagger - m||_F <= tol.
bool is_projector(const CMatrix& m, double tol = kDefaultTol);

/// Frobenius norm of ab - ba.
double commutator_norm(const CMatrix& a, const CMatrix& b);

CMatrix adjoint(const CMatrix& m);
CMatrix matmul(const CMatrix& a, const CMatrix& b);
CVector apply(const CMatrix& m, const CVector& v);

/// <u|v>, conjugate-linear in the first argument.
Complex inner(const CVector& u, const CVector& v);
double norm(const CVector& v);

double frobenius_norm(const CMatrix& m);
Complex trace(const CMatrix& m);

/// |u><v| outer product.
CMatrix outer(const CVector& u, const CVector& v);

/// Eigenvalues of a Hermitian matrix (ascending), computed by cyclic
/// Jacobi rotations. Only what projector / density-operator certification
/// needs; not a general eigensolver.
std::vector<double> hermitian_eigenvalues(const CMatrix& m);

}  // namespace realitylab::linalg
