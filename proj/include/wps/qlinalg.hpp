#pragma once

#include <optional>
#include <vector>

#include "wps/rational.hpp"
#include "wps/superpoly.hpp"

namespace wps {

/// Dense exact-rational matrix, row-major.
struct RatMat {
  int rows = 0, cols = 0;
  std::vector<Rat> a;

  RatMat() = default;
  RatMat(int r, int c) : rows(r), cols(c), a(size_t(r) * size_t(c), Rat(0)) {}
  Rat& at(int i, int j) { return a[size_t(i) * cols + j]; }
  const Rat& at(int i, int j) const { return a[size_t(i) * cols + j]; }
  static RatMat identity(int n);
  RatMat transposed() const;
};

/// Gauss-Jordan to reduced row echelon form; returns rank, optionally the
/// pivot columns in order.
int rrefInPlace(RatMat& m, std::vector<int>* pivotCols = nullptr);
int rankOf(RatMat m);

/// Basis of { x : Mx = 0 }, one vector per free column.
std::vector<std::vector<Rat>> nullspaceBasis(const RatMat& m);

/// One solution of Ax = b, or nullopt if inconsistent.
std::optional<std::vector<Rat>> solveLinear(const RatMat& a,
                                            const std::vector<Rat>& b);

/// Determinant by fraction-producing Gaussian elimination (square only).
Rat detGauss(RatMat m);

/// Division-free determinant (Berkowitz) for a square matrix of
/// parity-even entries over one ring; needed when entries are nilpotent.
SuperPoly berkowitzDet(const std::vector<std::vector<SuperPoly>>& m,
                       const RingPtr& ring);

} // namespace wps
