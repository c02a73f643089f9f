#include "wps/qlinalg.hpp"

#include <stdexcept>

namespace wps {

RatMat RatMat::identity(int n) {
  RatMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RatMat RatMat::transposed() const {
  RatMat t(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
  return t;
}

int rrefInPlace(RatMat& m, std::vector<int>* pivotCols) {
  if (pivotCols) pivotCols->clear();
  int rank = 0;
  for (int col = 0; col < m.cols && rank < m.rows; ++col) {
    int piv = -1;
    for (int i = rank; i < m.rows; ++i)
      if (m.at(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(rank, j));
    Rat inv = Rat(1) / m.at(rank, col);
    for (int j = col; j < m.cols; ++j) m.at(rank, j) *= inv;
    for (int i = 0; i < m.rows; ++i) {
      if (i == rank || m.at(i, col) == 0) continue;
      Rat f = m.at(i, col);
      for (int j = col; j < m.cols; ++j) m.at(i, j) -= f * m.at(rank, j);
    }
    if (pivotCols) pivotCols->push_back(col);
    ++rank;
  }
  return rank;
}

int rankOf(RatMat m) { return rrefInPlace(m); }

std::vector<std::vector<Rat>> nullspaceBasis(const RatMat& m) {
  RatMat r = m;
  std::vector<int> pivots;
  int rank = rrefInPlace(r, &pivots);
  std::vector<bool> isPivot(m.cols, false);
  for (int c : pivots) isPivot[c] = true;
  std::vector<std::vector<Rat>> basis;
  for (int free = 0; free < m.cols; ++free) {
    if (isPivot[free]) continue;
    std::vector<Rat> v(m.cols, Rat(0));
    v[free] = 1;
    for (int k = 0; k < rank; ++k) v[pivots[k]] = -r.at(k, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<Rat>> solveLinear(const RatMat& a,
                                            const std::vector<Rat>& b) {
  if (static_cast<int>(b.size()) != a.rows)
    throw std::invalid_argument("solveLinear: size mismatch");
  RatMat aug(a.rows, a.cols + 1);
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < a.cols; ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, a.cols) = b[i];
  }
  std::vector<int> pivots;
  int rank = rrefInPlace(aug, &pivots);
  if (!pivots.empty() && pivots.back() == a.cols) return std::nullopt;
  std::vector<Rat> x(a.cols, Rat(0));
  for (int k = 0; k < rank; ++k) x[pivots[k]] = aug.at(k, a.cols);
  return x;
}

Rat detGauss(RatMat m) {
  if (m.rows != m.cols) throw std::invalid_argument("detGauss: not square");
  Rat det = 1;
  for (int col = 0; col < m.cols; ++col) {
    int piv = -1;
    for (int i = col; i < m.rows; ++i)
      if (m.at(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) return 0;
    if (piv != col) {
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(col, j));
      det = -det;
    }
    det *= m.at(col, col);
    Rat inv = Rat(1) / m.at(col, col);
    for (int i = col + 1; i < m.rows; ++i) {
      if (m.at(i, col) == 0) continue;
      Rat f = m.at(i, col) * inv;
      for (int j = col; j < m.cols; ++j) m.at(i, j) -= f * m.at(col, j);
    }
  }
  return det;
}

SuperPoly berkowitzDet(const std::vector<std::vector<SuperPoly>>& m,
                       const RingPtr& ring) {
  int n = static_cast<int>(m.size());
  for (auto& row : m) {
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("berkowitzDet: not square");
    for (auto& e : row)
      if (!e.isHomogeneousParity(Parity::Even))
        throw std::invalid_argument("berkowitzDet: entries must be even");
  }
  if (n == 0) return SuperPoly::constant(ring, 1);

  auto one = SuperPoly::constant(ring, 1);
  // poly = characteristic-polynomial coefficients of the leading k×k block,
  // leading coefficient first.
  std::vector<SuperPoly> poly = {one, -m[0][0]};
  for (int k = 2; k <= n; ++k) {
    // Toeplitz column: [1, −a_kk, −R·C, −R·M·C, −R·M²·C, ...] with M the
    // leading (k−1) block, R the last row, C the last column.
    std::vector<SuperPoly> items;
    items.push_back(one);
    items.push_back(-m[k - 1][k - 1]);
    std::vector<SuperPoly> s(k - 1, SuperPoly::zero(ring));
    for (int i = 0; i < k - 1; ++i) s[i] = m[i][k - 1];
    for (int step = 0; step < k - 1; ++step) {
      SuperPoly dot(ring);
      for (int j = 0; j < k - 1; ++j) dot += m[k - 1][j] * s[j];
      items.push_back(-dot);
      if (step + 2 < static_cast<int>(k) + 1 - 1) {
        std::vector<SuperPoly> next(k - 1, SuperPoly::zero(ring));
        for (int i = 0; i < k - 1; ++i) {
          SuperPoly acc(ring);
          for (int j = 0; j < k - 1; ++j) acc += m[i][j] * s[j];
          next[i] = acc;
        }
        s = std::move(next);
      }
    }
    items.resize(k + 1, SuperPoly::zero(ring));
    std::vector<SuperPoly> next(k + 1, SuperPoly::zero(ring));
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= i && j < k; ++j) next[i] += items[i - j] * poly[j];
    poly = std::move(next);
  }
  SuperPoly det = poly[n];
  return (n % 2 == 0) ? det : -det;
}

} // namespace wps
