#include "taut/symspace.hpp"

#include <stdexcept>

namespace taut {

bool SymVectorSpace::has_dA() const {
  for (auto &col : dA)
    for (auto &v : col)
      if (v != 0) return true;
  return false;
}

void SymVectorSpace::validate(bool need_nondeg) const {
  if (static_cast<int>(parity.size()) != dim || static_cast<int>(pair_.size()) != dim)
    throw std::runtime_error("SymVectorSpace: size mismatch");
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Q sym = (parity[i] && parity[j]) ? -pair_[j][i] : pair_[j][i];
      if (pair_[i][j] != sym)
        throw std::runtime_error("SymVectorSpace: pairing is not graded symmetric");
      if (pair_[i][j] != 0 && parity[i] != parity[j])
        throw std::runtime_error("SymVectorSpace: pairing is not even");
    }
  if (!dA.empty()) {
    if (static_cast<int>(dA.size()) != dim) throw std::runtime_error("SymVectorSpace: dA shape");
    // dA^2 = 0
    for (int j = 0; j < dim; ++j)
      for (int i = 0; i < dim; ++i) {
        Q s = 0;
        for (int k = 0; k < dim; ++k) s += dA[i][k] * dA[k][j];
        if (s != 0) throw std::runtime_error("SymVectorSpace: dA^2 != 0");
      }
    // parity: dA odd
    for (int j = 0; j < dim; ++j)
      for (int i = 0; i < dim; ++i)
        if (dA[i][j] != 0 && parity[i] == parity[j])
          throw std::runtime_error("SymVectorSpace: dA is not odd");
    // <dA x, y> + (-1)^{|x|} <x, dA y> = 0
    for (int x = 0; x < dim; ++x)
      for (int y = 0; y < dim; ++y) {
        Q s = 0;
        for (int k = 0; k < dim; ++k) s += dA[k][x] * pair_[k][y];
        Q t = 0;
        for (int k = 0; k < dim; ++k) t += dA[k][y] * pair_[x][k];
        if (s + (parity[x] ? -t : t) != 0)
          throw std::runtime_error("SymVectorSpace: dA incompatible with pairing");
      }
  }
  if (need_nondeg) (void)copairing();
}

std::vector<std::vector<Q>> SymVectorSpace::copairing() const {
  // Gauss-Jordan inverse of the pairing matrix
  int n = dim;
  std::vector<std::vector<Q>> a = pair_, inv(n, std::vector<Q>(n, 0));
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int r = c; r < n; ++r)
      if (a[r][c] != 0) {
        p = r;
        break;
      }
    if (p < 0) throw std::runtime_error("SymVectorSpace: degenerate pairing");
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    Q lead = a[c][c];
    for (int j = 0; j < n; ++j) {
      a[c][j] /= lead;
      inv[c][j] /= lead;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Q f = a[r][c];
      for (int j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

SymVectorSpace rank_one_space() {
  SymVectorSpace A;
  A.dim = 1;
  A.parity = {0};
  A.pair_ = {{Q(1)}};
  A.names = {"a"};
  return A;
}

SymVectorSpace pz_space(int m) {
  SymVectorSpace A;
  A.dim = 2 * m + 2;
  A.parity.assign(A.dim, 0);
  A.names.resize(A.dim);
  // layout: b_1..b_m, a, d, c_1..c_m
  for (int i = 0; i < m; ++i) {
    A.parity[i] = 1;
    A.names[i] = "b" + std::to_string(i + 1);
  }
  A.names[m] = "a";
  A.names[m + 1] = "d";
  for (int i = 0; i < m; ++i) {
    A.parity[m + 2 + i] = 1;
    A.names[m + 2 + i] = "c" + std::to_string(i + 1);
  }
  A.pair_.assign(A.dim, std::vector<Q>(A.dim, 0));
  A.pair_[m][m + 1] = 1;
  A.pair_[m + 1][m] = 1;
  for (int i = 0; i < m; ++i) {
    A.pair_[i][m + 2 + i] = 1;        // <b_i, c_i> = 1
    A.pair_[m + 2 + i][i] = -1;       // graded symmetry for odd elements
  }
  return A;
}

} // namespace taut
