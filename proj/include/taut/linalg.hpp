#pragma once

// Exact linear algebra over Q for differentials assembled on graph bases.
// Elimination clears denominators and keeps integer rows (Bareiss-style
// two-row updates); pivots are chosen by row/column sparsity.  Every answer
// is exact; there is no floating point anywhere.

#include "taut/rational.hpp"

#include <optional>
#include <vector>

namespace taut {

struct SparseMatQ {
  int rows = 0, cols = 0;
  // row-major, each row sorted by column, no zeros stored
  std::vector<std::vector<std::pair<int, Q>>> row;

  SparseMatQ() = default;
  SparseMatQ(int r, int c) : rows(r), cols(c), row(r) {}
  void set(int r, int c, const Q &v);
  Q get(int r, int c) const;
  void add(int r, int c, const Q &v);
  long nnz() const;
  std::string market_str() const; // matrix-market style text dump
};

int rank(const SparseMatQ &m);

// basis of { x : m x = 0 }
std::vector<std::vector<Q>> kernel_basis(const SparseMatQ &m);

struct SolveResult {
  std::optional<std::vector<Q>> solution;   // x with m x = b
  std::vector<Q> left_witness;              // y with y^T m = 0, y^T b != 0
};

SolveResult solve_in_image(const SparseMatQ &m, const std::vector<Q> &b);

// dim ker(d_out) - rank(d_in); throws unless d_out * d_in == 0
int homology_dim(const SparseMatQ &d_in, const SparseMatQ &d_out);

std::vector<Q> mat_apply(const SparseMatQ &m, const std::vector<Q> &x);

} // namespace taut
