#include "taut/linalg.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace taut {

void SparseMatQ::set(int r, int c, const Q &v_in) {
  Q v = v_in;
  v.canonicalize();
  auto &rw = row.at(r);
  auto it = std::lower_bound(rw.begin(), rw.end(), c,
                             [](const auto &p, int col) { return p.first < col; });
  if (it != rw.end() && it->first == c) {
    if (v == 0)
      rw.erase(it);
    else
      it->second = v;
  } else if (v != 0) {
    rw.insert(it, {c, v});
  }
}

Q SparseMatQ::get(int r, int c) const {
  for (auto &[cc, v] : row.at(r))
    if (cc == c) return v;
  return 0;
}

void SparseMatQ::add(int r, int c, const Q &v) { set(r, c, get(r, c) + v); }

long SparseMatQ::nnz() const {
  long n = 0;
  for (auto &r : row) n += static_cast<long>(r.size());
  return n;
}

std::string SparseMatQ::market_str() const {
  std::ostringstream os;
  os << "%%MatrixMarket matrix coordinate rational general\n";
  os << rows << " " << cols << " " << nnz() << "\n";
  for (int r = 0; r < rows; ++r)
    for (auto &[c, v] : row[r]) os << r + 1 << " " << c + 1 << " " << v.get_str() << "\n";
  return os.str();
}

namespace {

// integer sparse row
using IRow = std::vector<std::pair<int, Z>>;

IRow clear_denoms(const std::vector<std::pair<int, Q>> &r) {
  Z lcm = 1;
  for (auto &[c, v] : r) {
    Z den = v.get_den();
    Z g;
    mpz_gcd(g.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
    lcm = lcm / g * den;
  }
  IRow out;
  out.reserve(r.size());
  for (auto &[c, v] : r) out.push_back({c, Z(v.get_num() * (lcm / v.get_den()))});
  return out;
}

void normalize_row(IRow &r) {
  if (r.empty()) return;
  Z g = 0;
  for (auto &[c, v] : r) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  if (g > 1)
    for (auto &[c, v] : r) v /= g;
  if (r.front().second < 0)
    for (auto &[c, v] : r) v = -v;
}

// r2 := (p * r2 - q * r1) / gcd, fraction-free two-row update eliminating
// column `col` (r1 has entry p there, r2 has q)
IRow eliminate(const IRow &r1, const IRow &r2, int col, const Z &p, const Z &q) {
  IRow out;
  out.reserve(r1.size() + r2.size());
  size_t i = 0, j = 0;
  while (i < r1.size() || j < r2.size()) {
    int c1 = i < r1.size() ? r1[i].first : INT32_MAX;
    int c2 = j < r2.size() ? r2[j].first : INT32_MAX;
    if (c1 < c2) {
      out.push_back({c1, Z(-q * r1[i].second)});
      ++i;
    } else if (c2 < c1) {
      out.push_back({c2, Z(p * r2[j].second)});
      ++j;
    } else {
      Z v = p * r2[j].second - q * r1[i].second;
      if (v != 0) out.push_back({c1, v});
      ++i;
      ++j;
    }
  }
  (void)col;
  normalize_row(out);
  return out;
}

struct Echelon {
  std::vector<IRow> rows;       // echelon rows (nonzero)
  std::vector<int> pivot_col;   // per echelon row
  std::vector<int> col_pivot;   // per column: echelon row index or -1
};

// forward elimination with sparsity-preferring pivot order
Echelon echelonize(const SparseMatQ &m) {
  std::vector<IRow> work;
  work.reserve(m.rows);
  for (auto &r : m.row) {
    IRow ir = clear_denoms(r);
    normalize_row(ir);
    if (!ir.empty()) work.push_back(std::move(ir));
  }
  // shortest rows first
  std::stable_sort(work.begin(), work.end(),
                   [](const IRow &a, const IRow &b) { return a.size() < b.size(); });
  Echelon ech;
  ech.col_pivot.assign(m.cols, -1);
  for (auto &r : work) {
    IRow cur = std::move(r);
    while (!cur.empty()) {
      int col = cur.front().first;
      int pr = ech.col_pivot[col];
      if (pr < 0) {
        ech.col_pivot[col] = static_cast<int>(ech.rows.size());
        ech.pivot_col.push_back(col);
        ech.rows.push_back(std::move(cur));
        break;
      }
      cur = eliminate(ech.rows[pr], cur, col, ech.rows[pr].front().second,
                      cur.front().second);
    }
  }
  return ech;
}

} // namespace

int rank(const SparseMatQ &m) { return static_cast<int>(echelonize(m).rows.size()); }

std::vector<std::vector<Q>> kernel_basis(const SparseMatQ &m) {
  Echelon ech = echelonize(m);
  // back substitution per free column
  std::vector<std::vector<Q>> out;
  for (int fc = 0; fc < m.cols; ++fc) {
    if (ech.col_pivot[fc] >= 0) continue;
    std::vector<Q> x(m.cols, 0);
    x[fc] = 1;
    // solve pivot variables from bottom pivot upwards; echelon rows are not
    // fully reduced so walk pivots in decreasing column order
    std::vector<int> pivs;
    for (int c = 0; c < m.cols; ++c)
      if (ech.col_pivot[c] >= 0) pivs.push_back(c);
    for (auto it = pivs.rbegin(); it != pivs.rend(); ++it) {
      int c = *it;
      const IRow &r = ech.rows[ech.col_pivot[c]];
      Q s = 0;
      for (auto &[cc, v] : r)
        if (cc != c) s += Q(v) * x[cc];
      x[c] = -s / Q(r.front().second);
    }
    out.push_back(std::move(x));
  }
  return out;
}

SolveResult solve_in_image(const SparseMatQ &m, const std::vector<Q> &b) {
  if (static_cast<int>(b.size()) != m.rows)
    throw std::invalid_argument("solve_in_image: dimension mismatch");
  // eliminate on [m^T | I]^T style: work with rows of m augmented by the
  // identity to track row operations, so an inconsistent row yields the
  // left-kernel witness directly.  Augmented columns are m.cols + row index.
  SparseMatQ aug(m.rows, m.cols + 1 + m.rows);
  for (int r = 0; r < m.rows; ++r) {
    aug.row[r] = m.row[r];
    if (b[r] != 0) aug.row[r].push_back({m.cols, b[r]});
    aug.row[r].push_back({m.cols + 1 + r, Q(1)});
  }
  // echelonize but only pivot on the first m.cols columns or the b column
  std::vector<IRow> rows;
  std::vector<int> col_pivot(m.cols, -1);
  std::vector<int> pivot_col;
  std::vector<IRow> work;
  for (auto &r : aug.row) {
    IRow ir = clear_denoms(r);
    normalize_row(ir);
    if (!ir.empty()) work.push_back(std::move(ir));
  }
  std::stable_sort(work.begin(), work.end(),
                   [](const IRow &a, const IRow &b2) { return a.size() < b2.size(); });
  for (auto &r : work) {
    IRow cur = std::move(r);
    while (!cur.empty() && cur.front().first < m.cols) {
      int col = cur.front().first;
      int pr = col_pivot[col];
      if (pr < 0) {
        col_pivot[col] = static_cast<int>(rows.size());
        pivot_col.push_back(col);
        rows.push_back(std::move(cur));
        break;
      }
      cur = eliminate(rows[pr], cur, col, rows[pr].front().second, cur.front().second);
    }
    if (!cur.empty() && cur.front().first == m.cols) {
      // inconsistent: b has a pivot; the augmented part is the witness y
      SolveResult res;
      res.left_witness.assign(m.rows, 0);
      Q btot = 0;
      for (auto &[c, v] : cur) {
        if (c == m.cols) btot = Q(v);
        if (c > m.cols) res.left_witness[c - m.cols - 1] = Q(v);
      }
      (void)btot;
      return res;
    }
  }
  // consistent: back-substitute x over pivot columns
  std::vector<Q> x(m.cols, 0);
  std::vector<int> pivs;
  for (int c = 0; c < m.cols; ++c)
    if (col_pivot[c] >= 0) pivs.push_back(c);
  for (auto it = pivs.rbegin(); it != pivs.rend(); ++it) {
    int c = *it;
    const IRow &r = rows[col_pivot[c]];
    Q s = 0;
    for (auto &[cc, v] : r) {
      if (cc == c) continue;
      if (cc < m.cols)
        s += Q(v) * x[cc];
      else if (cc == m.cols)
        s += Q(v); // b coefficient (x_b = 1 formally)
    }
    x[c] = -s / Q(r.front().second);
  }
  // x solves m x + b * 1 = 0 in the augmented sense; flip sign
  for (auto &v : x) v = -v;
  SolveResult res;
  res.solution = std::move(x);
  return res;
}

int homology_dim(const SparseMatQ &d_in, const SparseMatQ &d_out) {
  if (d_in.rows != d_out.cols)
    throw std::invalid_argument("homology_dim: middle dimension mismatch");
  // verify d_out . d_in = 0
  for (int c = 0; c < d_in.cols; ++c) {
    std::vector<Q> col(d_in.rows, 0);
    for (int r = 0; r < d_in.rows; ++r) {
      Q v = d_in.get(r, c);
      if (v != 0) col[r] = v;
    }
    std::vector<Q> img = mat_apply(d_out, col);
    for (auto &v : img)
      if (v != 0) throw std::runtime_error("homology_dim: composition is nonzero");
  }
  int k = d_out.cols - rank(d_out); // dim ker d_out
  return k - rank(d_in);
}

std::vector<Q> mat_apply(const SparseMatQ &m, const std::vector<Q> &x) {
  std::vector<Q> y(m.rows, 0);
  for (int r = 0; r < m.rows; ++r)
    for (auto &[c, v] : m.row[r]) y[r] += v * x[c];
  return y;
}

} // namespace taut
