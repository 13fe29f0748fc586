#pragma once

// dg symmetric vector space (A, d_A, < , >): the target of every convolution
// algebra here.  The pairing is graded symmetric of even degree; the
// copairing (inverse pairing) resolves the standard edge label.

#include "taut/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace taut {

struct SymVectorSpace {
  int dim = 0;
  std::vector<uint8_t> parity;            // per basis element
  std::vector<std::vector<Q>> pair_;      // pairing matrix
  std::vector<std::vector<Q>> dA;         // dA(e_j) = sum_i dA[i][j] e_i; empty = zero
  std::vector<std::string> names;

  Q pairing(int i, int j) const { return pair_.at(i).at(j); }
  bool has_dA() const;

  // throws std::runtime_error on an inconsistency; `need_nondeg` also
  // requires an invertible pairing
  void validate(bool need_nondeg) const;

  // inverse pairing C with sum_i <x, e_i> C[i][j] e_j = x for all x
  std::vector<std::vector<Q>> copairing() const;
};

// rank-one space with <a,a> = 1, the running example of the paper's
// non-gauge-triviality argument
SymVectorSpace rank_one_space();

// the deformation target with basis b_1..b_m (odd), a, d (even),
// c_1..c_m (odd); <b_i,c_i> = <a,d> = 1, graded symmetric
SymVectorSpace pz_space(int m);

} // namespace taut
