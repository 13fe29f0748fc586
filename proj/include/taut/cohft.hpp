#pragma once

// Concrete (quantum, homotopy) CohFT data: Frobenius/TQFT master-equation
// elements, the two deformation constructions with minimal classes, the
// hbar-decoration functor and the hbar-grading section.

#include "taut/conv.hpp"

#include <string>
#include <vector>

namespace taut {

struct FrobeniusData {
  SymVectorSpace A;
  // prod[i][j][k]: coefficient of e_k in e_i * e_j
  std::vector<std::vector<std::vector<Q>>> prod;
  std::vector<int> degree; // optional Z-grading (for the generalized element)

  void validate() const; // associativity, graded commutativity, Frobenius
  std::vector<Q> mul(const std::vector<Q> &x, const std::vector<Q> &y) const;
  Q pair(const std::vector<Q> &x, const std::vector<Q> &y) const;
  std::vector<Q> handle() const; // sum C[a][b] e_a e_b
  // correlator of the induced TQFT at (g, n) on a basis tuple
  Q correlator(int g, const std::vector<int> &tuple) const;
};

FrobeniusData rank_one_frobenius();
FrobeniusData group_algebra_z2(); // 2-dim group algebra of Z/2

// inserts the stored-class coefficient directly (constructor convention)
void set_class(ConvElement &el, const Ctx &ctx, const DecGraph &g, const CoeffPoly &c);

// the strict TQFT element of a Frobenius structure, all window components
ConvElement frobenius_tqft(const Ctx &ctx, const FrobeniusData &F);

// the three-family deformation element on pz_space(m)
ConvElement pz_alpha(const Ctx &ctx, int m);

// the single-vertex family decorated by pullbacks of the registered minimal
// class (id from ctx.rules); requires ctx.A = pz_space(m) with matching m
ConvElement pz_lambda(const Ctx &ctx, int min_id);

// generalized four-family element for graded Frobenius data
ConvElement pz_general_alpha(const Ctx &ctx, const FrobeniusData &F, int a_idx, int d_idx,
                             const std::vector<int> &b_idx, const std::vector<int> &c_idx,
                             const std::vector<int> &e_idx);

// multiply every vertex class by its Hodge element and the graph by
// hbar^{b_1}
ConvElement br(const Ctx &ctx, const ConvElement &x);

// multiply every graph by hbar^{b_1 + sum of vertex genera}
ConvElement xi_map(const Ctx &ctx, const ConvElement &x);

// evaluation at hbar = 1
ConvElement eval_hbar_one(const ConvElement &x);

// classification report: TQFT / strict CohFT / tree-level / homotopy CohFT
std::string verify_cohft(const Ctx &ctx, const ConvElement &x);

} // namespace taut
