#pragma once

// Canonical action elements of the Givental-type symmetry groups, their
// cycle certificates, the independent classical-formula oracle, and the
// hbar-grading route to the Hodge decoration functor.

#include "taut/cohft.hpp"
#include "taut/homology.hpp"
#include "taut/operad.hpp"

#include <string>
#include <vector>

namespace taut {

// one term of an r-datum: (a1 (x) a2) psi^{k+1}, subject to the symmetry
// (a1 (x) a2)^{(12)} = (-1)^k (a1 (x) a2)
struct RTerm {
  int k = 0;
  std::vector<std::vector<Q>> tensor; // dim x dim matrix of a1 (x) a2
};

// validates the symmetry constraint; throws on violation
void check_r_symmetry(const Ctx &ctx, const RTerm &t);

// the three-family Givental element (classical flavor when hbar = false,
// the lifted version otherwise)
OperadElement givental_r(const Ctx &ctx, const std::vector<RTerm> &data, bool hbar);

// the unary translation element sum_l a^l psi^l (l >= 2)
OperadElement translation_T(const Ctx &ctx, const std::vector<std::pair<int, std::vector<Q>>> &series);

// Manin-Zograf element: kappa coefficients (index >= 1) and odd ch
// coefficients (index 2j+1)
OperadElement manin_zograf_l(const Ctx &ctx, const std::vector<std::pair<int, Q>> &kappas,
                             const std::vector<std::pair<int, Q>> &chs);

// the Hodge element sum_j (2j)! s^{2j+1} f_{2j+1} with the auxiliary s
OperadElement hodge_Fhat(const Ctx &ctx, int jmax);

struct CycleReport {
  bool pass = false;
  long residual_terms = 0;
  std::string message;
};
CycleReport check_cycle(const Ctx &ctx, const OperadElement &x, Flavor f);

OperadElement sigma3(const Ctx &ctx);

// the classical three-term infinitesimal formula, coded directly against
// the strict components of alpha (independent of the operadic action path)
ConvElement teleman_infinitesimal_oracle(const Ctx &ctx, const std::vector<RTerm> &data,
                                         const ConvElement &alpha);

// apply Fhat to xi(alpha) with s-bookkeeping, rewrite the Chern characters,
// evaluate s = 1/hbar; throws when a negative hbar power survives
ConvElement br_via_ggrt(const Ctx &ctx, const ConvElement &alpha);

struct OneVertexRow {
  std::string key;
  int psi_degree = 0;
};

// homology basis of the arity-one part of the Givental complex within the
// psi cap; matched against the classified representatives by the caller
std::vector<OneVertexRow> one_vertex_homology_window(const Ctx &ctx, int psi_max);

} // namespace taut
