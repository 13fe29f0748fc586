#pragma once

// The convolution algebra of decorated stable graphs with leaves in a fixed
// symmetric vector space: a complete shifted Delta-Lie algebra.  Elements
// are stored one canonical representative per isomorphism orbit; the stored
// coefficient is the common coefficient of the labeled classes in the orbit
// (the display convention), and every operation carries the orbit factors
// orb(in)/orb(out) that make this storage exact.

#include "taut/coeffs.hpp"
#include "taut/graphs.hpp"
#include "taut/poly.hpp"
#include "taut/symspace.hpp"

#include <map>
#include <string>
#include <vector>

namespace taut {

struct GN {
  int g = 0, n = 0;
  auto operator<=>(const GN &) const = default;
};

struct Truncation {
  int filt_max = 6;   // cap on n + 2g - 2
  int hbar_max = 3;
  int psi_max = 6;
  int vertex_max = 4;
};

// Normalization of the structure maps on orbit-stored classes.  The
// identity suite (tests/test_identities.cpp) pins the averaged "one
// designated gluing per decomposition" convention: Delta averages its leg
// pair sum, d1 expands once per vertex, and the bracket averages the leg
// choices and sums over label shuffles.  These are the unique choices for
// which d^2 = 0, the Jacobi identity and the derivation laws hold together
// with the anchored master-equation verifications.
struct Norms {
  int delta_mode = 1;   // 1: average the pair sum by C(n,2)
  int bracket_mode = 0; // 0: 1/(n_x n_y) with the shuffle factor
  int d1_mode = 1;      // 1: one expansion per vertex
  int de_sign = 1;      // sign of the dashed-edge rewrite inside d
};

struct Ctx {
  SymVectorSpace A;
  RuleSet rules;
  Truncation trunc;
  Norms norms;
};

struct ConvElement {
  std::map<GN, std::map<std::string, CoeffPoly>> comp;
  long dropped = 0; // out-of-window terms dropped by truncation

  bool is_zero() const;
  ConvElement &operator+=(const ConvElement &o);
  ConvElement operator+(const ConvElement &o) const;
  ConvElement operator-(const ConvElement &o) const;
  ConvElement scaled(const Q &c) const;
  ConvElement hbar_shifted(int k) const;
  bool operator==(const ConvElement &o) const { return comp == o.comp; }
  long term_count() const;
  std::string str(const Ctx &ctx) const;

  // canonicalizes `g`, applies truncation and accumulates
  void add_term(const Ctx &ctx, const DecGraph &g, const CoeffPoly &c);
};

// orbit size of a stored canonical class (legs! / aut), cached by callers
Q orbit_of(const Ctx &ctx, const DecGraph &rep);

// Delta: sum over unordered leg pairs, pairing + new edge (genus key + 1)
ConvElement delta_op(const Ctx &ctx, const ConvElement &x);

// shifted Lie bracket: sum over leg pairs across the two factors
ConvElement bracket(const Ctx &ctx, const ConvElement &x, const ConvElement &y);

struct DParts {
  ConvElement dA, d1, d2, dE;
};
DParts d_parts(const Ctx &ctx, const ConvElement &x);

// d = dA - d1 - d2 (+ dashed-edge rewrite term)
ConvElement d_gA(const Ctx &ctx, const ConvElement &x);

// d x + Delta x + 1/2 {x, x}
ConvElement master_residual(const Ctx &ctx, const ConvElement &x);
// d x + hbar Delta x + 1/2 {x, x}
ConvElement quantum_master_residual(const Ctx &ctx, const ConvElement &x);

// alpha + sum_{k>=1} 1/k! (ad_xi^k alpha + ad_xi^{k-1} D xi), D = d (+ hbar Delta)
ConvElement gauge_act(const Ctx &ctx, const ConvElement &xi, const ConvElement &alpha,
                      int order, bool quantum);

// weight-1 / weight-2 infinitesimal deformation equations
bool infinitesimal_check(const Ctx &ctx, const ConvElement &lam, const ConvElement &phi,
                         bool quantum, std::string *report = nullptr);

// all nonzero canonical classes in the window whose decorations are units
// and whose leaves run over the basis of A; optional parity filter (-1: all)
std::vector<std::pair<GN, std::string>> enumerate_unit_basis(const Ctx &ctx, int parity);

// parity of a stored class: total degree of its letters mod 2
int class_parity(const Ctx &ctx, const DecGraph &rep);

} // namespace taut
