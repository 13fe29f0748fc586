#pragma once

// Window homology of the twisted graph complexes, cycle lifting, and the
// filtration-graded gauge / deformation solvers.

#include "taut/linalg.hpp"
#include "taut/operad.hpp"

#include <optional>
#include <string>
#include <vector>

namespace taut {

// all nonzero canonical classes of connected plain graphs (usual edges,
// standard labels, no unary letters) with at most vmax vertices and first
// Betti number at most gmax
std::vector<std::string> enumerate_cgra_basis(const Ctx &ctx, int vmax, int gmax);
std::vector<std::string> enumerate_cgra_basis_serial(const Ctx &ctx, int vmax, int gmax);

struct HomologyRow {
  int vertices = 0, genus = 0;
  int dim = 0;
  bool exact = true; // interior bigrading (full differential neighborhood in window)
};

// homology table of the flavor differential on the graph window; interior
// bigradings are exact, boundary ones are flagged as bounds
std::vector<HomologyRow> homology_window(const Ctx &ctx, Flavor f, int vmax, int gmax);

struct LiftResult {
  std::optional<OperadElement> lift; // sigma^hbar with theta-twisted residual 0
  std::string message;
  std::vector<Q> witness; // left-kernel certificate when infeasible
};

// solves the hbar-lifting recursion for a cycle of the omega-twisted complex
LiftResult quantize_cycle(const Ctx &ctx, const OperadElement &sigma0, Flavor base,
                          int vmax, int gmax);

struct GaugeResult {
  std::optional<ConvElement> xi;
  ConvElement obstruction; // the residual no gauge term can cancel
  std::string message;
};

// solves gauge_act(xi, alpha) = beta order by order in the filtration over
// the unit-decorated window basis
GaugeResult gauge_equivalent(const Ctx &ctx, const ConvElement &alpha, const ConvElement &beta,
                             bool quantum);

struct ExtendResult {
  bool extended = false;
  bool trivially_global = false; // Delta lam = 0 and {lam, lam} = 0
  int failed_step = -1;
  ConvElement obstruction;
  std::vector<ConvElement> steps;
  std::string message;
};

// formal deformation steps of phi in the direction lam; obstructions are
// certified against the unit-decorated window basis
ExtendResult extend_formal_deformation(const Ctx &ctx, const ConvElement &phi,
                                       const ConvElement &lam, int steps, bool quantum);

} // namespace taut
