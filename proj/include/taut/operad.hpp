#pragma once

// The convolution pre-Lie algebra of the (tautological) graph operads:
// elements are arity-indexed invariant combinations of graphs with unlabeled
// vertices, stored per-vertex-labeling (coefficient of the class divided by
// the order of its vertex symmetry group), so the insertion sums below carry
// no extra symmetry factors.

#include "taut/conv.hpp"

#include <map>
#include <string>
#include <vector>

namespace taut {

// unary operations attached to the inputs of a tautological graph
struct ULetter {
  enum Kind : uint8_t { MZ_KAPPA = 0, MZ_CH = 1, RPSI = 2, TPSI = 3 } kind = MZ_KAPPA;
  int i = 0;          // kappa index / ch index / psi power
  int a1 = -1, a2 = -1; // A-basis entries (RPSI: a1 (x) a2, TPSI: a1)
  auto operator<=>(const ULetter &) const = default;
};

// edge label (a1 (x) a2) psi_1^i psi_2^j; a1 = -1 encodes the standard
// label I psi^0 psi^0 (usual edges only)
struct ELabel {
  int a1 = -1, a2 = -1;
  int i = 0, j = 0;
  auto operator<=>(const ELabel &) const = default;
};

struct OpGraph {
  int nv = 0;
  std::vector<GEdge> edges;
  std::vector<ELabel> elabel;            // parallel to edges
  std::vector<std::vector<ULetter>> vword; // per vertex (inputs below)
};

enum class Flavor {
  CGraTheta,   // twisted by edge + hbar tadpole
  CGraOmega,   // twisted by edge + tadpole (hbar = 1)
  TautOmega,   // tautological graphs, d_E + edge + tadpole
  TautTheta,   // tautological graphs, d_E + edge + hbar tadpole
};

struct OperadElement {
  std::map<std::string, CoeffPoly> terms; // canonical key -> coefficient
  long dropped = 0;

  bool is_zero() const;
  OperadElement &operator+=(const OperadElement &o);
  OperadElement operator+(const OperadElement &o) const;
  OperadElement operator-(const OperadElement &o) const;
  OperadElement scaled(const Q &c) const;
  OperadElement hbar_shifted(int k) const;
  bool operator==(const OperadElement &o) const { return terms == o.terms; }
  long term_count() const { return static_cast<long>(terms.size()); }
  std::string str(const Ctx &ctx) const;

  void add_term(const Ctx &ctx, const OpGraph &g, const CoeffPoly &c);
};

struct OpCanon {
  std::string key;
  int sign = 1;
  long autv = 1;
};
OpCanon canonical_op(const OpGraph &g, const Ctx &ctx);
OpGraph decode_op(const std::string &key);
int op_parity(const OpGraph &g, const Ctx &ctx);
int op_vertices(const std::string &key);
int op_edges(const std::string &key);

// generators
OperadElement op_edge(const Ctx &ctx);       // two vertices, one usual edge
OperadElement op_tadpole(const Ctx &ctx);    // one vertex, one usual tadpole
OperadElement op_sigma3(const Ctx &ctx);     // the tetrahedron
OperadElement op_single(const Ctx &ctx, const OpGraph &g, const Q &c);

// pre-Lie insertion product and the induced Lie bracket
OperadElement prelie_star(const Ctx &ctx, const OperadElement &x, const OperadElement &y,
                          int vertex_cap);
OperadElement op_lie(const Ctx &ctx, const OperadElement &x, const OperadElement &y,
                     int vertex_cap);

// flavor differential: d_E (tautological flavors) + bracket with the twist
OperadElement twisted_diff(const Ctx &ctx, const OperadElement &x, Flavor f, int vertex_cap);

// BCH to the given order (both inputs of positive weight)
OperadElement bch(const Ctx &ctx, const OperadElement &x, const OperadElement &y, int order,
                  int vertex_cap);

// pre-Lie exponential: sum of left-iterated star powers / m!
struct IsotopyData {
  OperadElement series; // arity >= 1 terms, identity excluded
};
IsotopyData prelie_exp(const Ctx &ctx, const OperadElement &x, int vertex_cap);

// the universal action on master-equation elements
ConvElement act_on_gA(const Ctx &ctx, const OperadElement &lambda, const ConvElement &alpha,
                      bool quantum);

// parity of the element (uniform; throws on mixed)
int element_parity(const Ctx &ctx, const OperadElement &x);

} // namespace taut
