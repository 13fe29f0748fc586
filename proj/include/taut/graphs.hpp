#pragma once

// Stable genus-labeled graphs with decorated vertices and legs.
//
// Orientation convention: the odd degree lives on the usual edges; a class
// carries a total order on its edge list and reordering by an odd
// permutation of usual edges flips the sign.  The Koszul word of a term is
// [edges][vertex decorations][leaf decorations]; every surgery that creates
// an edge prepends it to the edge order (= absolute front of the word).
//
// Local points of a vertex are ordered: legs at the vertex by leg label,
// then edge ends by edge order (a tadpole occupies two consecutive slots).
// Vertex decorations index psi exponents and distinguished points by these
// local point positions.

#include "taut/coeffs.hpp"
#include "taut/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace taut {

struct GEdge {
  int v = 0, w = 0;
  bool dashed = false;
};

struct DecGraph {
  std::vector<int> genus;           // per vertex
  std::vector<GEdge> edges;         // orientation order
  std::vector<int> leg_vertex;      // leg -> vertex
  std::vector<int> leaf;            // leg -> basis index of A, or -1 (bare)
  std::vector<TautMonomial> vdec;   // per vertex

  int nv() const { return static_cast<int>(genus.size()); }
  int nlegs() const { return static_cast<int>(leg_vertex.size()); }
  int nedges() const { return static_cast<int>(edges.size()); }

  int arity(int v) const;               // legs + incident edge ends
  bool connected() const;
  bool stable() const;                  // 2 g(v) + arity(v) > 2 everywhere
  int total_genus() const;              // b1 + sum of vertex genera

  // local point bookkeeping (see header comment)
  std::vector<int> legs_at(int v) const;
  // local index of the given leg at its vertex
  int leg_point(int leg) const;
  // local index of edge end (e, side) at the incident vertex; side 0 is the
  // v end, side 1 the w end
  int edge_end_point(int e, int side) const;
};

// outcome of canonicalization: `key` identifies the isomorphism class where
// isomorphisms may permute vertices and legs; `sign` relates the input
// orientation/letter order to the canonical representative; zero when an
// automorphism acts by an odd permutation
struct CanonClass {
  std::string key;
  int sign = 1;        // 0 when the class vanishes
  long aut_full = 1;   // order of the decorated automorphism group
  long aut_legs = 1;   // order of its image in the symmetric group on legs
  Q orbit;             // nlegs! / aut_legs
};

// parities: parity of each A-basis element (for leaf letters)
CanonClass canonicalize(const DecGraph &g, const RuleSet &rs,
                        const std::vector<uint8_t> &leaf_parity);

// decodes a canonical key back into the representative graph
DecGraph decode_graph(const std::string &key);

long automorphism_order(const DecGraph &g, const RuleSet &rs,
                        const std::vector<uint8_t> &leaf_parity);

// all isomorphism classes of stable graphs of total genus g with n
// (unlabeled, undecorated) legs and at most max_vertices vertices
std::vector<DecGraph> enumerate_stable_graphs(int g, int n, int max_vertices);
std::vector<DecGraph> enumerate_stable_graphs_serial(int g, int n, int max_vertices);

// ---- surgery (labeled level; caller handles signs via word bookkeeping) --

// one way to split vertex v: genus gL/gR, points of v distributed by side[],
// the new edge prepended; returns the new graph and the data needed to
// remap decorations (left keeps index v, right is appended)
struct VertexSplit {
  DecGraph graph;
  int left_vertex, right_vertex;
  std::vector<int> side;      // per old local point of v: 0 left, 1 right
  std::vector<int> posL, posR; // old local point -> local point on its side
  int newL, newR;             // local points of the new edge ends
  int gL, gR;
};

// enumerate ordered stable splits of vertex v (decorations of v are NOT
// split here; callers apply delta_split and install the results)
std::vector<VertexSplit> split_vertex(const DecGraph &g, int v);

// joins legs i and j (i != j) by a new usual edge prepended to the order;
// remaining legs are relabeled preserving order.  point_map[v] gives the
// old->new local point map of every vertex.
DecGraph join_legs(const DecGraph &g, int i, int j,
                   std::vector<std::vector<int>> &point_map);

// grafts leg i of a and leg j of b with a new usual edge (prepended); the
// vertices of b are appended after those of a; legs renumbered a-first
DecGraph graft(const DecGraph &a, int i, const DecGraph &b, int j,
               std::vector<std::vector<int>> &pmap_a,
               std::vector<std::vector<int>> &pmap_b);

// contracts a non-tadpole edge e, merging w into v; decorations must be
// merged by the caller (point maps tell where old points went)
DecGraph contract_edge(const DecGraph &g, int e,
                       std::vector<std::vector<int>> &point_map);

// removes leg `i` (forgetful map), relabeling the rest order-preservingly
DecGraph drop_leg(const DecGraph &g, int i, std::vector<std::vector<int>> &point_map);

} // namespace taut
