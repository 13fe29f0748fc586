#include "taut/graphs.hpp"
#include "taut/koszul.hpp"
#include "taut/par.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace taut {

int DecGraph::arity(int v) const {
  int a = 0;
  for (int lv : leg_vertex)
    if (lv == v) ++a;
  for (auto &e : edges) {
    if (e.v == v) ++a;
    if (e.w == v) ++a;
  }
  return a;
}

bool DecGraph::connected() const {
  const int n = nv();
  if (n == 0) return false;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto &e : edges) parent[find(e.v)] = find(e.w);
  int root = find(0);
  for (int v = 1; v < n; ++v)
    if (find(v) != root) return false;
  return true;
}

bool DecGraph::stable() const {
  for (int v = 0; v < nv(); ++v)
    if (2 * genus[v] + arity(v) <= 2) return false;
  return true;
}

int DecGraph::total_genus() const {
  int b1 = nedges() - nv() + 1;
  int s = 0;
  for (int g : genus) s += g;
  return b1 + s;
}

std::vector<int> DecGraph::legs_at(int v) const {
  std::vector<int> out;
  for (int l = 0; l < nlegs(); ++l)
    if (leg_vertex[l] == v) out.push_back(l);
  return out;
}

int DecGraph::leg_point(int leg) const {
  const int v = leg_vertex[leg];
  int idx = 0;
  for (int l = 0; l < leg; ++l)
    if (leg_vertex[l] == v) ++idx;
  return idx;
}

int DecGraph::edge_end_point(int e, int side) const {
  const int v = side == 0 ? edges[e].v : edges[e].w;
  int idx = 0;
  for (int lv : leg_vertex)
    if (lv == v) ++idx;
  for (int f = 0; f < static_cast<int>(edges.size()); ++f) {
    if (edges[f].v == v) {
      if (f == e && side == 0) return idx;
      ++idx;
    }
    if (edges[f].w == v) {
      if (f == e && side == 1) return idx;
      ++idx;
    }
  }
  throw std::runtime_error("edge_end_point: bad edge/side");
}

// ---------------------------------------------------------------------------
// canonicalization

namespace {

struct ByteBuf {
  std::string s;
  void u8(int x) { s += static_cast<char>(x & 0xff); }
  void str(const std::string &t) {
    u8(static_cast<int>(t.size()));
    s += t;
  }
};

// per-half-edge data relevant for symmetry: psi exponent and distinguished
// flag at the local point where the half-edge attaches
struct EndData {
  int psi = 0;
  int flag = 0;
  auto operator<=>(const EndData &) const = default;
};

EndData end_data(const DecGraph &g, int v, int pt) {
  EndData d;
  d.psi = g.vdec[v].psi_at(pt);
  for (auto p : g.vdec[v].min_pts)
    if (p == pt) d.flag = 1;
  return d;
}

struct Candidate {
  std::string bytes;
  int sign;
  std::vector<int> legmap; // old leg -> new leg
};

// point-insensitive vertex invariant
std::string vertex_invariant(const DecGraph &g, const RuleSet &rs, int v) {
  ByteBuf b;
  b.u8(g.genus[v]);
  std::vector<int> leafs;
  for (int l = 0; l < g.nlegs(); ++l)
    if (g.leg_vertex[l] == v) leafs.push_back(g.leaf[l]);
  std::sort(leafs.begin(), leafs.end());
  b.u8(static_cast<int>(leafs.size()));
  for (int x : leafs) b.u8(x + 1);
  int du = 0, dd = 0, tu = 0, td = 0;
  for (auto &e : g.edges) {
    if (e.v == v && e.w == v) (e.dashed ? td : tu) += 1;
    else if (e.v == v || e.w == v) (e.dashed ? dd : du) += 1;
  }
  b.u8(du);
  b.u8(dd);
  b.u8(tu);
  b.u8(td);
  TautMonomial m = g.vdec[v];
  // erase point information, keep exponent multiset
  std::vector<int> exps;
  for (auto &[p, e] : m.psi) exps.push_back(e);
  std::sort(exps.begin(), exps.end());
  b.u8(static_cast<int>(exps.size()));
  for (int e : exps) b.u8(e);
  b.u8(static_cast<int>(m.min_pts.size()));
  b.u8(m.min_class);
  b.u8(static_cast<int>(m.kappa.size()));
  for (auto k : m.kappa) b.u8(k);
  b.u8(static_cast<int>(m.lam.size()));
  for (auto l : m.lam) b.u8(l);
  b.u8(static_cast<int>(m.ch.size()));
  for (auto c : m.ch) b.u8(c);
  (void)rs;
  return b.s;
}

struct LegKey {
  int nvtx, leaf, psi, flag;
  auto operator<=>(const LegKey &) const = default;
};

// builds the candidate form for a fixed vertex relabeling rho
Candidate build_candidate(const DecGraph &g, const RuleSet &rs,
                          const std::vector<uint8_t> &leaf_parity,
                          const std::vector<int> &rho, bool &zero_flag) {
  const int V = g.nv(), L = g.nlegs(), E = g.nedges();

  // --- legs: sort by (new vertex, leaf, psi, flag), stable
  std::vector<LegKey> lk(L);
  for (int l = 0; l < L; ++l) {
    int v = g.leg_vertex[l];
    EndData d = end_data(g, v, g.leg_point(l));
    lk[l] = {rho[v], g.leaf[l], d.psi, d.flag};
  }
  std::vector<int> legorder(L);
  std::iota(legorder.begin(), legorder.end(), 0);
  std::stable_sort(legorder.begin(), legorder.end(),
                   [&](int a, int b) { return lk[a] < lk[b]; });
  // odd equal pair => zero
  for (int i = 0; i + 1 < L; ++i) {
    int a = legorder[i], b = legorder[i + 1];
    if (lk[a] == lk[b] && g.leaf[a] >= 0 && leaf_parity[g.leaf[a]]) {
      zero_flag = true;
    }
  }
  std::vector<uint8_t> lpar(L, 0);
  for (int l = 0; l < L; ++l)
    lpar[l] = (g.leaf[l] >= 0) ? leaf_parity[g.leaf[l]] : 0;
  int sign = koszul_perm_sign(legorder, lpar);
  std::vector<int> legmap(L); // old -> new
  for (int i = 0; i < L; ++i) legmap[legorder[i]] = i;

  // --- edges: endpoints via rho, tadpole ends ordered by end data
  struct EKey {
    int dashed, a, b;
    EndData ea, eb;
    int orig;
    bool flipped; // true when the stored (v,w) orientation was swapped
    auto operator<=>(const EKey &) const = default;
  };
  std::vector<EKey> ek(E);
  for (int e = 0; e < E; ++e) {
    int v = g.edges[e].v, w = g.edges[e].w;
    EndData dv = end_data(g, v, g.edge_end_point(e, 0));
    EndData dw = end_data(g, w, g.edge_end_point(e, 1));
    int a = rho[v], b = rho[w];
    bool flip = false;
    if (a > b || (a == b && dw < dv)) {
      std::swap(a, b);
      std::swap(dv, dw);
      flip = true;
    }
    ek[e] = {g.edges[e].dashed ? 1 : 0, a, b, dv, dw, e, flip};
  }
  std::vector<int> edgeorder(E);
  std::iota(edgeorder.begin(), edgeorder.end(), 0);
  std::stable_sort(edgeorder.begin(), edgeorder.end(), [&](int x, int y) {
    const EKey &p = ek[x], &q = ek[y];
    return std::tie(p.dashed, p.a, p.b, p.ea, p.eb, p.orig) <
           std::tie(q.dashed, q.a, q.b, q.ea, q.eb, q.orig);
  });
  std::vector<uint8_t> epar(E);
  for (int e = 0; e < E; ++e) epar[e] = g.edges[e].dashed ? 0 : 1;
  sign *= koszul_perm_sign(edgeorder, epar);
  // identical parallel usual edges => zero
  for (int i = 0; i + 1 < E; ++i) {
    const EKey &p = ek[edgeorder[i]], &q = ek[edgeorder[i + 1]];
    if (!p.dashed && !q.dashed && p.a == q.a && p.b == q.b && p.ea == q.ea && p.eb == q.eb)
      zero_flag = true;
  }

  // --- vertex decorations: Koszul of rho on their parities
  {
    std::vector<int> vperm(V);  // position i (new) holds old vertex
    for (int v = 0; v < V; ++v) vperm[rho[v]] = v;
    std::vector<uint8_t> vpar(V);
    for (int v = 0; v < V; ++v) vpar[v] = monomial_parity(g.vdec[v], rs);
    sign *= koszul_perm_sign(vperm, vpar);
  }

  // --- assemble the new graph and the local point maps
  DecGraph ng;
  ng.genus.resize(V);
  ng.vdec.resize(V);
  std::vector<int> vinv(V);
  for (int v = 0; v < V; ++v) {
    ng.genus[rho[v]] = g.genus[v];
    vinv[rho[v]] = v;
  }
  ng.leg_vertex.resize(L);
  ng.leaf.resize(L);
  for (int i = 0; i < L; ++i) {
    ng.leg_vertex[i] = rho[g.leg_vertex[legorder[i]]];
    ng.leaf[i] = g.leaf[legorder[i]];
  }
  ng.edges.resize(E);
  for (int i = 0; i < E; ++i) {
    const EKey &k = ek[edgeorder[i]];
    ng.edges[i] = {k.a, k.b, k.dashed != 0};
  }
  // old local point -> new local point, per old vertex
  for (int v = 0; v < V; ++v) {
    const int nvx = rho[v];
    const int npts = g.vdec[v].psi.empty() && g.vdec[v].min_pts.empty() ? 0 : g.arity(v);
    (void)npts;
    std::vector<int> pmap(g.arity(v), -1);
    // legs
    for (int l = 0; l < L; ++l)
      if (g.leg_vertex[l] == v) {
        int newleg = legmap[l];
        int newpos = 0;
        for (int m2 = 0; m2 < newleg; ++m2)
          if (ng.leg_vertex[m2] == nvx) ++newpos;
        pmap[g.leg_point(l)] = newpos;
      }
    int legs_here = 0;
    for (int m2 = 0; m2 < L; ++m2)
      if (ng.leg_vertex[m2] == nvx) ++legs_here;
    // edge ends: walk new edges in order, match back to old ends
    int slot = legs_here;
    for (int i = 0; i < E; ++i) {
      const EKey &k = ek[edgeorder[i]];
      const GEdge &oe = g.edges[k.orig];
      // ends of the new edge i in new order: (a-side, b-side)
      for (int side = 0; side < 2; ++side) {
        int newend_v = side == 0 ? k.a : k.b;
        if (newend_v != nvx) continue;
        int oldside = k.flipped ? 1 - side : side;
        int oldv = oldside == 0 ? oe.v : oe.w;
        if (oldv != v) throw std::runtime_error("canon: end mismatch");
        pmap[g.edge_end_point(k.orig, oldside)] = slot;
        ++slot;
      }
    }
    ng.vdec[rho[v]] = mono_remap(g.vdec[v], pmap);
  }

  // --- serialize
  ByteBuf b;
  b.u8(V);
  for (int v = 0; v < V; ++v) {
    b.u8(ng.genus[v]);
    b.str(ng.vdec[v].encode());
  }
  b.u8(E);
  for (auto &e : ng.edges) {
    b.u8(e.v);
    b.u8(e.w);
    b.u8(e.dashed ? 1 : 0);
  }
  b.u8(L);
  for (int l = 0; l < L; ++l) {
    b.u8(ng.leg_vertex[l]);
    b.u8(ng.leaf[l] + 1);
  }
  return {b.s, sign, legmap};
}

} // namespace

CanonClass canonicalize(const DecGraph &g, const RuleSet &rs,
                        const std::vector<uint8_t> &leaf_parity) {
  const int V = g.nv(), L = g.nlegs();

  // group vertices by invariant
  std::vector<std::string> inv(V);
  for (int v = 0; v < V; ++v) inv[v] = vertex_invariant(g, rs, v);
  std::vector<int> order(V);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return inv[a] != inv[b] ? inv[a] < inv[b] : a < b;
  });
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < V; ++i) {
    if (i == 0 || inv[order[i]] != inv[order[i - 1]]) groups.push_back({});
    groups.back().push_back(order[i]);
  }

  bool zero = false;
  std::string best;
  int best_sign = 0;
  long stab_rho = 0;
  std::set<std::vector<int>> sigmas;

  // iterate products of within-group permutations
  std::vector<int> rho(V, -1);
  std::function<void(size_t, int)> rec = [&](size_t gi, int base) {
    if (gi == groups.size()) {
      bool zf = false;
      Candidate c = build_candidate(g, rs, leaf_parity, rho, zf);
      if (zf) zero = true;
      if (best.empty() || c.bytes < best) {
        best = c.bytes;
        best_sign = c.sign;
        stab_rho = 1;
        sigmas.clear();
        sigmas.insert(c.legmap);
      } else if (c.bytes == best) {
        if (c.sign != best_sign) zero = true;
        ++stab_rho;
        sigmas.insert(c.legmap);
      }
      return;
    }
    auto &grp = groups[gi];
    std::vector<int> perm(grp.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (size_t i = 0; i < grp.size(); ++i) rho[grp[i]] = base + static_cast<int>(perm[i]);
      rec(gi + 1, base + static_cast<int>(grp.size()));
    } while (std::next_permutation(perm.begin(), perm.end()));
  };
  rec(0, 0);

  CanonClass out;
  out.key = best;

  // tie groups of fully equivalent legs: each contributes its factorial to
  // the automorphism count (odd-parity ties were flagged zero above)
  long tie_auts = 1;
  {
    std::vector<LegKey> lk(L);
    for (int l = 0; l < L; ++l) {
      int v = g.leg_vertex[l];
      EndData d = end_data(g, v, g.leg_point(l));
      // use identity-independent grouping: vertex identity via pointer value
      lk[l] = {v, g.leaf[l], d.psi, d.flag};
    }
    std::map<std::tuple<int, int, int, int>, int> cnt;
    for (int l = 0; l < L; ++l)
      cnt[{lk[l].nvtx, lk[l].leaf, lk[l].psi, lk[l].flag}]++;
    for (auto &[k, c] : cnt)
      for (int i = 2; i <= c; ++i) tie_auts *= i;
  }

  // half-edge automorphisms on the canonical representative
  long half_auts = 1;
  {
    DecGraph cg = decode_graph(best);
    for (int e = 0; e < cg.nedges(); ++e) {
      if (cg.edges[e].v == cg.edges[e].w) {
        EndData d0 = end_data(cg, cg.edges[e].v, cg.edge_end_point(e, 0));
        EndData d1 = end_data(cg, cg.edges[e].v, cg.edge_end_point(e, 1));
        if (d0 == d1) half_auts *= 2;
      }
    }
    // identical parallel dashed edges
    std::map<std::string, int> bundle;
    for (int e = 0; e < cg.nedges(); ++e) {
      if (cg.edges[e].v == cg.edges[e].w || !cg.edges[e].dashed) continue;
      ByteBuf bb;
      bb.u8(cg.edges[e].v);
      bb.u8(cg.edges[e].w);
      EndData d0 = end_data(cg, cg.edges[e].v, cg.edge_end_point(e, 0));
      EndData d1 = end_data(cg, cg.edges[e].w, cg.edge_end_point(e, 1));
      bb.u8(d0.psi);
      bb.u8(d0.flag);
      bb.u8(d1.psi);
      bb.u8(d1.flag);
      bundle[bb.s]++;
    }
    for (auto &[k, c] : bundle)
      for (int i = 2; i <= c; ++i) half_auts *= i;
  }

  // sigma image: distinct leg maps, each composable with tie permutations;
  // the tie permutations themselves are legal automorphism legs
  long image = static_cast<long>(sigmas.size()) * tie_auts;

  out.sign = zero ? 0 : best_sign;
  out.aut_full = stab_rho * tie_auts * half_auts;
  out.aut_legs = image;
  Q orbit = factorial(L) / Q(image);
  out.orbit = orbit;
  return out;
}

DecGraph decode_graph(const std::string &key) {
  DecGraph g;
  size_t p = 0;
  auto u8 = [&]() { return static_cast<int>(static_cast<unsigned char>(key.at(p++))); };
  int V = u8();
  g.genus.resize(V);
  g.vdec.resize(V);
  for (int v = 0; v < V; ++v) {
    g.genus[v] = u8();
    int len = u8();
    std::string enc = key.substr(p, len);
    p += len;
    TautMonomial m;
    size_t q = 0;
    auto mu8 = [&]() { return static_cast<int>(static_cast<unsigned char>(enc.at(q++))); };
    m.min_class = mu8() - 'A';
    int np = mu8();
    for (int i = 0; i < np; ++i) m.min_pts.push_back(static_cast<uint8_t>(mu8()));
    int ns = mu8();
    for (int i = 0; i < ns; ++i) {
      int pt = mu8(), e = mu8();
      m.psi.push_back({static_cast<uint8_t>(pt), static_cast<uint8_t>(e)});
    }
    int nk = mu8();
    for (int i = 0; i < nk; ++i) {
      int lo = mu8(), hi = mu8();
      m.kappa.push_back(static_cast<uint16_t>(lo | (hi << 8)));
    }
    int nl = mu8();
    for (int i = 0; i < nl; ++i) m.lam.push_back(static_cast<uint8_t>(mu8()));
    int nc = mu8();
    for (int i = 0; i < nc; ++i) m.ch.push_back(static_cast<uint8_t>(mu8()));
    g.vdec[v] = m;
  }
  int E = u8();
  for (int e = 0; e < E; ++e) {
    int a = u8(), b = u8(), d = u8();
    g.edges.push_back({a, b, d != 0});
  }
  int L = u8();
  for (int l = 0; l < L; ++l) {
    int v = u8(), leaf = u8() - 1;
    g.leg_vertex.push_back(v);
    g.leaf.push_back(leaf);
  }
  return g;
}

long automorphism_order(const DecGraph &g, const RuleSet &rs,
                        const std::vector<uint8_t> &leaf_parity) {
  return canonicalize(g, rs, leaf_parity).aut_full;
}

// ---------------------------------------------------------------------------
// enumeration

namespace {

void genus_tuples(int V, int gsum_max, std::vector<std::vector<int>> &out) {
  std::vector<int> cur(V, 0);
  std::function<void(int, int)> rec = [&](int i, int rem) {
    if (i == V) {
      out.push_back(cur);
      return;
    }
    for (int gi = 0; gi <= rem; ++gi) {
      cur[i] = gi;
      rec(i + 1, rem - gi);
    }
  };
  rec(0, gsum_max);
}

void leg_counts(int V, int n, std::vector<std::vector<int>> &out) {
  std::vector<int> cur(V, 0);
  std::function<void(int, int)> rec = [&](int i, int rem) {
    if (i == V - 1) {
      cur[i] = rem;
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= rem; ++k) {
      cur[i] = k;
      rec(i + 1, rem - k);
    }
  };
  rec(0, n);
}

std::vector<DecGraph> enumerate_impl(int g, int n, int max_vertices, bool parallel) {
  if (2 * g + n <= 2) throw std::invalid_argument("enumerate: unstable (g,n)");
  RuleSet rs;
  std::vector<uint8_t> no_par;

  struct Task {
    int V;
    std::vector<int> genus;
    std::vector<int> legs;
  };
  std::vector<Task> tasks;
  for (int V = 1; V <= max_vertices; ++V) {
    std::vector<std::vector<int>> gts, lcs;
    genus_tuples(V, g, gts);
    leg_counts(V, n, lcs);
    for (auto &gt : gts) {
      int gsum = 0;
      for (int x : gt) gsum += x;
      if (g - gsum < 0) continue;
      int E = (g - gsum) + V - 1;
      if (E < 0) continue;
      for (auto &lc : lcs) tasks.push_back({V, gt, lc});
    }
  }

  std::vector<std::vector<std::pair<std::string, DecGraph>>> results(tasks.size());
  auto run = [&](int ti) {
    const Task &t = tasks[ti];
    const int V = t.V;
    int gsum = 0;
    for (int x : t.genus) gsum += x;
    const int E = (g - gsum) + V - 1;
    // pair types (i <= j)
    std::vector<std::pair<int, int>> pt;
    for (int i = 0; i < V; ++i)
      for (int j = i; j < V; ++j) pt.push_back({i, j});
    std::vector<int> mult(pt.size(), 0);
    std::function<void(size_t, int)> rec = [&](size_t k, int rem) {
      if (k == pt.size()) {
        if (rem != 0) return;
        DecGraph dg;
        dg.genus = t.genus;
        dg.vdec.resize(V);
        for (size_t e = 0; e < pt.size(); ++e)
          for (int c = 0; c < mult[e]; ++c) dg.edges.push_back({pt[e].first, pt[e].second, false});
        for (int v = 0; v < V; ++v)
          for (int c = 0; c < t.legs[v]; ++c) {
            dg.leg_vertex.push_back(v);
            dg.leaf.push_back(-1);
          }
        if (!dg.connected() || !dg.stable()) return;
        CanonClass cc = canonicalize(dg, rs, no_par);
        results[ti].push_back({cc.key, decode_graph(cc.key)});
        return;
      }
      for (int m = 0; m <= rem; ++m) {
        mult[k] = m;
        rec(k + 1, rem - m);
      }
      mult[k] = 0;
    };
    if (E >= 0) rec(0, E);
  };

  if (parallel)
    parallel_for(static_cast<int>(tasks.size()), run);
  else
    serial_for(static_cast<int>(tasks.size()), run);

  std::map<std::string, DecGraph> dedup;
  for (auto &r : results)
    for (auto &[k, gr] : r) dedup.emplace(k, gr);
  std::vector<DecGraph> out;
  for (auto &[k, gr] : dedup) out.push_back(gr);
  return out;
}

} // namespace

std::vector<DecGraph> enumerate_stable_graphs(int g, int n, int max_vertices) {
  return enumerate_impl(g, n, max_vertices, true);
}
std::vector<DecGraph> enumerate_stable_graphs_serial(int g, int n, int max_vertices) {
  return enumerate_impl(g, n, max_vertices, false);
}

// ---------------------------------------------------------------------------
// surgery

std::vector<VertexSplit> split_vertex(const DecGraph &g, int v) {
  std::vector<VertexSplit> out;
  const int ar = g.arity(v);
  const int gv = g.genus[v];
  // ordered splits: (gL, subset of local points to the left)
  for (int gL = 0; gL <= gv; ++gL) {
    const int gR = gv - gL;
    for (int mask = 0; mask < (1 << ar); ++mask) {
      int nl = __builtin_popcount(mask);
      int nr = ar - nl;
      if (2 * gL + nl + 1 <= 2 || 2 * gR + nr + 1 <= 2) continue; // stability
      VertexSplit vs;
      vs.gL = gL;
      vs.gR = gR;
      vs.side.resize(ar);
      vs.posL.assign(ar, -1);
      vs.posR.assign(ar, -1);
      for (int p = 0; p < ar; ++p) vs.side[p] = (mask >> p) & 1 ? 0 : 1;

      DecGraph ng;
      const int V = g.nv();
      ng.genus = g.genus;
      ng.genus[v] = gL;
      ng.genus.push_back(gR);
      ng.vdec.resize(V + 1); // caller installs decorations
      const int vL = v, vR = V;
      // legs: those at v move by side
      ng.leg_vertex = g.leg_vertex;
      ng.leaf = g.leaf;
      for (int l = 0; l < g.nlegs(); ++l)
        if (g.leg_vertex[l] == v && vs.side[g.leg_point(l)] == 1) ng.leg_vertex[l] = vR;
      // edges: new edge first, then the old ones with ends rerouted
      ng.edges.push_back({vL, vR, false});
      for (int e = 0; e < g.nedges(); ++e) {
        GEdge ne = g.edges[e];
        if (ne.v == v && vs.side[g.edge_end_point(e, 0)] == 1) ne.v = vR;
        if (ne.w == v && vs.side[g.edge_end_point(e, 1)] == 1) ne.w = vR;
        ng.edges.push_back(ne);
      }
      if (!ng.connected()) continue;
      // local point positions on each side: legs first (their relative
      // order among legs is preserved), then edge ends in new edge order
      // (new edge is first).  Compute by walking the new graph.
      auto count_legs = [&](int vv) {
        int c = 0;
        for (int lv : ng.leg_vertex)
          if (lv == vv) ++c;
        return c;
      };
      vs.newL = count_legs(vL); // first edge slot at vL (new edge is edge 0)
      vs.newR = count_legs(vR);
      // map old local points
      for (int l = 0; l < g.nlegs(); ++l) {
        if (g.leg_vertex[l] != v) continue;
        int oldpt = g.leg_point(l);
        int vv = vs.side[oldpt] == 0 ? vL : vR;
        int pos = 0;
        for (int m2 = 0; m2 < l; ++m2)
          if (ng.leg_vertex[m2] == vv) ++pos;
        (vs.side[oldpt] == 0 ? vs.posL : vs.posR)[oldpt] = pos;
      }
      for (int e = 0; e < g.nedges(); ++e) {
        for (int sideE = 0; sideE < 2; ++sideE) {
          int vv = sideE == 0 ? g.edges[e].v : g.edges[e].w;
          if (vv != v) continue;
          int oldpt = g.edge_end_point(e, sideE);
          int nvv = vs.side[oldpt] == 0 ? vL : vR;
          int npt = ng.edge_end_point(e + 1, sideE);
          (void)nvv;
          (vs.side[oldpt] == 0 ? vs.posL : vs.posR)[oldpt] = npt;
        }
      }
      vs.graph = ng;
      vs.left_vertex = vL;
      vs.right_vertex = vR;
      out.push_back(std::move(vs));
    }
  }
  return out;
}

DecGraph join_legs(const DecGraph &g, int i, int j,
                   std::vector<std::vector<int>> &point_map) {
  if (i == j) throw std::invalid_argument("join_legs: equal legs");
  DecGraph ng;
  ng.genus = g.genus;
  ng.vdec = g.vdec;
  const int vi = g.leg_vertex[i], vj = g.leg_vertex[j];
  for (int l = 0; l < g.nlegs(); ++l) {
    if (l == i || l == j) continue;
    ng.leg_vertex.push_back(g.leg_vertex[l]);
    ng.leaf.push_back(g.leaf[l]);
  }
  ng.edges.push_back({vi, vj, false});
  for (auto &e : g.edges) ng.edges.push_back(e);

  point_map.assign(g.nv(), {});
  for (int v = 0; v < g.nv(); ++v) {
    point_map[v].assign(g.arity(v), -1);
    for (int l = 0; l < g.nlegs(); ++l) {
      if (g.leg_vertex[l] != v || l == i || l == j) continue;
      int nl = l - (l > i ? 1 : 0) - (l > j ? 1 : 0);
      int pos = 0;
      for (int m2 = 0; m2 < nl; ++m2)
        if (ng.leg_vertex[m2] == v) ++pos;
      point_map[v][g.leg_point(l)] = pos;
    }
    for (int e = 0; e < g.nedges(); ++e)
      for (int side = 0; side < 2; ++side) {
        int vv = side == 0 ? g.edges[e].v : g.edges[e].w;
        if (vv != v) continue;
        point_map[v][g.edge_end_point(e, side)] = ng.edge_end_point(e + 1, side);
      }
  }
  // the consumed legs map to the new edge ends
  point_map[vi][g.leg_point(i)] = ng.edge_end_point(0, 0);
  point_map[vj][g.leg_point(j)] = ng.edge_end_point(0, 1);
  // remap decorations
  for (int v = 0; v < g.nv(); ++v) ng.vdec[v] = mono_remap(g.vdec[v], point_map[v]);
  return ng;
}

DecGraph graft(const DecGraph &a, int i, const DecGraph &b, int j,
               std::vector<std::vector<int>> &pmap_a,
               std::vector<std::vector<int>> &pmap_b) {
  DecGraph ng;
  const int Va = a.nv();
  ng.genus = a.genus;
  ng.genus.insert(ng.genus.end(), b.genus.begin(), b.genus.end());
  ng.vdec = a.vdec;
  ng.vdec.insert(ng.vdec.end(), b.vdec.begin(), b.vdec.end());
  for (int l = 0; l < a.nlegs(); ++l) {
    if (l == i) continue;
    ng.leg_vertex.push_back(a.leg_vertex[l]);
    ng.leaf.push_back(a.leaf[l]);
  }
  for (int l = 0; l < b.nlegs(); ++l) {
    if (l == j) continue;
    ng.leg_vertex.push_back(b.leg_vertex[l] + Va);
    ng.leaf.push_back(b.leaf[l]);
  }
  ng.edges.push_back({a.leg_vertex[i], b.leg_vertex[j] + Va, false});
  for (auto &e : a.edges) ng.edges.push_back(e);
  for (auto &e : b.edges) ng.edges.push_back({e.v + Va, e.w + Va, e.dashed});

  auto build_map = [&](const DecGraph &src, int voff, int legoff, int consumed,
                       int edgeoff, std::vector<std::vector<int>> &pm) {
    pm.assign(src.nv(), {});
    for (int v = 0; v < src.nv(); ++v) {
      pm[v].assign(src.arity(v), -1);
      for (int l = 0; l < src.nlegs(); ++l) {
        if (src.leg_vertex[l] != v || l == consumed) continue;
        int nl = legoff + l - (l > consumed ? 1 : 0);
        int pos = 0;
        for (int m2 = 0; m2 < nl; ++m2)
          if (ng.leg_vertex[m2] == v + voff) ++pos;
        pm[v][src.leg_point(l)] = pos;
      }
      for (int e = 0; e < src.nedges(); ++e)
        for (int side = 0; side < 2; ++side) {
          int vv = side == 0 ? src.edges[e].v : src.edges[e].w;
          if (vv != v) continue;
          pm[v][src.edge_end_point(e, side)] = ng.edge_end_point(e + edgeoff, side);
        }
    }
  };
  build_map(a, 0, 0, i, 1, pmap_a);
  build_map(b, Va, a.nlegs() - 1, j, 1 + a.nedges(), pmap_b);
  pmap_a[a.leg_vertex[i]][a.leg_point(i)] = ng.edge_end_point(0, 0);
  pmap_b[b.leg_vertex[j]][b.leg_point(j)] = ng.edge_end_point(0, 1);
  for (int v = 0; v < a.nv(); ++v) ng.vdec[v] = mono_remap(a.vdec[v], pmap_a[v]);
  for (int v = 0; v < b.nv(); ++v) ng.vdec[v + Va] = mono_remap(b.vdec[v], pmap_b[v]);
  return ng;
}

DecGraph contract_edge(const DecGraph &g, int e,
                       std::vector<std::vector<int>> &point_map) {
  const int v = g.edges[e].v, w = g.edges[e].w;
  if (v == w) throw std::invalid_argument("contract_edge: tadpole contraction rejected");
  DecGraph ng;
  // merged vertex keeps index min(v,w); vertices after max(v,w) shift down
  const int keep = std::min(v, w), gone = std::max(v, w);
  auto nvx = [&](int x) { return x == gone ? keep : (x > gone ? x - 1 : x); };
  ng.genus.resize(g.nv() - 1);
  for (int x = 0; x < g.nv(); ++x)
    if (x != gone) ng.genus[nvx(x)] = g.genus[x];
  ng.genus[keep] = g.genus[v] + g.genus[w];
  ng.vdec.resize(g.nv() - 1);
  for (int l = 0; l < g.nlegs(); ++l) {
    ng.leg_vertex.push_back(nvx(g.leg_vertex[l]));
    ng.leaf.push_back(g.leaf[l]);
  }
  for (int f = 0; f < g.nedges(); ++f) {
    if (f == e) continue;
    ng.edges.push_back({nvx(g.edges[f].v), nvx(g.edges[f].w), g.edges[f].dashed});
  }
  point_map.assign(g.nv(), {});
  for (int x = 0; x < g.nv(); ++x) {
    point_map[x].assign(g.arity(x), -1);
    for (int l = 0; l < g.nlegs(); ++l) {
      if (g.leg_vertex[l] != x) continue;
      int pos = 0;
      for (int m2 = 0; m2 < l; ++m2)
        if (ng.leg_vertex[m2] == nvx(x)) ++pos;
      point_map[x][g.leg_point(l)] = pos;
    }
    for (int f = 0; f < g.nedges(); ++f) {
      if (f == e) continue;
      for (int side = 0; side < 2; ++side) {
        int vv = side == 0 ? g.edges[f].v : g.edges[f].w;
        if (vv != x) continue;
        point_map[x][g.edge_end_point(f, side)] =
            ng.edge_end_point(f - (f > e ? 1 : 0), side);
      }
    }
  }
  // merged decoration: caller multiplies the remapped monomials; the
  // contracted ends map to -1 (they disappear)
  for (int x = 0; x < g.nv(); ++x) {
    if (x == v || x == w) continue;
    ng.vdec[nvx(x)] = mono_remap(g.vdec[x], point_map[x]);
  }
  return ng;
}

DecGraph drop_leg(const DecGraph &g, int i, std::vector<std::vector<int>> &point_map) {
  DecGraph ng;
  ng.genus = g.genus;
  ng.vdec = g.vdec;
  for (int l = 0; l < g.nlegs(); ++l) {
    if (l == i) continue;
    ng.leg_vertex.push_back(g.leg_vertex[l]);
    ng.leaf.push_back(g.leaf[l]);
  }
  ng.edges = g.edges;
  point_map.assign(g.nv(), {});
  for (int v = 0; v < g.nv(); ++v) {
    point_map[v].assign(g.arity(v), -1);
    for (int l = 0; l < g.nlegs(); ++l) {
      if (g.leg_vertex[l] != v || l == i) continue;
      int nl = l - (l > i ? 1 : 0);
      int pos = 0;
      for (int m2 = 0; m2 < nl; ++m2)
        if (ng.leg_vertex[m2] == v) ++pos;
      point_map[v][g.leg_point(l)] = pos;
    }
    for (int e = 0; e < g.nedges(); ++e)
      for (int side = 0; side < 2; ++side) {
        int vv = side == 0 ? g.edges[e].v : g.edges[e].w;
        if (vv != v) continue;
        point_map[v][g.edge_end_point(e, side)] = ng.edge_end_point(e, side);
      }
  }
  for (int v = 0; v < g.nv(); ++v) ng.vdec[v] = mono_remap(g.vdec[v], point_map[v]);
  return ng;
}

} // namespace taut
