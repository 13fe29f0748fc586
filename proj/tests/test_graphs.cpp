#include <doctest.h>

#include "taut/graphs.hpp"
#include "taut/symspace.hpp"

#include <algorithm>
#include <functional>
#include <set>

using namespace taut;

namespace {

DecGraph single_vertex(int g, int nlegs, int leaf = -1) {
  DecGraph gr;
  gr.genus = {g};
  gr.vdec = {TautMonomial{}};
  for (int i = 0; i < nlegs; ++i) {
    gr.leg_vertex.push_back(0);
    gr.leaf.push_back(leaf);
  }
  return gr;
}

DecGraph tetrahedron() {
  DecGraph g;
  g.genus = {0, 0, 0, 0};
  g.vdec.assign(4, TautMonomial{});
  for (int v = 0; v < 4; ++v)
    for (int w = v + 1; w < 4; ++w) g.edges.push_back({v, w, false});
  return g;
}

// brute-force stable graph enumeration used as the independent oracle:
// no canonicalizer, explicit isomorphism filtering by permutation search
bool bare_isomorphic(const DecGraph &a, const DecGraph &b) {
  if (a.nv() != b.nv() || a.nedges() != b.nedges() || a.nlegs() != b.nlegs()) return false;
  std::vector<int> perm(a.nv());
  for (int i = 0; i < a.nv(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end());
  do {
    bool ok = true;
    for (int v = 0; v < a.nv() && ok; ++v)
      if (a.genus[v] != b.genus[perm[v]]) ok = false;
    if (ok) {
      auto cnt = [](const DecGraph &g, std::function<std::pair<int, int>(int)> f) {
        std::multiset<std::pair<int, int>> s;
        for (int e = 0; e < g.nedges(); ++e) s.insert(f(e));
        return s;
      };
      auto ea = cnt(a, [&](int e) {
        int v = perm[a.edges[e].v], w = perm[a.edges[e].w];
        return std::make_pair(std::min(v, w), std::max(v, w));
      });
      auto eb = cnt(b, [&](int e) {
        int v = b.edges[e].v, w = b.edges[e].w;
        return std::make_pair(std::min(v, w), std::max(v, w));
      });
      if (ea != eb) ok = false;
      if (ok) {
        std::multiset<int> la, lb;
        for (int l = 0; l < a.nlegs(); ++l) la.insert(perm[a.leg_vertex[l]]);
        for (int l = 0; l < b.nlegs(); ++l) lb.insert(b.leg_vertex[l]);
        if (la != lb) ok = false;
      }
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

std::vector<DecGraph> oracle_enumerate(int g, int n, int maxv) {
  std::vector<DecGraph> out;
  for (int V = 1; V <= maxv; ++V) {
    // genus tuples
    std::vector<int> gt(V, 0);
    std::function<void(int, int)> grec = [&](int i, int rem) {
      if (i == V) {
        int b1 = rem;
        int E = b1 + V - 1;
        if (E < 0) return;
        std::vector<std::pair<int, int>> pt;
        for (int x = 0; x < V; ++x)
          for (int y = x; y < V; ++y) pt.push_back({x, y});
        std::vector<int> mult(pt.size(), 0);
        std::function<void(size_t, int)> erec = [&](size_t k, int rem2) {
          if (k == pt.size()) {
            if (rem2 != 0) return;
            std::vector<int> lc(V, 0);
            std::function<void(int, int)> lrec = [&](int i2, int rem3) {
              if (i2 == V - 1) {
                lc[i2] = rem3;
                DecGraph dg;
                dg.genus = gt;
                dg.vdec.assign(V, TautMonomial{});
                for (size_t e = 0; e < pt.size(); ++e)
                  for (int c = 0; c < mult[e]; ++c)
                    dg.edges.push_back({pt[e].first, pt[e].second, false});
                for (int v = 0; v < V; ++v)
                  for (int c = 0; c < lc[v]; ++c) {
                    dg.leg_vertex.push_back(v);
                    dg.leaf.push_back(-1);
                  }
                if (!dg.connected() || !dg.stable()) return;
                for (auto &h : out)
                  if (bare_isomorphic(dg, h)) return;
                out.push_back(dg);
                return;
              }
              for (int c = 0; c <= rem3; ++c) {
                lc[i2] = c;
                lrec(i2 + 1, rem3 - c);
              }
            };
            lrec(0, n);
            return;
          }
          for (int m2 = 0; m2 <= rem2; ++m2) {
            mult[k] = m2;
            erec(k + 1, rem2 - m2);
          }
          mult[k] = 0;
        };
        erec(0, E);
        return;
      }
      for (int gi = 0; gi <= rem; ++gi) {
        gt[i] = gi;
        grec(i + 1, rem - gi);
      }
    };
    grec(0, g);
  }
  return out;
}

} // namespace

TEST_CASE("total genus") {
  CHECK(tetrahedron().total_genus() == 3);
  CHECK(single_vertex(2, 0).total_genus() == 2);
  DecGraph two;
  two.genus = {0, 0};
  two.vdec.assign(2, TautMonomial{});
  two.edges.push_back({0, 1, false});
  for (int i = 0; i < 2; ++i) {
    two.leg_vertex.push_back(0);
    two.leaf.push_back(-1);
    two.leg_vertex.push_back(1);
    two.leaf.push_back(-1);
  }
  CHECK(two.total_genus() == 0);
  CHECK(two.stable());
}

TEST_CASE("canonicalize idempotent and sign conventions") {
  RuleSet rs;
  std::vector<uint8_t> lp;
  DecGraph t = tetrahedron();
  CanonClass c1 = canonicalize(t, rs, lp);
  REQUIRE(c1.sign != 0);
  DecGraph rep = decode_graph(c1.key);
  CanonClass c2 = canonicalize(rep, rs, lp);
  CHECK(c2.key == c1.key);
  CHECK(c2.sign == 1);

  // odd edge transposition flips the sign
  DecGraph t2 = t;
  std::swap(t2.edges[0], t2.edges[1]);
  CanonClass c3 = canonicalize(t2, rs, lp);
  CHECK(c3.key == c1.key);
  CHECK(c3.sign == -c1.sign);
}

TEST_CASE("parallel undecorated usual edges vanish") {
  RuleSet rs;
  std::vector<uint8_t> lp;
  DecGraph g;
  g.genus = {0, 0};
  g.vdec.assign(2, TautMonomial{});
  g.edges.push_back({0, 1, false});
  g.edges.push_back({0, 1, false});
  for (int i = 0; i < 2; ++i) {
    g.leg_vertex.push_back(0);
    g.leaf.push_back(-1);
    g.leg_vertex.push_back(1);
    g.leaf.push_back(-1);
  }
  CHECK(canonicalize(g, rs, lp).sign == 0);
  // dashed parallels survive
  DecGraph h = g;
  h.edges[1].dashed = true;
  CHECK(canonicalize(h, rs, lp).sign != 0);
}

TEST_CASE("automorphism orders") {
  RuleSet rs;
  std::vector<uint8_t> lp;
  CHECK(automorphism_order(tetrahedron(), rs, lp) == 24);

  DecGraph tad = single_vertex(0, 1);
  tad.edges.push_back({0, 0, false});
  CHECK(automorphism_order(tad, rs, lp) == 2); // tadpole flip

  DecGraph path;
  path.genus = {1, 2};
  path.vdec.assign(2, TautMonomial{});
  path.edges.push_back({0, 1, false});
  path.leg_vertex = {0, 1};
  path.leaf = {-1, -1};
  CHECK(automorphism_order(path, rs, lp) == 1);
}

TEST_CASE("odd equal decorations vanish") {
  RuleSet rs;
  SymVectorSpace A = pz_space(1); // b, a, d, c with b,c odd
  std::vector<uint8_t> lp(A.parity.begin(), A.parity.end());
  DecGraph g = single_vertex(0, 3, 0); // three b-legs
  CHECK(canonicalize(g, rs, lp).sign == 0);
  g.leaf = {0, 1, 2}; // b, a, d: fine
  CHECK(canonicalize(g, rs, lp).sign != 0);
}

TEST_CASE("enumeration matches the spec counts") {
  auto g03 = enumerate_stable_graphs(0, 3, 2);
  CHECK(g03.size() == 1);
  auto g11 = enumerate_stable_graphs(1, 1, 2);
  CHECK(g11.size() == 2);
  auto g04 = enumerate_stable_graphs(0, 4, 2);
  CHECK(g04.size() == 2);
}

TEST_CASE("enumeration agrees with the brute-force oracle") {
  for (int g = 0; g <= 2; ++g)
    for (int n = 0; n <= 6 - 2 * g; ++n) {
      if (2 * g + n <= 2) continue;
      auto fast = enumerate_stable_graphs(g, n, 4);
      auto slow = oracle_enumerate(g, n, 4);
      CHECK_MESSAGE(fast.size() == slow.size(), "g=", g, " n=", n, " fast=", fast.size(),
                    " slow=", slow.size());
    }
}

TEST_CASE("split_vertex counts") {
  // (0,5) vertex: splits into (0,3)+(0,4) leg distributions; ordered pairs
  // double the unordered count of 10
  DecGraph g = single_vertex(0, 5);
  auto splits = split_vertex(g, 0);
  CHECK(splits.size() == 20);
  // (1,1) vertex: no stable splits
  DecGraph h = single_vertex(1, 1);
  CHECK(split_vertex(h, 0).empty());
}

TEST_CASE("surgery bookkeeping") {
  // graft two (0,3) vertices: the 2-vertex (0,4) graph
  DecGraph a = single_vertex(0, 3), b = single_vertex(0, 3);
  std::vector<std::vector<int>> pa, pb;
  DecGraph g = graft(a, 0, b, 0, pa, pb);
  CHECK(g.nv() == 2);
  CHECK(g.nedges() == 1);
  CHECK(g.nlegs() == 4);
  CHECK(g.total_genus() == 0);
  CHECK(g.stable());
  // contract the edge back
  std::vector<std::vector<int>> pm;
  DecGraph c = contract_edge(g, 0, pm);
  CHECK(c.nv() == 1);
  CHECK(c.nlegs() == 4);
  CHECK(c.total_genus() == 0);

  // join two legs of a (0,4) vertex: the genus-1 tadpole graph
  DecGraph d = single_vertex(0, 4);
  std::vector<std::vector<int>> pm2;
  DecGraph e = join_legs(d, 1, 3, pm2);
  CHECK(e.nedges() == 1);
  CHECK(e.edges[0].v == e.edges[0].w);
  CHECK(e.total_genus() == 1);
  CHECK(e.nlegs() == 2);
}

TEST_CASE("psi data travels through canonicalization") {
  RuleSet rs;
  std::vector<uint8_t> lp;
  // two-vertex graph, psi on one edge end; permuting vertices must keep the
  // class well-defined
  DecGraph g;
  g.genus = {1, 2};
  g.vdec.assign(2, TautMonomial{});
  g.edges.push_back({0, 1, false});
  g.leg_vertex = {0, 1};
  g.leaf = {-1, -1};
  g.vdec[0].set_psi(g.edge_end_point(0, 0), 2);
  CanonClass c1 = canonicalize(g, rs, lp);
  // same graph written with vertices swapped
  DecGraph h;
  h.genus = {2, 1};
  h.vdec.assign(2, TautMonomial{});
  h.edges.push_back({1, 0, false});
  h.leg_vertex = {1, 0};
  h.leaf = {-1, -1};
  h.vdec[1].set_psi(h.edge_end_point(0, 0), 2);
  CanonClass c2 = canonicalize(h, rs, lp);
  CHECK(c1.key == c2.key);
  CHECK(c1.sign == c2.sign);
}
