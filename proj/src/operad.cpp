#include "taut/operad.hpp"
#include "taut/koszul.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace taut {

namespace {

uint8_t letter_parity(const ULetter &l, const SymVectorSpace &A) {
  switch (l.kind) {
  case ULetter::MZ_KAPPA:
  case ULetter::MZ_CH:
    return 0;
  case ULetter::RPSI:
    return static_cast<uint8_t>((A.parity[l.a1] + A.parity[l.a2]) & 1);
  case ULetter::TPSI:
    return A.parity[l.a1];
  }
  return 0;
}

uint8_t elabel_parity(const ELabel &l, const SymVectorSpace &A) {
  if (l.a1 < 0) return 0;
  return static_cast<uint8_t>((A.parity[l.a1] + A.parity[l.a2]) & 1);
}

uint8_t edge_letter_parity(const GEdge &e, const ELabel &l, const SymVectorSpace &A) {
  return static_cast<uint8_t>(((e.dashed ? 0 : 1) + elabel_parity(l, A)) & 1);
}

uint8_t word_parity(const std::vector<ULetter> &w, const SymVectorSpace &A) {
  uint8_t p = 0;
  for (auto &l : w) p ^= letter_parity(l, A);
  return p;
}

} // namespace

int op_parity(const OpGraph &g, const Ctx &ctx) {
  int p = 0;
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
    p ^= edge_letter_parity(g.edges[e], g.elabel[e], ctx.A);
  for (auto &w : g.vword) p ^= word_parity(w, ctx.A);
  return p;
}

// ---------------------------------------------------------------------------
// canonical form

namespace {

struct OpByte {
  std::string s;
  void u8(int x) { s += static_cast<char>(x & 0xff); }
};

void encode_label(OpByte &b, const ELabel &l) {
  b.u8(l.a1 + 1);
  b.u8(l.a2 + 1);
  b.u8(l.i);
  b.u8(l.j);
}

void encode_word(OpByte &b, const std::vector<ULetter> &w) {
  b.u8(static_cast<int>(w.size()));
  for (auto &l : w) {
    b.u8(static_cast<int>(l.kind));
    b.u8(l.i);
    b.u8(l.a1 + 1);
    b.u8(l.a2 + 1);
  }
}

std::string op_vertex_invariant(const OpGraph &g, const Ctx &ctx, int v) {
  OpByte b;
  int du = 0, dd = 0, tu = 0, td = 0;
  for (auto &e : g.edges) {
    if (e.v == v && e.w == v) (e.dashed ? td : tu)++;
    else if (e.v == v || e.w == v) (e.dashed ? dd : du)++;
  }
  b.u8(du);
  b.u8(dd);
  b.u8(tu);
  b.u8(td);
  encode_word(b, g.vword[v]);
  (void)ctx;
  return b.s;
}

struct OpCandidate {
  std::string bytes;
  int sign;
};

OpCandidate op_candidate(const OpGraph &g, const Ctx &ctx, const std::vector<int> &rho,
                         bool &zero) {
  const int V = g.nv, E = static_cast<int>(g.edges.size());
  struct EK {
    int dashed, a, b;
    ELabel lab;
    int orig;
    auto operator<=>(const EK &) const = default;
  };
  std::vector<EK> ek(E);
  for (int e = 0; e < E; ++e) {
    int a = rho[g.edges[e].v], b = rho[g.edges[e].w];
    ELabel l = g.elabel[e];
    int flip_sign = 1;
    bool tad = a == b;
    bool flip = a > b;
    if (tad) {
      // orient the label canonically; an equal flipped label with minus sign
      // kills the class
      ELabel fl{l.a2, l.a1, l.j, l.i};
      int eps = (l.a1 >= 0 && ctx.A.parity[l.a1] && ctx.A.parity[l.a2]) ? -1 : 1;
      if (fl < l) {
        l = fl;
        flip_sign = eps;
      } else if (fl == l && eps == -1) {
        zero = true;
      }
    } else if (flip) {
      ELabel fl{l.a2, l.a1, l.j, l.i};
      int eps = (l.a1 >= 0 && ctx.A.parity[l.a1] && ctx.A.parity[l.a2]) ? -1 : 1;
      std::swap(a, b);
      l = fl;
      flip_sign = eps;
    }
    ek[e] = {g.edges[e].dashed ? 1 : 0, a, b, l, e};
    if (flip_sign < 0) ek[e].orig = e; // sign handled below
    (void)flip_sign;
  }
  // per-edge flip signs
  int sign = 1;
  for (int e = 0; e < E; ++e) {
    int a = rho[g.edges[e].v], b = rho[g.edges[e].w];
    const ELabel &l = g.elabel[e];
    if (l.a1 < 0) continue;
    bool swapped = false;
    if (a == b) {
      ELabel fl{l.a2, l.a1, l.j, l.i};
      if (fl < l) swapped = true;
    } else if (a > b) {
      swapped = true;
    }
    if (swapped && ctx.A.parity[l.a1] && ctx.A.parity[l.a2]) sign = -sign;
  }
  // sort edges
  std::vector<int> order(E);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return ek[x] < ek[y]; });
  std::vector<uint8_t> epar(E);
  for (int e = 0; e < E; ++e) epar[e] = edge_letter_parity(g.edges[e], g.elabel[e], ctx.A);
  sign *= koszul_perm_sign(order, epar);
  // identical adjacent odd edges kill the class
  for (int i = 0; i + 1 < E; ++i) {
    const EK &p = ek[order[i]], &q = ek[order[i + 1]];
    if (std::tie(p.dashed, p.a, p.b, p.lab) == std::tie(q.dashed, q.a, q.b, q.lab)) {
      uint8_t par = epar[order[i]];
      if (par & 1) zero = true;
    }
  }
  // vertex word block permutation sign
  {
    std::vector<int> vperm(V);
    for (int v = 0; v < V; ++v) vperm[rho[v]] = v;
    std::vector<uint8_t> vpar(V);
    for (int v = 0; v < V; ++v) vpar[v] = word_parity(g.vword[v], ctx.A);
    sign *= koszul_perm_sign(vperm, vpar);
  }
  OpByte b;
  b.u8(V);
  for (int v = 0; v < V; ++v) {
    int old = -1;
    for (int x = 0; x < V; ++x)
      if (rho[x] == v) old = x;
    encode_word(b, g.vword[old]);
  }
  b.u8(E);
  for (int i = 0; i < E; ++i) {
    const EK &k = ek[order[i]];
    b.u8(k.a);
    b.u8(k.b);
    b.u8(k.dashed);
    encode_label(b, k.lab);
  }
  return {b.s, sign};
}

} // namespace

OpCanon canonical_op(const OpGraph &g, const Ctx &ctx) {
  const int V = g.nv;
  std::vector<std::string> inv(V);
  for (int v = 0; v < V; ++v) inv[v] = op_vertex_invariant(g, ctx, v);
  std::vector<int> order(V);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return inv[a] != inv[b] ? inv[a] < inv[b] : a < b; });
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < V; ++i) {
    if (i == 0 || inv[order[i]] != inv[order[i - 1]]) groups.push_back({});
    groups.back().push_back(order[i]);
  }
  bool zero = false;
  std::string best;
  int best_sign = 0;
  long stab = 0;
  std::vector<int> rho(V, -1);
  std::function<void(size_t, int)> rec = [&](size_t gi, int base) {
    if (gi == groups.size()) {
      bool zf = false;
      OpCandidate c = op_candidate(g, ctx, rho, zf);
      if (zf) zero = true;
      if (best.empty() || c.bytes < best) {
        best = c.bytes;
        best_sign = c.sign;
        stab = 1;
      } else if (c.bytes == best) {
        if (c.sign != best_sign) zero = true;
        ++stab;
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
  return {best, zero ? 0 : best_sign, stab};
}

OpGraph decode_op(const std::string &key) {
  OpGraph g;
  size_t p = 0;
  auto u8 = [&]() { return static_cast<int>(static_cast<unsigned char>(key.at(p++))); };
  g.nv = u8();
  g.vword.resize(g.nv);
  for (int v = 0; v < g.nv; ++v) {
    int len = u8();
    for (int i = 0; i < len; ++i) {
      ULetter l;
      l.kind = static_cast<ULetter::Kind>(u8());
      l.i = u8();
      l.a1 = u8() - 1;
      l.a2 = u8() - 1;
      g.vword[v].push_back(l);
    }
  }
  int E = u8();
  for (int e = 0; e < E; ++e) {
    int a = u8(), b = u8(), d = u8();
    ELabel l;
    l.a1 = u8() - 1;
    l.a2 = u8() - 1;
    l.i = u8();
    l.j = u8();
    g.edges.push_back({a, b, d != 0});
    g.elabel.push_back(l);
  }
  return g;
}

int op_vertices(const std::string &key) { return decode_op(key).nv; }
int op_edges(const std::string &key) { return static_cast<int>(decode_op(key).edges.size()); }

// ---------------------------------------------------------------------------
// element plumbing

bool OperadElement::is_zero() const {
  for (auto &[k, c] : terms)
    if (!c.zero()) return false;
  return true;
}

OperadElement &OperadElement::operator+=(const OperadElement &o) {
  for (auto &[k, c] : o.terms) {
    auto &slot = terms[k];
    slot += c;
    if (slot.zero()) terms.erase(k);
  }
  dropped += o.dropped;
  return *this;
}

OperadElement OperadElement::operator+(const OperadElement &o) const {
  OperadElement r = *this;
  r += o;
  return r;
}

OperadElement OperadElement::operator-(const OperadElement &o) const {
  OperadElement r = *this;
  r += o.scaled(Q(-1));
  return r;
}

OperadElement OperadElement::scaled(const Q &c) const {
  OperadElement r;
  if (c == 0) return r;
  for (auto &[k, v] : terms) r.terms[k] = v * c;
  r.dropped = dropped;
  return r;
}

OperadElement OperadElement::hbar_shifted(int k) const {
  OperadElement r;
  for (auto &[key, v] : terms) r.terms[key] = v.shifted(k);
  r.dropped = dropped;
  return r;
}

std::string OperadElement::str(const Ctx &ctx) const {
  std::ostringstream os;
  for (auto &[k, c] : terms) {
    OpGraph g = decode_op(k);
    os << "[" << c.str() << "] V=" << g.nv << " edges";
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
      auto &ed = g.edges[e];
      os << " " << ed.v << (ed.dashed ? "~" : "-") << ed.w;
      if (g.elabel[e].a1 >= 0)
        os << "(" << ctx.A.names[g.elabel[e].a1] << "," << ctx.A.names[g.elabel[e].a2] << ";"
           << g.elabel[e].i << "," << g.elabel[e].j << ")";
    }
    for (int v = 0; v < g.nv; ++v)
      if (!g.vword[v].empty()) {
        os << " w" << v << "[";
        for (auto &l : g.vword[v]) os << int(l.kind) << ":" << l.i << " ";
        os << "]";
      }
    os << "\n";
  }
  return os.str();
}

void OperadElement::add_term(const Ctx &ctx, const OpGraph &g, const CoeffPoly &c) {
  if (c.zero()) return;
  OpCanon cc = canonical_op(g, ctx);
  if (cc.sign == 0) return;
  CoeffPoly t = c * Q(cc.sign);
  dropped += t.truncate_hbar(ctx.trunc.hbar_max);
  if (t.zero()) return;
  auto &slot = terms[cc.key];
  slot += t;
  if (slot.zero()) terms.erase(cc.key);
}

// ---------------------------------------------------------------------------
// generators

OperadElement op_single(const Ctx &ctx, const OpGraph &g, const Q &c) {
  OperadElement e;
  e.add_term(ctx, g, CoeffPoly(c));
  return e;
}

OperadElement op_edge(const Ctx &ctx) {
  OpGraph g;
  g.nv = 2;
  g.vword.resize(2);
  g.edges.push_back({0, 1, false});
  g.elabel.push_back({});
  return op_single(ctx, g, 1);
}

OperadElement op_tadpole(const Ctx &ctx) {
  OpGraph g;
  g.nv = 1;
  g.vword.resize(1);
  g.edges.push_back({0, 0, false});
  g.elabel.push_back({});
  return op_single(ctx, g, 1);
}

OperadElement op_sigma3(const Ctx &ctx) {
  OpGraph g;
  g.nv = 4;
  g.vword.resize(4);
  for (int v = 0; v < 4; ++v)
    for (int w = v + 1; w < 4; ++w) {
      g.edges.push_back({v, w, false});
      g.elabel.push_back({});
    }
  return op_single(ctx, g, 1);
}

// ---------------------------------------------------------------------------
// pre-Lie structure

namespace {

long autv_of(const Ctx &ctx, const OpGraph &g) {
  return canonical_op(g, ctx).autv;
}

// all maps from the edge-ends at vertex v of x into the vertices of y
void insertions(const Ctx &ctx, const OpGraph &x, int v, const OpGraph &y,
                const std::function<void(const OpGraph &)> &emit) {
  // collect ends at v: (edge index, side)
  std::vector<std::pair<int, int>> ends;
  const int Ex = static_cast<int>(x.edges.size());
  for (int e = 0; e < Ex; ++e) {
    if (x.edges[e].v == v) ends.push_back({e, 0});
    if (x.edges[e].w == v) ends.push_back({e, 1});
  }
  const int k = static_cast<int>(ends.size());
  std::vector<int> phi(k, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == k) {
      OpGraph out;
      out.nv = x.nv - 1 + y.nv;
      // new indices: x-vertices before v keep, y block at [v, v+y.nv),
      // x-vertices after v shift by y.nv - 1
      auto nx = [&](int u) { return u < v ? u : (u == v ? -1 : u + y.nv - 1); };
      out.vword.resize(out.nv);
      for (int u = 0; u < x.nv; ++u)
        if (u != v) out.vword[nx(u)] = x.vword[u];
      for (int u = 0; u < y.nv; ++u) out.vword[v + u] = y.vword[u];
      // x edges (rerouted), then y edges
      for (int e = 0; e < Ex; ++e) {
        GEdge ne = x.edges[e];
        int a = ne.v == v ? -1 : nx(ne.v);
        int b = ne.w == v ? -1 : nx(ne.w);
        ne.v = a;
        ne.w = b;
        out.edges.push_back(ne);
        out.elabel.push_back(x.elabel[e]);
      }
      for (int i2 = 0; i2 < k; ++i2) {
        auto [e, side] = ends[i2];
        if (side == 0)
          out.edges[e].v = v + phi[i2];
        else
          out.edges[e].w = v + phi[i2];
      }
      for (int e = 0; e < static_cast<int>(y.edges.size()); ++e) {
        GEdge ne = y.edges[e];
        ne.v += v;
        ne.w += v;
        out.edges.push_back(ne);
        out.elabel.push_back(y.elabel[e]);
      }
      emit(out);
      return;
    }
    for (int t = 0; t < y.nv; ++t) {
      phi[i] = t;
      rec(i + 1);
    }
  };
  rec(0);
  (void)ctx;
}

// the rewrite X o_1 Gamma -> (-1)^{|X||Gamma|} sum_i Gamma o_i X + rho_X(Gamma):
// pushes a unary letter below a graph
void push_letter_down(const Ctx &ctx, const ULetter &X, const OpGraph &g, const CoeffPoly &c,
                      std::vector<std::pair<OpGraph, CoeffPoly>> &out) {
  int sx = (letter_parity(X, ctx.A) && (op_parity(g, ctx) & 1)) ? -1 : 1;
  for (int v = 0; v < g.nv; ++v) {
    OpGraph h = g;
    h.vword[v].insert(h.vword[v].begin(), X);
    // Koszul: X crosses the edges and the earlier vertex words
    int cross = 0;
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
      cross += edge_letter_parity(g.edges[e], g.elabel[e], ctx.A);
    for (int u = 0; u < v; ++u) cross += word_parity(g.vword[u], ctx.A);
    int s = (letter_parity(X, ctx.A) && (cross & 1)) ? -1 : 1;
    out.push_back({h, c * Q(sx * s)});
  }
  // derivation part: R acts on every edge label
  if (X.kind == ULetter::RPSI) {
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
      const ELabel &l = g.elabel[e];
      // R . M = -R(psi_1) o M - (-1)^{|M||R|} M o R^{(12)}(psi_2)
      // term 1: <a2_R, a1_M> via pairing contraction at the first slot
      auto mk = [&](int na1, int na2, int ni, int nj, const Q &q) {
        if (q == 0) return;
        OpGraph h = g;
        h.elabel[e] = {na1, na2, ni, nj};
        int cross = 0;
        for (int e2 = 0; e2 < e; ++e2)
          cross += edge_letter_parity(g.edges[e2], g.elabel[e2], ctx.A);
        int s = (letter_parity(X, ctx.A) && (cross & 1)) ? -1 : 1;
        out.push_back({h, c * (q * sx * s * -1)});
      };
      if (l.a1 < 0) {
        // standard label I: R(psi_1) o I = (a1 (x) a2) psi_1^i-type
        mk(X.a1, X.a2, X.i, 0, Q(1));
        int eps = (ctx.A.parity[X.a1] && ctx.A.parity[X.a2]) ? -1 : 1;
        int mr = (op_parity(g, ctx) == 0) ? 1 : 1;
        (void)mr;
        mk(X.a2, X.a1, 0, X.i, Q(eps));
      } else {
        // contract: -R(psi1) o_2^1 M: <a2_X, a1_M> replaces slot 1
        Q q1 = ctx.A.pairing(X.a2, l.a1);
        if (q1 != 0) mk(X.a1, l.a2, l.i + X.i, l.j, q1);
        Q q2 = ctx.A.pairing(l.a2, X.a1);
        if (q2 != 0) {
          int meps = (letter_parity(X, ctx.A) && elabel_parity(l, ctx.A)) ? -1 : 1;
          mk(l.a1, X.a2, l.i, l.j + X.i, q2 * meps);
        }
      }
    }
  }
}

} // namespace

OperadElement prelie_star(const Ctx &ctx, const OperadElement &x, const OperadElement &y,
                          int vertex_cap) {
  OperadElement out;
  for (auto &[kx, cx] : x.terms) {
    OpGraph gx = decode_op(kx);
    for (auto &[ky, cy] : y.terms) {
      OpGraph gy = decode_op(ky);
      if (gx.nv - 1 + gy.nv > vertex_cap) {
        ++out.dropped;
        continue;
      }
      long ax = autv_of(ctx, gx), ay = autv_of(ctx, gy);
      CoeffPoly base = cx * cy;
      for (int v = 0; v < gx.nv; ++v) {
        // the word at the insertion vertex is pushed down through gy
        OpGraph gx2 = gx;
        std::vector<ULetter> word = gx2.vword[v];
        gx2.vword[v].clear();
        // Koszul for removing the word from its slot and applying it on top
        // of gy: it crosses the later x-words and all x-edges after... the
        // word acts directly above the inserted block; crossings: none (the
        // block sits exactly where the word was)
        std::vector<std::pair<OpGraph, CoeffPoly>> blocks = {{gy, CoeffPoly(Q(1))}};
        for (auto it = word.rbegin(); it != word.rend(); ++it) {
          std::vector<std::pair<OpGraph, CoeffPoly>> next;
          for (auto &[bg, bc] : blocks) push_letter_down(ctx, *it, bg, bc, next);
          blocks = std::move(next);
        }
        for (auto &[bg, bc] : blocks) {
          insertions(ctx, gx2, v, bg, [&](const OpGraph &og) {
            long ao = canonical_op(og, ctx).autv;
            out.add_term(ctx, og, base * bc * (Q(ao) / Q(ax * ay)));
          });
        }
      }
    }
  }
  return out;
}

int element_parity(const Ctx &ctx, const OperadElement &x) {
  int p = -1;
  for (auto &[k, c] : x.terms) {
    int q = op_parity(decode_op(k), ctx);
    if (p < 0) p = q;
    if (p != q) throw std::runtime_error("OperadElement: mixed parity");
  }
  return p < 0 ? 0 : p;
}

OperadElement op_lie(const Ctx &ctx, const OperadElement &x, const OperadElement &y,
                     int vertex_cap) {
  OperadElement a = prelie_star(ctx, x, y, vertex_cap);
  OperadElement b = prelie_star(ctx, y, x, vertex_cap);
  int px = element_parity(ctx, x), py = element_parity(ctx, y);
  int sign = (px && py) ? 1 : -1; // -(−1)^{|x||y|}
  return a + b.scaled(Q(sign));
}

OperadElement twisted_diff(const Ctx &ctx, const OperadElement &x, Flavor f, int vertex_cap) {
  OperadElement out;
  // d_E for tautological flavors
  if (f == Flavor::TautOmega || f == Flavor::TautTheta) {
    for (auto &[k, c] : x.terms) {
      OpGraph g = decode_op(k);
      for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        if (!g.edges[e].dashed) continue;
        int cross = 0;
        for (int e2 = 0; e2 < e; ++e2)
          cross += edge_letter_parity(g.edges[e2], g.elabel[e2], ctx.A);
        int s = (cross & 1) ? -1 : 1;
        for (int side = 0; side < 2; ++side) {
          OpGraph h = g;
          h.edges[e].dashed = false;
          if (side == 0)
            h.elabel[e].i += 1;
          else
            h.elabel[e].j += 1;
          out.add_term(ctx, h, c * Q(s));
        }
      }
    }
  }
  OperadElement gen = op_edge(ctx);
  switch (f) {
  case Flavor::CGraTheta:
  case Flavor::TautTheta:
    gen += op_tadpole(ctx).hbar_shifted(1);
    break;
  case Flavor::CGraOmega:
  case Flavor::TautOmega:
    gen += op_tadpole(ctx);
    break;
  }
  out += op_lie(ctx, gen, x, vertex_cap);
  return out;
}

namespace {

// word coefficients of log(e^x e^y) in the free associative algebra on two
// letters, up to the requested degree; a word is a bit string (0 = x, 1 = y)
std::map<std::vector<int>, Q> assoc_bch_words(int order) {
  using Word = std::vector<int>;
  std::map<Word, Q> S;
  for (int pdeg = 0; pdeg <= order; ++pdeg)
    for (int qdeg = 0; qdeg <= order - pdeg; ++qdeg) {
      if (pdeg + qdeg == 0) continue;
      Word w;
      for (int i = 0; i < pdeg; ++i) w.push_back(0);
      for (int i = 0; i < qdeg; ++i) w.push_back(1);
      S[w] += Q(1) / (factorial(pdeg) * factorial(qdeg));
    }
  std::map<Word, Q> out, power = S;
  int sign = 1;
  for (int k = 1; k <= order; ++k) {
    for (auto &[w, c] : power)
      if (static_cast<int>(w.size()) <= order) out[w] += Q(sign) * c / Q(k);
    std::map<Word, Q> next;
    for (auto &[w1, c1] : power)
      for (auto &[w2, c2] : S) {
        if (static_cast<int>(w1.size() + w2.size()) > order) continue;
        Word w = w1;
        w.insert(w.end(), w2.begin(), w2.end());
        next[w] += c1 * c2;
      }
    power = std::move(next);
    sign = -sign;
  }
  for (auto it = out.begin(); it != out.end();)
    it = (it->second == 0) ? out.erase(it) : std::next(it);
  return out;
}

} // namespace

OperadElement bch(const Ctx &ctx, const OperadElement &x, const OperadElement &y, int order,
                  int vertex_cap) {
  // Dynkin projection: a Lie series equals sum_w (c_w / |w|) [w1,[w2,...]]
  auto words = assoc_bch_words(order);
  OperadElement r;
  for (auto &[w, c] : words) {
    const int d = static_cast<int>(w.size());
    if (d == 1) {
      r += ((w[0] == 0) ? x : y).scaled(c);
      continue;
    }
    OperadElement nest = (w[d - 1] == 0) ? x : y;
    for (int i = d - 2; i >= 0 && !nest.is_zero(); --i)
      nest = op_lie(ctx, (w[i] == 0) ? x : y, nest, vertex_cap);
    if (!nest.is_zero()) r += nest.scaled(c / Q(d));
  }
  return r;
}

IsotopyData prelie_exp(const Ctx &ctx, const OperadElement &x, int vertex_cap) {
  IsotopyData out;
  OperadElement power = x; // left-iterated star powers
  Q fact = 1;
  int m = 1;
  out.series += x;
  while (true) {
    ++m;
    fact *= m;
    power = prelie_star(ctx, power, x, vertex_cap);
    if (power.is_zero()) break;
    out.series += power.scaled(Q(1) / fact);
    if (m > vertex_cap + 2) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// action on the convolution algebra

namespace {

struct ActState {
  DecGraph g;
  std::vector<std::vector<int>> legs;        // per block: current leg indices
  std::vector<std::pair<int, int>> vrange;   // per block: [first vertex, count)
  CoeffPoly c;
};

std::vector<uint8_t> act_word(const Ctx &ctx, const DecGraph &g) {
  std::vector<uint8_t> par;
  for (auto &e : g.edges) par.push_back(e.dashed ? 0 : 1);
  for (auto &m : g.vdec) par.push_back(monomial_parity(m, ctx.rules));
  for (int l = 0; l < g.nlegs(); ++l)
    par.push_back(g.leaf[l] >= 0 ? ctx.A.parity[g.leaf[l]] : 0);
  return par;
}

int act_extract_two(const std::vector<uint8_t> &par, int i, int j) {
  int s = 1;
  if (par[i]) {
    int c = 0;
    for (int k = 0; k < i; ++k) c += par[k];
    if (c & 1) s = -s;
  }
  if (par[j]) {
    int c = 0;
    for (int k = 0; k < j; ++k)
      if (k != i) c += par[k];
    if (c & 1) s = -s;
  }
  return s;
}

void act_remove_legs(ActState &st, int u, int v) {
  for (auto &bl : st.legs) {
    std::vector<int> nl;
    for (int l : bl) {
      if (l == u || l == v) continue;
      nl.push_back(l - (l > u ? 1 : 0) - (l > v ? 1 : 0));
    }
    bl = std::move(nl);
  }
}

void act_remove_leg(ActState &st, int u) {
  for (auto &bl : st.legs) {
    std::vector<int> nl;
    for (int l : bl) {
      if (l == u) continue;
      nl.push_back(l - (l > u ? 1 : 0));
    }
    bl = std::move(nl);
  }
}

// join legs u, u' of the state graph by an edge of the given style carrying
// end psi powers pi, pj
DecGraph act_join(const Ctx &ctx, const DecGraph &g, int u, int v, bool dashed, int pi,
                  int pj) {
  std::vector<std::vector<int>> pm;
  DecGraph h = join_legs(g, u, v, pm);
  if (dashed) h.edges[0].dashed = true;
  if (pi) {
    int vv = h.edges[0].v;
    int pt = h.edge_end_point(0, 0);
    h.vdec[vv].set_psi(pt, h.vdec[vv].psi_at(pt) + pi);
  }
  if (pj) {
    int vv = h.edges[0].w;
    int pt = h.edge_end_point(0, 1);
    h.vdec[vv].set_psi(pt, h.vdec[vv].psi_at(pt) + pj);
  }
  (void)ctx;
  return h;
}

void apply_uletter(const Ctx &ctx, const ULetter &X, int b, const ActState &st,
                   std::vector<ActState> &out) {
  const DecGraph &g = st.g;
  auto par = act_word(ctx, g);
  const int E = g.nedges(), V = g.nv();
  switch (X.kind) {
  case ULetter::MZ_KAPPA:
  case ULetter::MZ_CH: {
    auto [v0, cnt] = st.vrange[b];
    for (int v = v0; v < v0 + cnt; ++v) {
      ActState ns = st;
      TautMonomial m;
      if (X.kind == ULetter::MZ_KAPPA)
        m.kappa = {static_cast<uint16_t>(X.i)};
      else
        m.ch = {static_cast<uint8_t>(X.i)};
      ns.g.vdec[v] = mono_mul(ns.g.vdec[v], m);
      out.push_back(std::move(ns));
    }
    break;
  }
  case ULetter::RPSI: {
    const int lp = static_cast<int>((ctx.A.parity[X.a1] + ctx.A.parity[X.a2]) & 1);
    for (int u : st.legs[b]) {
      if (g.leaf[u] < 0) continue;
      Q q = ctx.A.pairing(g.leaf[u], X.a1);
      if (q == 0) continue;
      int travel = 0;
      for (int k = 0; k < E + V + u; ++k) travel += par[k];
      int sign = (lp && (travel & 1)) ? -1 : 1;
      ActState ns = st;
      ns.g.leaf[u] = X.a2;
      int vv = g.leg_vertex[u];
      int pt = g.leg_point(u);
      ns.g.vdec[vv].set_psi(pt, ns.g.vdec[vv].psi_at(pt) + X.i);
      ns.c = ns.c * (q * sign);
      out.push_back(std::move(ns));
    }
    break;
  }
  case ULetter::TPSI: {
    const int nb = static_cast<int>(st.legs[b].size());
    if (nb == 0) break;
    const int lp = ctx.A.parity[X.a1];
    for (int u : st.legs[b]) {
      if (g.leaf[u] < 0) continue;
      Q q = ctx.A.pairing(g.leaf[u], X.a1);
      if (q == 0) continue;
      int travel = 0;
      for (int k = 0; k < E + V + u; ++k) travel += par[k];
      int sign = (lp && (travel & 1)) ? -1 : 1;
      int vv = g.leg_vertex[u];
      int pt = g.leg_point(u);
      TautMonomial m = g.vdec[vv];
      m.set_psi(pt, m.psi_at(pt) + X.i);
      std::vector<RuleTerm> terms;
      try {
        terms = push_forget(m, ctx.rules, g.genus[vv], g.arity(vv), pt);
      } catch (const NoRule &) {
        throw;
      }
      for (auto &t : terms) {
        ActState ns = st;
        ns.g.vdec[vv] = TautMonomial{};
        std::vector<std::vector<int>> pm;
        ns.g = drop_leg(ns.g, u, pm);
        ns.g.vdec[vv] = t.mono;
        act_remove_leg(ns, u);
        ns.c = ns.c * (q * sign * t.coeff / Q(nb));
        ns.c = ns.c.shifted(t.hshift);
        out.push_back(std::move(ns));
      }
    }
    break;
  }
  }
}

void apply_gedge(const Ctx &ctx, const OpGraph &G, int e, const ActState &st,
                 std::vector<ActState> &out) {
  const GEdge &ge = G.edges[e];
  const ELabel &lab = G.elabel[e];
  const DecGraph &g = st.g;
  auto par = act_word(ctx, g);
  const int E = g.nedges(), V = g.nv();
  auto value = [&](int u, int v) -> Q {
    if (lab.a1 < 0) return ctx.A.pairing(g.leaf[u], g.leaf[v]);
    return ctx.A.pairing(g.leaf[u], lab.a1) * ctx.A.pairing(lab.a2, g.leaf[v]);
  };
  auto emit = [&](int u, int v, const Q &norm) {
    if (g.leaf[u] < 0 || g.leaf[v] < 0) return;
    Q q = value(u, v);
    if (q == 0) return;
    int sign = act_extract_two(par, E + V + u, E + V + v);
    if (!ge.dashed && ctx.A.parity[g.leaf[u]]) sign = -sign;
    ActState ns = st;
    ns.g = act_join(ctx, g, u, v, ge.dashed, lab.i, lab.j);
    act_remove_legs(ns, u, v);
    ns.c = ns.c * (q * sign * norm);
    out.push_back(std::move(ns));
  };
  if (ge.v == ge.w) {
    // loop: ordered pairs within the block, factor 1/2
    auto &bl = st.legs[ge.v];
    for (int u : bl)
      for (int v : bl) {
        if (u == v) continue;
        emit(u, v, Q(1, 2));
      }
  } else {
    const int na = static_cast<int>(st.legs[ge.v].size());
    const int nb = static_cast<int>(st.legs[ge.w].size());
    if (na == 0 || nb == 0) return;
    Q norm = ctx.norms.bracket_mode == 0 ? Q(1) / Q(na * nb) : Q(1);
    for (int u : st.legs[ge.v])
      for (int v : st.legs[ge.w]) emit(u, v, norm);
  }
}

} // namespace

ConvElement act_on_gA(const Ctx &ctx, const OperadElement &lambda, const ConvElement &alpha,
                      bool quantum) {
  (void)quantum;
  ConvElement out = alpha; // identity component of the exponential
  IsotopyData E = prelie_exp(ctx, lambda, ctx.trunc.vertex_max + 4);

  std::vector<std::pair<GN, std::string>> pool;
  std::vector<int> pool_w;
  for (auto &[gn, m] : alpha.comp)
    for (auto &[k, c] : m) {
      pool.push_back({gn, k});
      pool_w.push_back(gn.n + 2 * gn.g - 2);
    }
  if (pool.empty()) return out;

  for (auto &[key, coeff] : E.series.terms) {
    OpGraph G = decode_op(key);
    long autv = canonical_op(G, ctx).autv;
    const int n = G.nv;
    int tletters = 0;
    for (auto &w : G.vword)
      for (auto &l : w)
        if (l.kind == ULetter::TPSI) ++tletters;

    std::vector<int> choice(n, 0);
    std::function<void(int, int)> rec = [&](int slot, int wsum) {
      if (wsum > ctx.trunc.filt_max + tletters) return;
      if (slot == n) {
        // disjoint union of the chosen classes
        ActState st;
        st.c = coeff * (Q(1) / Q(autv));
        st.legs.resize(n);
        st.vrange.resize(n);
        for (int b = 0; b < n; ++b) {
          auto &[gn, k] = pool[choice[b]];
          DecGraph rep = decode_graph(k);
          st.c = st.c * alpha.comp.at(gn).at(k);
          st.c = st.c * orbit_of(ctx, rep);
          int voff = st.g.nv();
          st.vrange[b] = {voff, rep.nv()};
          for (int v = 0; v < rep.nv(); ++v) {
            st.g.genus.push_back(rep.genus[v]);
            st.g.vdec.push_back(rep.vdec[v]);
          }
          for (auto &ed : rep.edges)
            st.g.edges.push_back({ed.v + voff, ed.w + voff, ed.dashed});
          for (int l = 0; l < rep.nlegs(); ++l) {
            st.legs[b].push_back(st.g.nlegs());
            st.g.leg_vertex.push_back(rep.leg_vertex[l] + voff);
            st.g.leaf.push_back(rep.leaf[l]);
          }
        }
        if (st.c.zero()) return;

        std::vector<ActState> states = {std::move(st)};
        for (int b = 0; b < n && !states.empty(); ++b) {
          const auto &word = G.vword[b];
          for (auto it = word.rbegin(); it != word.rend() && !states.empty(); ++it) {
            std::vector<ActState> next;
            for (auto &s : states) apply_uletter(ctx, *it, b, s, next);
            states = std::move(next);
          }
        }
        for (int e = 0; e < static_cast<int>(G.edges.size()) && !states.empty(); ++e) {
          std::vector<ActState> next;
          for (auto &s : states) apply_gedge(ctx, G, e, s, next);
          states = std::move(next);
        }
        for (auto &s : states) {
          Q multi = 1;
          if (ctx.norms.bracket_mode == 0) {
            int total = 0;
            for (auto &bl : s.legs) total += static_cast<int>(bl.size());
            int rem = total;
            for (auto &bl : s.legs) {
              multi *= binomial(rem, static_cast<int>(bl.size()));
              rem -= static_cast<int>(bl.size());
            }
          }
          out.add_term(ctx, s.g, s.c * multi);
        }
        return;
      }
      for (size_t p2 = 0; p2 < pool.size(); ++p2) {
        choice[slot] = static_cast<int>(p2);
        rec(slot + 1, wsum + pool_w[p2]);
      }
    };
    rec(0, 0);
  }
  return out;
}

} // namespace taut
