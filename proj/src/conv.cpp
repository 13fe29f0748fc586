#include "taut/conv.hpp"
#include "taut/koszul.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

namespace taut {

namespace {

std::vector<uint8_t> leaf_parities(const Ctx &ctx) {
  std::vector<uint8_t> p(ctx.A.dim);
  for (int i = 0; i < ctx.A.dim; ++i) p[i] = ctx.A.parity[i];
  return p;
}

// Koszul word of a term: [edges][vertex decorations][leaf decorations].
// Returns parities and the offsets of the three blocks.
struct Word {
  std::vector<uint8_t> par;
  int off_vdec = 0, off_legs = 0;
};

Word word_of(const Ctx &ctx, const DecGraph &g) {
  Word w;
  for (auto &e : g.edges) w.par.push_back(e.dashed ? 0 : 1);
  w.off_vdec = static_cast<int>(w.par.size());
  for (auto &m : g.vdec) w.par.push_back(monomial_parity(m, ctx.rules));
  w.off_legs = static_cast<int>(w.par.size());
  for (int l = 0; l < g.nlegs(); ++l)
    w.par.push_back(g.leaf[l] >= 0 ? ctx.A.parity[g.leaf[l]] : 0);
  return w;
}

// sign of extracting letter i to the front and letter j right after it
int extract_two_front(const std::vector<uint8_t> &par, int i, int j) {
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

int sum_par(const std::vector<uint8_t> &par, int lo, int hi) {
  int c = 0;
  for (int k = lo; k < hi; ++k) c += par[k];
  return c;
}

} // namespace

bool ConvElement::is_zero() const {
  for (auto &[gn, m] : comp)
    for (auto &[k, c] : m)
      if (!c.zero()) return false;
  return true;
}

ConvElement &ConvElement::operator+=(const ConvElement &o) {
  for (auto &[gn, m] : o.comp)
    for (auto &[k, c] : m) {
      auto &slot = comp[gn][k];
      slot += c;
      if (slot.zero()) comp[gn].erase(k);
    }
  for (auto it = comp.begin(); it != comp.end();)
    it = it->second.empty() ? comp.erase(it) : std::next(it);
  dropped += o.dropped;
  return *this;
}

ConvElement ConvElement::operator+(const ConvElement &o) const {
  ConvElement r = *this;
  r += o;
  return r;
}

ConvElement ConvElement::operator-(const ConvElement &o) const {
  ConvElement r = *this;
  r += o.scaled(Q(-1));
  return r;
}

ConvElement ConvElement::scaled(const Q &c) const {
  ConvElement r;
  if (c == 0) return r;
  for (auto &[gn, m] : comp)
    for (auto &[k, v] : m) r.comp[gn][k] = v * c;
  r.dropped = dropped;
  return r;
}

ConvElement ConvElement::hbar_shifted(int k) const {
  ConvElement r;
  for (auto &[gn, m] : comp)
    for (auto &[key, v] : m) r.comp[gn][key] = v.shifted(k);
  r.dropped = dropped;
  return r;
}

long ConvElement::term_count() const {
  long n = 0;
  for (auto &[gn, m] : comp) n += static_cast<long>(m.size());
  return n;
}

std::string ConvElement::str(const Ctx &ctx) const {
  std::ostringstream os;
  for (auto &[gn, m] : comp) {
    os << "(g=" << gn.g << ",n=" << gn.n << "):\n";
    for (auto &[k, c] : m) {
      DecGraph gr = decode_graph(k);
      os << "  [" << c.str() << "] V=" << gr.nv() << " E=" << gr.nedges() << " {";
      for (int v = 0; v < gr.nv(); ++v) {
        os << (v ? " " : "") << "g" << gr.genus[v] << ":" << gr.vdec[v].str(ctx.rules);
      }
      os << "} edges";
      for (auto &e : gr.edges) os << " " << e.v << (e.dashed ? "~" : "-") << e.w;
      os << " legs";
      for (int l = 0; l < gr.nlegs(); ++l)
        os << " " << (gr.leaf[l] >= 0 ? ctx.A.names[gr.leaf[l]] : "*") << "@" << gr.leg_vertex[l];
      os << "\n";
    }
  }
  return os.str();
}

void ConvElement::add_term(const Ctx &ctx, const DecGraph &g, const CoeffPoly &c) {
  if (c.zero()) return;
  GN gn{g.total_genus(), g.nlegs()};
  if (gn.n + 2 * gn.g - 2 > ctx.trunc.filt_max) {
    ++dropped;
    return;
  }
  if (g.nv() > ctx.trunc.vertex_max + 2) {
    ++dropped;
    return;
  }
  CanonClass cc = canonicalize(g, ctx.rules, leaf_parities(ctx));
  if (cc.sign == 0) return;
  CoeffPoly t = c * (Q(cc.sign) / cc.orbit);
  dropped += t.truncate_hbar(ctx.trunc.hbar_max);
  if (t.zero()) return;
  auto &slot = comp[gn][cc.key];
  slot += t;
  if (slot.zero()) comp[gn].erase(cc.key);
  if (comp[gn].empty()) comp.erase(gn);
}

Q orbit_of(const Ctx &ctx, const DecGraph &rep) {
  CanonClass cc = canonicalize(rep, ctx.rules, leaf_parities(ctx));
  return cc.orbit;
}

int class_parity(const Ctx &ctx, const DecGraph &rep) {
  Word w = word_of(ctx, rep);
  return sum_par(w.par, 0, static_cast<int>(w.par.size())) & 1;
}

// ---------------------------------------------------------------------------

ConvElement delta_op(const Ctx &ctx, const ConvElement &x) {
  ConvElement out;
  for (auto &[gn, m] : x.comp) {
    for (auto &[key, c] : m) {
      DecGraph rep = decode_graph(key);
      Q orb_in = orbit_of(ctx, rep);
      Word w = word_of(ctx, rep);
      const int L = rep.nlegs();
      Q norm = 1;
      if (ctx.norms.delta_mode == 1 && L >= 2) norm = Q(1) / binomial(L, 2);
      for (int u = 0; u < L; ++u) {
        for (int v = u + 1; v < L; ++v) {
          if (rep.leaf[u] < 0 || rep.leaf[v] < 0) continue;
          Q q = ctx.A.pairing(rep.leaf[u], rep.leaf[v]);
          if (q == 0) continue;
          int sign = extract_two_front(w.par, w.off_legs + u, w.off_legs + v);
          if (ctx.A.parity[rep.leaf[u]]) sign = -sign;
          std::vector<std::vector<int>> pm;
          DecGraph h = join_legs(rep, u, v, pm);
          out.add_term(ctx, h, c * (q * sign * norm * orb_in));
        }
      }
    }
  }
  return out;
}

ConvElement bracket(const Ctx &ctx, const ConvElement &x, const ConvElement &y) {
  ConvElement out;
  for (auto &[gnx, mx] : x.comp) {
    for (auto &[keyx, cx] : mx) {
      DecGraph a = decode_graph(keyx);
      Q orbx = orbit_of(ctx, a);
      const int na = a.nlegs();
      if (na == 0) continue;
      Word wa = word_of(ctx, a);
      for (auto &[gny, my] : y.comp) {
        for (auto &[keyy, cy] : my) {
          DecGraph b = decode_graph(keyy);
          Q orby = orbit_of(ctx, b);
          const int nb = b.nlegs();
          if (nb == 0) continue;
          Word wb = word_of(ctx, b);
          const int N = na + nb - 2;
          // concatenated word [Ea][Va][La][Eb][Vb][Lb]
          std::vector<uint8_t> par = wa.par;
          par.insert(par.end(), wb.par.begin(), wb.par.end());
          const int offb = static_cast<int>(wa.par.size());
          // block reorder sign (independent of the chosen legs): move Eb
          // across Va+La, and Vb across La
          int eb_odd = sum_par(wb.par, 0, wb.off_vdec);
          int va_la = sum_par(wa.par, wa.off_vdec, static_cast<int>(wa.par.size()));
          int vb = sum_par(wb.par, wb.off_vdec, wb.off_legs);
          int la = sum_par(wa.par, wa.off_legs, static_cast<int>(wa.par.size()));
          Q factor = orbx * orby;
          if (ctx.norms.bracket_mode == 0) factor *= binomial(N, na - 1) / Q(na * nb);
          for (int i = 0; i < na; ++i) {
            if (a.leaf[i] < 0) continue;
            for (int j = 0; j < nb; ++j) {
              if (b.leaf[j] < 0) continue;
              Q q = ctx.A.pairing(a.leaf[i], b.leaf[j]);
              if (q == 0) continue;
              int sign = extract_two_front(par, wa.off_legs + i, offb + wb.off_legs + j);
              if (ctx.A.parity[a.leaf[i]]) sign = -sign;
              // block reorder after removing the two legs
              int la_red = la - ctx.A.parity[a.leaf[i]];
              if ((eb_odd & 1) && ((va_la - ctx.A.parity[a.leaf[i]]) & 1)) sign = -sign;
              if ((vb & 1) && (la_red & 1)) sign = -sign;
              std::vector<std::vector<int>> pa, pb;
              DecGraph h = graft(a, i, b, j, pa, pb);
              out.add_term(ctx, h, cx * cy * (q * sign) * factor);
            }
          }
        }
      }
    }
  }
  return out;
}

DParts d_parts(const Ctx &ctx, const ConvElement &x) {
  DParts out;
  const bool hasdA = ctx.A.has_dA();
  for (auto &[gn, m] : x.comp) {
    for (auto &[key, c] : m) {
      DecGraph rep = decode_graph(key);
      Q orb_in = orbit_of(ctx, rep);
      Word w = word_of(ctx, rep);

      // d_A on leaf letters
      if (hasdA) {
        for (int u = 0; u < rep.nlegs(); ++u) {
          if (rep.leaf[u] < 0) continue;
          int src = rep.leaf[u];
          int travel = sum_par(w.par, 0, w.off_legs + u);
          for (int t = 0; t < ctx.A.dim; ++t) {
            Q q = ctx.A.dA[t][src];
            if (q == 0) continue;
            DecGraph h = rep;
            h.leaf[u] = t;
            out.dA.add_term(ctx, h, c * (q * ((travel & 1) ? -1 : 1) * orb_in));
          }
        }
      }

      // d_1: expansion producing a tadpole at each vertex
      for (int v = 0; v < rep.nv(); ++v) {
        if (rep.genus[v] < 1) continue;
        const int ar = rep.arity(v);
        auto terms = chi_expand(rep.vdec[v], ctx.rules, rep.genus[v], ar);
        if (terms.empty()) continue;
        Q mult = ctx.norms.d1_mode == 0 ? binomial(ar + 2, 2) : Q(1);
        DecGraph base = rep;
        base.genus[v] -= 1;
        base.vdec[v] = TautMonomial{};
        // prepend tadpole
        DecGraph h;
        h.genus = base.genus;
        h.vdec = base.vdec;
        h.leg_vertex = base.leg_vertex;
        h.leaf = base.leaf;
        h.edges.push_back({v, v, false});
        for (auto &e : base.edges) h.edges.push_back(e);
        // local points at v shift: legs keep, old ends +2; other vertices
        // keep their local orders
        const int legs_v = static_cast<int>(rep.legs_at(v).size());
        std::vector<int> pmap(ar);
        for (int p = 0; p < ar; ++p) pmap[p] = p < legs_v ? p : p + 2;
        for (auto &t : terms) {
          DecGraph hh = h;
          hh.vdec[v] = mono_remap(t.mono, pmap);
          out.d1.add_term(ctx, hh, c.shifted(t.hshift) * (t.coeff * mult * orb_in));
        }
      }

      // d_2: vertex splittings (ordered splits, factor 1/2)
      for (int v = 0; v < rep.nv(); ++v) {
        auto splits = split_vertex(rep, v);
        if (splits.empty()) continue;
        int after = sum_par(w.par, w.off_vdec + v + 1, w.off_legs);
        for (auto &vs : splits) {
          auto sts = delta_split(rep.vdec[v], ctx.rules, rep.genus[v], rep.arity(v), vs.side,
                                 vs.posL, vs.posR, vs.gL, vs.gR, vs.newL, vs.newR);
          for (auto &st : sts) {
            DecGraph h = vs.graph;
            h.vdec = rep.vdec;
            h.vdec[vs.left_vertex] = st.left;
            h.vdec.push_back(st.right);
            // reassemble: split_vertex left h.vdec sized V+1 with left/right
            // unset; we rebuilt it: left at v, right appended, others copied
            h.vdec[vs.left_vertex] = st.left;
            int sign = 1;
            if (monomial_parity(st.right, ctx.rules) && (after & 1)) sign = -sign;
            out.d2.add_term(ctx, h, c.shifted(st.hshift) * (st.coeff * sign * orb_in / Q(2)));
          }
        }
      }

      // dashed-edge rewrite: dashed -> usual with (psi_1 + psi_2) at the ends
      for (int e = 0; e < rep.nedges(); ++e) {
        if (!rep.edges[e].dashed) continue;
        int travel = sum_par(w.par, 0, e); // odd letters before this edge slot
        for (int side = 0; side < 2; ++side) {
          int vv = side == 0 ? rep.edges[e].v : rep.edges[e].w;
          int pt = rep.edge_end_point(e, side);
          DecGraph h = rep;
          h.edges[e].dashed = false;
          h.vdec[vv].set_psi(pt, h.vdec[vv].psi_at(pt) + 1);
          out.dE.add_term(ctx, h, c * (((travel & 1) ? -1 : 1) * orb_in));
        }
      }
    }
  }
  return out;
}

ConvElement d_gA(const Ctx &ctx, const ConvElement &x) {
  DParts p = d_parts(ctx, x);
  ConvElement out = p.dA;
  out += p.d1.scaled(Q(-1));
  out += p.d2.scaled(Q(-1));
  out += p.dE.scaled(Q(ctx.norms.de_sign));
  return out;
}

ConvElement master_residual(const Ctx &ctx, const ConvElement &x) {
  ConvElement r = d_gA(ctx, x);
  r += delta_op(ctx, x);
  r += bracket(ctx, x, x).scaled(Q(1, 2));
  return r;
}

ConvElement quantum_master_residual(const Ctx &ctx, const ConvElement &x) {
  ConvElement r = d_gA(ctx, x);
  r += delta_op(ctx, x).hbar_shifted(1);
  r += bracket(ctx, x, x).scaled(Q(1, 2));
  return r;
}

ConvElement gauge_act(const Ctx &ctx, const ConvElement &xi, const ConvElement &alpha,
                      int order, bool quantum) {
  ConvElement dxi = d_gA(ctx, xi);
  ConvElement del = delta_op(ctx, xi);
  dxi += quantum ? del.hbar_shifted(1) : del;

  ConvElement out = alpha;
  ConvElement ad_pow = alpha;   // ad_xi^k(alpha)
  ConvElement ad_dxi = dxi;     // ad_xi^{k-1}(d xi)
  Q fact = 1;
  for (int k = 1; k <= order; ++k) {
    fact *= k;
    ad_pow = bracket(ctx, xi, ad_pow);
    out += ad_pow.scaled(Q(1) / fact);
    out += ad_dxi.scaled(Q(1) / fact);
    ad_dxi = bracket(ctx, xi, ad_dxi);
    if (ad_pow.is_zero() && ad_dxi.is_zero()) break;
  }
  return out;
}

bool infinitesimal_check(const Ctx &ctx, const ConvElement &lam, const ConvElement &phi,
                         bool quantum, std::string *report) {
  DParts p = d_parts(ctx, lam);
  ConvElement w1 = p.d1 - (quantum ? delta_op(ctx, lam).hbar_shifted(1) : delta_op(ctx, lam));
  ConvElement w2 = p.d2 - bracket(ctx, phi, lam);
  ConvElement wa = p.dA;
  bool ok = w1.is_zero() && w2.is_zero() && wa.is_zero() && p.dE.is_zero();
  if (report) {
    std::ostringstream os;
    os << "weight1 " << (w1.is_zero() ? "ok" : "FAIL") << ", weight2 "
       << (w2.is_zero() ? "ok" : "FAIL") << ", dA " << (wa.is_zero() ? "ok" : "FAIL");
    *report = os.str();
  }
  return ok;
}

std::vector<std::pair<GN, std::string>> enumerate_unit_basis(const Ctx &ctx, int parity) {
  std::vector<std::pair<GN, std::string>> out;
  auto lp = std::vector<uint8_t>(ctx.A.parity.begin(), ctx.A.parity.end());
  for (int g = 0; 2 * g - 2 <= ctx.trunc.filt_max; ++g) {
    for (int n = (g == 0 ? 3 : (g >= 2 ? 0 : 1)); n + 2 * g - 2 <= ctx.trunc.filt_max; ++n) {
      auto graphs = enumerate_stable_graphs(g, n, ctx.trunc.vertex_max);
      for (auto &gr : graphs) {
        // all leaf assignments
        std::vector<int> assign(n, 0);
        std::function<void(int)> rec = [&](int i) {
          if (i == n) {
            DecGraph h = gr;
            for (int l = 0; l < n; ++l) h.leaf[l] = assign[l];
            CanonClass cc = canonicalize(h, ctx.rules, lp);
            if (cc.sign == 0) return;
            if (parity >= 0 && class_parity(ctx, decode_graph(cc.key)) != parity) return;
            out.push_back({GN{g, n}, cc.key});
            return;
          }
          for (int b = 0; b < ctx.A.dim; ++b) {
            assign[i] = b;
            rec(i + 1);
          }
        };
        rec(0);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

} // namespace taut
