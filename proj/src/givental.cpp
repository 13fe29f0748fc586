#include "taut/givental.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace taut {

void check_r_symmetry(const Ctx &ctx, const RTerm &t) {
  const int d = ctx.A.dim;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Q rhs = t.tensor[j][i];
      if (ctx.A.parity[i] && ctx.A.parity[j]) rhs = -rhs;
      if (t.k % 2) rhs = -rhs;
      if (t.tensor[i][j] != rhs)
        throw std::invalid_argument(
            "givental_r: tensor violates the (12) = (-1)^k symmetry");
    }
}

OperadElement givental_r(const Ctx &ctx, const std::vector<RTerm> &data, bool hbar) {
  OperadElement out;
  for (auto &t : data) {
    check_r_symmetry(ctx, t);
    const int k = t.k;
    for (int a1 = 0; a1 < ctx.A.dim; ++a1)
      for (int a2 = 0; a2 < ctx.A.dim; ++a2) {
        Q c = t.tensor[a1][a2];
        if (c == 0) continue;
        // vertex psi tail
        {
          OpGraph g;
          g.nv = 1;
          g.vword.resize(1);
          g.vword[0].push_back({ULetter::RPSI, k + 1, a1, a2});
          out.add_term(ctx, g, CoeffPoly(c));
        }
        // dashed tadpole and dashed edge families
        for (int i = 0; i <= (hbar ? ctx.trunc.psi_max : k); ++i) {
          int jlo = hbar ? 0 : k - i;
          int jhi = hbar ? ctx.trunc.psi_max - i : k - i;
          for (int j = std::max(jlo, 0); j <= jhi; ++j) {
            Q cc = -c;
            if (j % 2) cc = -cc;
            {
              OpGraph g;
              g.nv = 1;
              g.vword.resize(1);
              g.edges.push_back({0, 0, true});
              g.elabel.push_back({a1, a2, i, j});
              out.add_term(ctx, g, hbar ? CoeffPoly(cc, 1) : CoeffPoly(cc));
            }
            {
              OpGraph g;
              g.nv = 2;
              g.vword.resize(2);
              g.edges.push_back({0, 1, true});
              g.elabel.push_back({a1, a2, i, j});
              out.add_term(ctx, g, CoeffPoly(cc));
            }
          }
        }
      }
  }
  return out;
}

OperadElement translation_T(const Ctx &ctx,
                            const std::vector<std::pair<int, std::vector<Q>>> &series) {
  OperadElement out;
  for (auto &[l, vec] : series) {
    if (l < 2) throw std::invalid_argument("translation_T: series must start at psi^2");
    for (int a = 0; a < ctx.A.dim; ++a) {
      if (vec[a] == 0) continue;
      OpGraph g;
      g.nv = 1;
      g.vword.resize(1);
      g.vword[0].push_back({ULetter::TPSI, l, a, -1});
      out.add_term(ctx, g, CoeffPoly(vec[a]));
    }
  }
  return out;
}

OperadElement manin_zograf_l(const Ctx &ctx, const std::vector<std::pair<int, Q>> &kappas,
                             const std::vector<std::pair<int, Q>> &chs) {
  OperadElement out;
  for (auto &[i, c] : kappas) {
    OpGraph g;
    g.nv = 1;
    g.vword.resize(1);
    g.vword[0].push_back({ULetter::MZ_KAPPA, i, -1, -1});
    out.add_term(ctx, g, CoeffPoly(c));
  }
  for (auto &[j, c] : chs) {
    if (j % 2 == 0) throw std::invalid_argument("manin_zograf_l: ch index must be odd");
    OpGraph g;
    g.nv = 1;
    g.vword.resize(1);
    g.vword[0].push_back({ULetter::MZ_CH, j, -1, -1});
    out.add_term(ctx, g, CoeffPoly(c));
  }
  return out;
}

OperadElement hodge_Fhat(const Ctx &ctx, int jmax) {
  OperadElement out;
  for (int j = 0; j <= jmax; ++j) {
    OpGraph g;
    g.nv = 1;
    g.vword.resize(1);
    g.vword[0].push_back({ULetter::MZ_CH, 2 * j + 1, -1, -1});
    out.add_term(ctx, g, CoeffPoly(factorial(2 * j), 0, 2 * j + 1));
  }
  return out;
}

CycleReport check_cycle(const Ctx &ctx, const OperadElement &x, Flavor f) {
  CycleReport r;
  if (x.is_zero()) {
    r.pass = true;
    r.message = "zero element is a cycle";
    return r;
  }
  OperadElement d = twisted_diff(ctx, x, f, ctx.trunc.vertex_max + 4);
  r.residual_terms = d.term_count();
  r.pass = d.is_zero();
  r.message = r.pass ? "cycle: twisted differential vanishes exactly"
                     : "not a cycle: twisted differential has nonzero terms";
  return r;
}

OperadElement sigma3(const Ctx &ctx) { return op_sigma3(ctx); }

ConvElement teleman_infinitesimal_oracle(const Ctx &ctx, const std::vector<RTerm> &data,
                                         const ConvElement &alpha) {
  // reject non-strict inputs
  for (auto &[gn, m] : alpha.comp)
    for (auto &[k, c] : m) {
      DecGraph g = decode_graph(k);
      if (g.nv() != 1 || g.nedges() != 0)
        throw std::invalid_argument("teleman oracle: alpha must be strict");
    }
  ConvElement out;
  std::vector<uint8_t> lp(ctx.A.parity.begin(), ctx.A.parity.end());
  for (auto &t : data) {
    check_r_symmetry(ctx, t);
    const int k = t.k;
    for (int a1 = 0; a1 < ctx.A.dim; ++a1)
      for (int a2 = 0; a2 < ctx.A.dim; ++a2) {
        Q c = t.tensor[a1][a2];
        if (c == 0) continue;
        // term 1: psi tail at every marked point
        for (auto &[gn, m] : alpha.comp) {
          for (auto &[key, cp] : m) {
            DecGraph rep = decode_graph(key);
            Q orb = orbit_of(ctx, rep);
            for (int u = 0; u < rep.nlegs(); ++u) {
              Q q = ctx.A.pairing(rep.leaf[u], a1);
              if (q == 0) continue;
              int travel = 0;
              for (int l = 0; l < u; ++l)
                if (rep.leaf[l] >= 0) travel += ctx.A.parity[rep.leaf[l]];
              travel += monomial_parity(rep.vdec[0], ctx.rules);
              int sign = ((ctx.A.parity[a1] + ctx.A.parity[a2]) % 2 && (travel & 1)) ? -1 : 1;
              DecGraph h = rep;
              h.leaf[u] = a2;
              int pt = h.leg_point(u);
              h.vdec[0].set_psi(pt, h.vdec[0].psi_at(pt) + k + 1);
              out.add_term(ctx, h, cp * (c * q * sign * orb));
            }
          }
        }
        // terms 2 and 3: the (-1)^j-weighted gluings
        for (int i = 0; i + 0 <= k; ++i) {
          int j = k - i;
          Q w = c * Q(j % 2 ? -1 : 1) * Q(-1, 2);
          // term 2: glue two points of the (g-1, n+2) component
          for (auto &[gn, m] : alpha.comp) {
            for (auto &[key, cp] : m) {
              DecGraph rep = decode_graph(key);
              Q orb = orbit_of(ctx, rep);
              const int L = rep.nlegs();
              if (L < 2) continue;
              Q norm = Q(1) / Q(L * (L - 1));
              for (int u = 0; u < L; ++u)
                for (int v = 0; v < L; ++v) {
                  if (u == v) continue;
                  Q q = ctx.A.pairing(rep.leaf[u], a1) * ctx.A.pairing(a2, rep.leaf[v]);
                  if (q == 0) continue;
                  std::vector<std::vector<int>> pm;
                  DecGraph h = join_legs(rep, u, v, pm);
                  h.edges[0].dashed = true;
                  int vv = h.edges[0].v;
                  int p0 = h.edge_end_point(0, 0), p1 = h.edge_end_point(0, 1);
                  int w0 = h.edges[0].v, w1 = h.edges[0].w;
                  h.vdec[w0].set_psi(p0, h.vdec[w0].psi_at(p0) + (u < v ? i : i));
                  h.vdec[w1].set_psi(p1, h.vdec[w1].psi_at(p1) + j);
                  (void)vv;
                  out.add_term(ctx, h, cp * (w * q * norm * orb));
                }
            }
          }
          // term 3: glue two components
          for (auto &[gn1, m1] : alpha.comp) {
            for (auto &[k1, cp1] : m1) {
              DecGraph r1 = decode_graph(k1);
              Q orb1 = orbit_of(ctx, r1);
              for (auto &[gn2, m2] : alpha.comp) {
                for (auto &[k2, cp2] : m2) {
                  DecGraph r2 = decode_graph(k2);
                  Q orb2 = orbit_of(ctx, r2);
                  const int n1 = r1.nlegs(), n2 = r2.nlegs();
                  if (n1 == 0 || n2 == 0) continue;
                  const int N = n1 + n2 - 2;
                  Q norm = binomial(N, n1 - 1) / Q(n1 * n2);
                  for (int u = 0; u < n1; ++u)
                    for (int v = 0; v < n2; ++v) {
                      Q q = ctx.A.pairing(r1.leaf[u], a1) * ctx.A.pairing(a2, r2.leaf[v]);
                      if (q == 0) continue;
                      std::vector<std::vector<int>> pa, pb;
                      DecGraph h = graft(r1, u, r2, v, pa, pb);
                      h.edges[0].dashed = true;
                      int p0 = h.edge_end_point(0, 0), p1 = h.edge_end_point(0, 1);
                      int w0 = h.edges[0].v, w1 = h.edges[0].w;
                      h.vdec[w0].set_psi(p0, h.vdec[w0].psi_at(p0) + i);
                      h.vdec[w1].set_psi(p1, h.vdec[w1].psi_at(p1) + j);
                      out.add_term(ctx, h, cp1 * cp2 * (w * q * norm * orb1 * orb2));
                    }
                }
              }
            }
          }
        }
      }
  }
  return out;
}

ConvElement br_via_ggrt(const Ctx &ctx, const ConvElement &alpha) {
  ConvElement xi_a = xi_map(ctx, alpha);
  // act by the Hodge Manin-Zograf element: multiply every vertex class by
  // the truncated Chern character exponential, with s-bookkeeping
  ConvElement acted;
  for (auto &[gn, m] : xi_a.comp) {
    for (auto &[key, c] : m) {
      DecGraph rep = decode_graph(key);
      std::vector<std::pair<DecGraph, CoeffPoly>> acc = {{rep, c}};
      for (int v = 0; v < rep.nv(); ++v) {
        const int gv = rep.genus[v];
        std::vector<std::pair<DecGraph, CoeffPoly>> next;
        for (auto &[g0, c0] : acc)
          for (int deg = 0; deg <= gv; ++deg)
            for (auto &[mono, q] : chern_exp_coefficient(deg)) {
              DecGraph h = g0;
              h.vdec[v] = mono_mul(h.vdec[v], mono);
              next.push_back({h, c0 * CoeffPoly(q, 0, deg)});
            }
        acc = std::move(next);
      }
      for (auto &[h, cc] : acc) {
        // no orbit factors: the decoration is identical on every vertex
        // orbit representative, so stored coefficients map straight through
        auto &slot = acted.comp[{h.total_genus(), h.nlegs()}];
        std::vector<uint8_t> lp(ctx.A.parity.begin(), ctx.A.parity.end());
        CanonClass cno = canonicalize(h, ctx.rules, lp);
        if (cno.sign == 0) continue;
        slot[cno.key] += cc * Q(cno.sign);
        if (slot[cno.key].zero()) slot.erase(cno.key);
      }
    }
  }
  // rewrite the Chern polynomials into lambda classes: group the terms by
  // the graph with the ch content stripped, check each group against the
  // declared exponential pattern, and emit the lambda decoration
  struct Group {
    DecGraph base;
    std::vector<int> degs; // per-vertex s-degree of the stripped monomial
    std::map<std::string, CoeffPoly> got; // ch tuple encoding -> coefficient
  };
  std::map<std::string, Group> groups;
  std::vector<uint8_t> lp(ctx.A.parity.begin(), ctx.A.parity.end());
  for (auto &[gn, m] : acted.comp) {
    for (auto &[key, c] : m) {
      DecGraph rep = decode_graph(key);
      DecGraph base = rep;
      std::vector<int> degs(rep.nv(), 0);
      std::string tup;
      for (int v = 0; v < rep.nv(); ++v) {
        for (auto x : base.vdec[v].ch) degs[v] += x;
        tup += base.vdec[v].encode();
        base.vdec[v].ch.clear();
      }
      CanonClass cb = canonicalize(base, ctx.rules, lp);
      std::string gk = cb.key;
      for (int d : degs) gk += static_cast<char>('0' + d);
      auto &grp = groups[gk];
      grp.base = base;
      grp.degs = degs;
      grp.got[tup] += c;
    }
  }
  ConvElement rewritten;
  for (auto &[gk, grp] : groups) {
    // expected pattern: product over vertices of chern_exp_coefficient(deg_v)
    std::vector<std::pair<std::string, Q>> want = {{std::string(), Q(1)}};
    for (int v = 0; v < grp.base.nv(); ++v) {
      std::vector<std::pair<std::string, Q>> next;
      for (auto &[pre, qpre] : want)
        for (auto &[mono, q] : chern_exp_coefficient(grp.degs[v])) {
          DecGraph h = grp.base;
          TautMonomial withch = h.vdec[v];
          for (auto x : mono.ch) withch.ch.push_back(x);
          withch.normalize();
          next.push_back({pre + withch.encode(), qpre * q});
        }
      want = std::move(next);
    }
    // proportionality scale as a coefficient polynomial
    CoeffPoly scale;
    bool first = true;
    if (grp.got.size() != want.size())
      throw NoRule("chern rewrite: group does not match the exponential pattern");
    for (auto &[tup, q] : want) {
      auto it = grp.got.find(tup);
      if (it == grp.got.end()) throw NoRule("chern rewrite: missing pattern monomial");
      CoeffPoly r = it->second * (Q(1) / q);
      if (first) {
        scale = r;
        first = false;
      } else if (!(scale == r)) {
        throw NoRule("chern rewrite: input is not proportional to the pattern");
      }
    }
    DecGraph h = grp.base;
    for (int v = 0; v < h.nv(); ++v)
      if (grp.degs[v] > 0) {
        h.vdec[v].lam.push_back(static_cast<uint8_t>(grp.degs[v]));
        h.vdec[v].normalize();
      }
    CanonClass cc = canonicalize(h, ctx.rules, lp);
    if (cc.sign == 0) continue;
    auto &slot = rewritten.comp[{h.total_genus(), h.nlegs()}];
    slot[cc.key] += scale * Q(cc.sign);
    if (slot[cc.key].zero()) slot.erase(cc.key);
  }
  // evaluate s = hbar^{-1}
  ConvElement out;
  for (auto &[gn, m] : rewritten.comp) {
    for (auto &[key, c] : m) {
      CoeffPoly e = c.eval_s_inv_hbar();
      if (e.has_negative_hbar())
        throw std::runtime_error("br_via_ggrt: negative hbar power survived evaluation");
      if (e.zero()) continue;
      out.comp[gn][key] += e;
      if (out.comp[gn][key].zero()) out.comp[gn].erase(key);
    }
  }
  return out;
}

std::vector<OneVertexRow> one_vertex_homology_window(const Ctx &ctx, int psi_max) {
  // basis: one-vertex graphs with at most one tadpole (usual or dashed,
  // labeled with psi powers within the cap) and unary words of length <= 1
  std::vector<std::string> keys;
  std::set<std::string> seen;
  auto push = [&](const OpGraph &g) {
    OpCanon c = canonical_op(g, ctx);
    if (c.sign == 0 || seen.count(c.key)) return;
    seen.insert(c.key);
    keys.push_back(c.key);
  };
  // plain vertex
  {
    OpGraph g;
    g.nv = 1;
    g.vword.resize(1);
    push(g);
  }
  // single unary letters
  for (int a1 = 0; a1 < ctx.A.dim; ++a1) {
    for (int kk = 1; kk <= psi_max; ++kk)
      for (int a2 = 0; a2 < ctx.A.dim; ++a2) {
        OpGraph g;
        g.nv = 1;
        g.vword.resize(1);
        g.vword[0].push_back({ULetter::RPSI, kk, a1, a2});
        push(g);
      }
    for (int l = 2; l <= psi_max; ++l) {
      OpGraph g;
      g.nv = 1;
      g.vword.resize(1);
      g.vword[0].push_back({ULetter::TPSI, l, a1, -1});
      push(g);
    }
  }
  for (int i = 1; i <= psi_max; ++i) {
    OpGraph g;
    g.nv = 1;
    g.vword.resize(1);
    g.vword[0].push_back({ULetter::MZ_KAPPA, i, -1, -1});
    push(g);
  }
  for (int j = 1; j <= psi_max; j += 2) {
    OpGraph g;
    g.nv = 1;
    g.vword.resize(1);
    g.vword[0].push_back({ULetter::MZ_CH, j, -1, -1});
    push(g);
  }
  // tadpoles with labels
  for (int a1 = 0; a1 < ctx.A.dim; ++a1)
    for (int a2 = 0; a2 < ctx.A.dim; ++a2)
      for (int i = 0; i <= psi_max; ++i)
        for (int j = 0; i + j <= psi_max; ++j)
          for (int dashed = 0; dashed < 2; ++dashed) {
            OpGraph g;
            g.nv = 1;
            g.vword.resize(1);
            g.edges.push_back({0, 0, dashed != 0});
            g.elabel.push_back({a1, a2, i, j});
            push(g);
          }
  std::map<std::string, int> index;
  for (size_t i = 0; i < keys.size(); ++i) index[keys[i]] = static_cast<int>(i);
  // differential: d_E + arity-preserving bracket with the tadpole
  OperadElement omega = op_tadpole(ctx);
  SparseMatQ m(0, static_cast<int>(keys.size()));
  std::map<std::string, int> rows;
  for (size_t c = 0; c < keys.size(); ++c) {
    OperadElement x;
    x.terms[keys[c]] = CoeffPoly(Q(1));
    OperadElement dx = twisted_diff(ctx, x, Flavor::TautOmega, 1);
    for (auto &[k, cc] : dx.terms) {
      if (op_vertices(k) != 1) continue;
      if (!rows.count(k)) {
        rows[k] = m.rows;
        m.rows++;
        m.row.push_back({});
      }
      m.row[rows[k]].push_back({static_cast<int>(c), cc.scalar()});
    }
  }
  for (auto &rw : m.row) std::sort(rw.begin(), rw.end());
  auto kb = kernel_basis(m);
  // quotient by the image: report a homology basis by picking kernel vectors
  // independent modulo the image of the differential from the same space
  SparseMatQ din(static_cast<int>(keys.size()), static_cast<int>(keys.size()));
  for (size_t c = 0; c < keys.size(); ++c) {
    OperadElement x;
    x.terms[keys[c]] = CoeffPoly(Q(1));
    OperadElement dx = twisted_diff(ctx, x, Flavor::TautOmega, 1);
    for (auto &[k, cc] : dx.terms) {
      auto it = index.find(k);
      if (it == index.end()) continue;
      din.add(it->second, static_cast<int>(c), cc.scalar());
    }
  }
  // greedy: extend the image by kernel vectors; the ones that enlarge the
  // span are homology representatives
  std::vector<OneVertexRow> out;
  SparseMatQ span(0, static_cast<int>(keys.size()));
  for (int c = 0; c < static_cast<int>(keys.size()); ++c) {
    std::vector<std::pair<int, Q>> col;
    for (int r = 0; r < static_cast<int>(keys.size()); ++r) {
      Q v = din.get(r, c);
      if (v != 0) col.push_back({r, v});
    }
    if (!col.empty()) {
      span.rows++;
      span.row.push_back(col);
    }
  }
  int base = rank(span);
  for (auto &v : kb) {
    span.rows++;
    std::vector<std::pair<int, Q>> col;
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
      if (v[i] != 0) col.push_back({i, v[i]});
    span.row.push_back(col);
    int r = rank(span);
    if (r > base) {
      base = r;
      // name the row by its leading key
      for (int i = 0; i < static_cast<int>(v.size()); ++i)
        if (v[i] != 0) {
          OpGraph g = decode_op(keys[i]);
          int deg = 0;
          for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
            deg += g.elabel[e].i + g.elabel[e].j;
          for (auto &w : g.vword[0]) deg += w.i;
          out.push_back({keys[i], deg});
          break;
        }
    } else {
      span.rows--;
      span.row.pop_back();
    }
  }
  return out;
}

} // namespace taut
