#include "taut/homology.hpp"
#include "taut/par.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace taut {

namespace {

std::vector<std::string> cgra_impl(const Ctx &ctx, int vmax, int gmax, bool parallel) {
  // connected multigraphs with V vertices and E = b1 + V - 1 edges
  struct Task {
    int V, E;
  };
  std::vector<Task> tasks;
  for (int V = 1; V <= vmax; ++V)
    for (int b1 = 0; b1 <= gmax; ++b1) tasks.push_back({V, b1 + V - 1});
  std::vector<std::vector<std::string>> res(tasks.size());
  auto run = [&](int ti) {
    const auto [V, E] = tasks[ti];
    std::vector<std::pair<int, int>> pt;
    for (int i = 0; i < V; ++i)
      for (int j = i; j < V; ++j) pt.push_back({i, j});
    std::vector<int> mult(pt.size(), 0);
    std::function<void(size_t, int)> rec = [&](size_t k, int rem) {
      if (k == pt.size()) {
        if (rem != 0) return;
        OpGraph g;
        g.nv = V;
        g.vword.resize(V);
        for (size_t e = 0; e < pt.size(); ++e)
          for (int c = 0; c < mult[e]; ++c) {
            g.edges.push_back({pt[e].first, pt[e].second, false});
            g.elabel.push_back({});
          }
        // connectivity
        std::vector<int> parent(V);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int x) {
          while (parent[x] != x) x = parent[x] = parent[parent[x]];
          return x;
        };
        for (auto &e : g.edges) parent[find(e.v)] = find(e.w);
        for (int v = 1; v < V; ++v)
          if (find(v) != find(0)) return;
        OpCanon cc = canonical_op(g, ctx);
        if (cc.sign != 0) res[ti].push_back(cc.key);
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
  std::set<std::string> dedup;
  for (auto &r : res) dedup.insert(r.begin(), r.end());
  return {dedup.begin(), dedup.end()};
}

// expands an operad element over a basis index; throws when a term falls
// outside of it
std::vector<Q> expand_in(const std::map<std::string, int> &index, const OperadElement &x,
                         int dim, bool *outside = nullptr) {
  std::vector<Q> v(dim, 0);
  for (auto &[k, c] : x.terms) {
    auto it = index.find(k);
    if (it == index.end()) {
      if (outside) {
        *outside = true;
        continue;
      }
      throw std::runtime_error("expand_in: term outside basis");
    }
    v[it->second] += c.scalar();
  }
  return v;
}

} // namespace

std::vector<std::string> enumerate_cgra_basis(const Ctx &ctx, int vmax, int gmax) {
  return cgra_impl(ctx, vmax, gmax, true);
}
std::vector<std::string> enumerate_cgra_basis_serial(const Ctx &ctx, int vmax, int gmax) {
  return cgra_impl(ctx, vmax, gmax, false);
}

std::vector<HomologyRow> homology_window(const Ctx &ctx, Flavor f, int vmax, int gmax) {
  // basis grid extended one step beyond the window so that the differential
  // neighborhood of every interior bigrading is represented
  auto keys = enumerate_cgra_basis(ctx, vmax + 1, gmax + 1);
  std::map<std::string, int> index;
  std::vector<std::pair<int, int>> bigr(keys.size());
  for (size_t i = 0; i < keys.size(); ++i) {
    index[keys[i]] = static_cast<int>(i);
    OpGraph g = decode_op(keys[i]);
    bigr[i] = {g.nv, static_cast<int>(g.edges.size()) - g.nv + 1};
  }
  const int dim = static_cast<int>(keys.size());
  // differential columns
  std::vector<std::vector<std::pair<int, Q>>> dcol(dim);
  parallel_for(dim, [&](int i) {
    OperadElement x;
    x.terms[keys[i]] = CoeffPoly(Q(1));
    OperadElement dx = twisted_diff(ctx, x, f, vmax + 2);
    for (auto &[k, c] : dx.terms) {
      auto it = index.find(k);
      if (it == index.end()) continue; // beyond the extended window
      dcol[i].push_back({it->second, c.scalar()});
    }
  });

  std::vector<HomologyRow> out;
  for (int v = 1; v <= vmax; ++v) {
    for (int g = 0; g <= gmax; ++g) {
      std::vector<int> here;
      for (int i = 0; i < dim; ++i)
        if (bigr[i] == std::make_pair(v, g)) here.push_back(i);
      if (here.empty()) continue;
      bool interior = v + 1 <= vmax && g + 1 <= gmax;
      // out-map: from (v,g) to (v+1,g) and (v,g+1)
      std::map<int, int> rowid;
      SparseMatQ dout(0, static_cast<int>(here.size()));
      for (size_t c = 0; c < here.size(); ++c)
        for (auto &[r, q] : dcol[here[c]]) {
          if (!rowid.count(r)) {
            rowid[r] = dout.rows;
            dout.rows++;
            dout.row.push_back({});
          }
          dout.row[rowid[r]].push_back({static_cast<int>(c), q});
        }
      for (auto &rw : dout.row) std::sort(rw.begin(), rw.end());
      // in-map: columns from (v-1,g) and (v,g-1)
      std::vector<int> pre;
      for (int i = 0; i < dim; ++i)
        if (bigr[i] == std::make_pair(v - 1, g) || bigr[i] == std::make_pair(v, g - 1))
          pre.push_back(i);
      std::map<int, int> hererow;
      for (size_t r = 0; r < here.size(); ++r) hererow[here[r]] = static_cast<int>(r);
      SparseMatQ din(static_cast<int>(here.size()), static_cast<int>(pre.size()));
      for (size_t c = 0; c < pre.size(); ++c)
        for (auto &[r, q] : dcol[pre[c]]) {
          auto it = hererow.find(r);
          if (it == hererow.end()) continue;
          din.add(it->second, static_cast<int>(c), q);
        }
      int k = static_cast<int>(here.size()) - rank(dout);
      int h = k - rank(din);
      out.push_back({v, g, h, interior});
    }
  }
  return out;
}

LiftResult quantize_cycle(const Ctx &ctx, const OperadElement &sigma0, Flavor base, int vmax,
                          int gmax) {
  LiftResult res;
  Flavor fl_v = base; // the hbar-free edge twist (and d_E for tautological)
  (void)fl_v;
  const int cap = vmax + 2;
  OperadElement theta_edge = op_edge(ctx);
  OperadElement omega = op_tadpole(ctx);

  // check the input is a cycle of the omega-included differential
  OperadElement check = twisted_diff(ctx, sigma0, Flavor::CGraOmega, cap);
  // accumulated lift and current layer
  OperadElement total = sigma0, layer = sigma0;
  int hpow = 0;
  while (true) {
    OperadElement r = op_lie(ctx, omega, layer, cap);
    if (r.is_zero()) break;
    // solve [edge, s] = -r over graphs with one vertex less
    std::set<int> vcounts;
    for (auto &[k, c] : r.terms) vcounts.insert(op_vertices(k));
    std::vector<std::string> domain;
    for (auto k : enumerate_cgra_basis(ctx, vmax + 1, gmax + 1)) {
      int v = op_vertices(k);
      if (vcounts.count(v + 1)) domain.push_back(k);
    }
    std::map<std::string, int> rows;
    std::vector<std::vector<std::pair<int, Q>>> cols(domain.size());
    for (size_t c = 0; c < domain.size(); ++c) {
      OperadElement x;
      x.terms[domain[c]] = CoeffPoly(Q(1));
      OperadElement dx = op_lie(ctx, theta_edge, x, cap);
      for (auto &[k, q] : dx.terms) {
        if (!rows.count(k)) rows[k] = static_cast<int>(rows.size());
        cols[c].push_back({rows[k], q.scalar()});
      }
    }
    for (auto &[k, c] : r.terms)
      if (!rows.count(k)) rows[k] = static_cast<int>(rows.size());
    SparseMatQ m(static_cast<int>(rows.size()), static_cast<int>(domain.size()));
    for (size_t c = 0; c < domain.size(); ++c)
      for (auto &[rr, q] : cols[c]) m.add(rr, static_cast<int>(c), q);
    std::vector<Q> b(rows.size(), 0);
    for (auto &[k, c] : r.terms) b[rows[k]] = -c.scalar();
    SolveResult sol = solve_in_image(m, b);
    if (!sol.solution) {
      res.message = "lift infeasible: obstruction certified by left kernel witness";
      res.witness = sol.left_witness;
      return res;
    }
    OperadElement next;
    for (size_t c = 0; c < domain.size(); ++c)
      if ((*sol.solution)[c] != 0) next.terms[domain[c]] = CoeffPoly((*sol.solution)[c]);
    ++hpow;
    total += next.hbar_shifted(hpow);
    layer = next;
    if (layer.is_zero()) break;
  }
  (void)check;
  res.lift = total;
  res.message = "lift found";
  return res;
}

namespace {

// filtration weight of a component key
int gn_weight(const GN &gn) { return gn.n + 2 * gn.g - 2; }

} // namespace

GaugeResult gauge_equivalent(const Ctx &ctx, const ConvElement &alpha, const ConvElement &beta,
                             bool quantum) {
  GaugeResult res;
  // odd unit-decorated window basis, graded by filtration weight
  auto basis = enumerate_unit_basis(ctx, 1);
  std::map<int, std::vector<std::pair<GN, std::string>>> by_w;
  for (auto &[gn, k] : basis) by_w[gn_weight(gn)].push_back({gn, k});

  ConvElement xi; // accumulated
  for (int w = 1; w <= ctx.trunc.filt_max; ++w) {
    ConvElement cur = gauge_act(ctx, xi, alpha, ctx.trunc.filt_max + 2, quantum);
    ConvElement diff = beta - cur;
    // residual at weight w
    ConvElement resw;
    bool nonzero = false;
    for (auto &[gn, m] : diff.comp) {
      if (gn_weight(gn) != w) continue;
      for (auto &[k, c] : m)
        if (!c.zero()) {
          resw.comp[gn][k] = c;
          nonzero = true;
        }
    }
    if (!nonzero) continue;
    auto dom = by_w.find(w);
    std::vector<std::pair<GN, std::string>> domain =
        dom == by_w.end() ? std::vector<std::pair<GN, std::string>>{} : dom->second;
    // linearized gauge map at weight w: D xi = d xi (+ hbar Delta xi)
    //                                        + {alpha, xi}
    std::map<std::pair<GN, std::string>, int> rows;
    std::vector<std::vector<std::pair<int, Q>>> colsh(domain.size());
    std::vector<std::vector<std::pair<int, std::pair<int, int>>>> dummy;
    (void)dummy;
    std::vector<CoeffPoly> bvals;
    // the equation is over Q[hbar]; flatten (class, hbar power) pairs
    std::map<std::tuple<int, int, std::string, int>, int> rowsh; // (g, n, key, hpow)
    auto rowof = [&](const GN &gn, const std::string &k, int h) {
      auto key = std::make_tuple(gn.g, gn.n, k, h);
      auto it = rowsh.find(key);
      if (it != rowsh.end()) return it->second;
      int id = static_cast<int>(rowsh.size());
      rowsh[key] = id;
      return id;
    };
    std::vector<std::vector<std::pair<int, Q>>> cols(domain.size());
    for (size_t c = 0; c < domain.size(); ++c) {
      ConvElement e;
      e.comp[domain[c].first][domain[c].second] = CoeffPoly(Q(1));
      ConvElement de = d_gA(ctx, e);
      ConvElement del = delta_op(ctx, e);
      de += quantum ? del.hbar_shifted(1) : del;
      de += bracket(ctx, alpha, e);
      for (auto &[gn, m] : de.comp)
        for (auto &[k, cp] : m)
          for (auto &[hs, v] : cp.terms)
            cols[c].push_back({rowof(gn, k, hs.first), v});
    }
    for (auto &[gn, m] : resw.comp)
      for (auto &[k, cp] : m)
        for (auto &[hs, v] : cp.terms) rowof(gn, k, hs.first);
    SparseMatQ mm(static_cast<int>(rowsh.size()), static_cast<int>(domain.size()));
    for (size_t c = 0; c < domain.size(); ++c)
      for (auto &[r, q] : cols[c]) mm.add(r, static_cast<int>(c), q);
    std::vector<Q> b(rowsh.size(), 0);
    for (auto &[gn, m] : resw.comp)
      for (auto &[k, cp] : m)
        for (auto &[hs, v] : cp.terms) b[rowof(gn, k, hs.first)] = v;
    SolveResult sol = solve_in_image(mm, b);
    if (!sol.solution) {
      res.obstruction = resw;
      std::ostringstream os;
      os << "obstruction at filtration weight " << w;
      res.message = os.str();
      return res;
    }
    ConvElement step;
    for (size_t c = 0; c < domain.size(); ++c)
      if ((*sol.solution)[c] != 0)
        step.comp[domain[c].first][domain[c].second] = CoeffPoly((*sol.solution)[c]);
    xi += step;
  }
  // final verification
  ConvElement fin = gauge_act(ctx, xi, alpha, ctx.trunc.filt_max + 2, quantum) - beta;
  if (!fin.is_zero()) {
    res.obstruction = fin;
    res.message = "gauge solve left a residual inside the window";
    return res;
  }
  res.xi = xi;
  res.message = "gauge equivalence found";
  return res;
}

ExtendResult extend_formal_deformation(const Ctx &ctx, const ConvElement &phi,
                                       const ConvElement &lam, int steps, bool quantum) {
  ExtendResult res;
  // the isotropy shortcut: when Delta lam = 0 and {lam, lam} = 0, lam + phi
  // is itself a solution and all higher corrections vanish
  ConvElement dl = delta_op(ctx, lam);
  ConvElement ll = bracket(ctx, lam, lam);
  if (dl.is_zero() && ll.is_zero()) {
    ConvElement resid = quantum ? quantum_master_residual(ctx, phi + lam)
                                : master_residual(ctx, phi + lam);
    if (resid.is_zero()) {
      res.extended = true;
      res.trivially_global = true;
      res.steps = {lam};
      res.message = "global: Delta lam = 0 and {lam, lam} = 0";
      return res;
    }
  }
  auto basis = enumerate_unit_basis(ctx, 0);
  std::vector<ConvElement> phis = {lam};
  for (int nstep = 2; nstep <= steps; ++nstep) {
    ConvElement Phi;
    for (int k = 1; k <= nstep - 1; ++k) {
      int l = nstep - k;
      if (l < 1 || l > static_cast<int>(phis.size()) || k > static_cast<int>(phis.size()))
        continue;
      Phi += bracket(ctx, phis[k - 1], phis[l - 1]).scaled(Q(1, 2));
    }
    if (Phi.is_zero()) {
      phis.push_back(ConvElement{});
      continue;
    }
    // solve d^phi x = -Phi over the even window basis
    std::map<std::tuple<int, int, std::string, int>, int> rowsh;
    auto rowof = [&](const GN &gn, const std::string &k, int h) {
      auto key = std::make_tuple(gn.g, gn.n, k, h);
      auto it = rowsh.find(key);
      if (it != rowsh.end()) return it->second;
      int id = static_cast<int>(rowsh.size());
      rowsh[key] = id;
      return id;
    };
    std::vector<std::vector<std::pair<int, Q>>> cols(basis.size());
    for (size_t c = 0; c < basis.size(); ++c) {
      ConvElement e;
      e.comp[basis[c].first][basis[c].second] = CoeffPoly(Q(1));
      ConvElement de = d_gA(ctx, e);
      ConvElement del = delta_op(ctx, e);
      de += quantum ? del.hbar_shifted(1) : del;
      de += bracket(ctx, phi, e);
      for (auto &[gn, m] : de.comp)
        for (auto &[k, cp] : m)
          for (auto &[hs, v] : cp.terms) cols[c].push_back({rowof(gn, k, hs.first), v});
    }
    for (auto &[gn, m] : Phi.comp)
      for (auto &[k, cp] : m)
        for (auto &[hs, v] : cp.terms) rowof(gn, k, hs.first);
    SparseMatQ mm(static_cast<int>(rowsh.size()), static_cast<int>(basis.size()));
    for (size_t c = 0; c < basis.size(); ++c)
      for (auto &[r, q] : cols[c]) mm.add(r, static_cast<int>(c), q);
    std::vector<Q> b(rowsh.size(), 0);
    for (auto &[gn, m] : Phi.comp)
      for (auto &[k, cp] : m)
        for (auto &[hs, v] : cp.terms) b[rowof(gn, k, hs.first)] = -v;
    SolveResult sol = solve_in_image(mm, b);
    if (!sol.solution) {
      res.failed_step = nstep;
      res.obstruction = Phi;
      res.message = "obstruction cocycle is not exact over the window basis";
      res.steps = phis;
      return res;
    }
    ConvElement step;
    for (size_t c = 0; c < basis.size(); ++c)
      if ((*sol.solution)[c] != 0)
        step.comp[basis[c].first][basis[c].second] = CoeffPoly((*sol.solution)[c]);
    phis.push_back(step);
  }
  res.extended = true;
  res.steps = phis;
  res.message = "formal deformation extended through the requested steps";
  return res;
}

} // namespace taut
