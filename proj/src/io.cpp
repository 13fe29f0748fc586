#include "taut/io.hpp"

#include <json.hpp>

#include <sstream>

namespace taut {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

namespace {

ordered mono_json(const Ctx &ctx, const TautMonomial &m) {
  ordered j;
  if (m.min_class) {
    j["minimal"] = ctx.rules.min_class(m.min_class).name;
    j["points"] = m.min_pts;
  }
  if (!m.psi.empty()) {
    ordered ps = ordered::array();
    for (auto &[p, e] : m.psi) ps.push_back({p, e});
    j["psi"] = ps;
  }
  if (!m.kappa.empty()) j["kappa"] = m.kappa;
  if (!m.lam.empty()) j["lambda"] = m.lam;
  if (!m.ch.empty()) j["ch"] = m.ch;
  return j;
}

TautMonomial mono_from(const Ctx &ctx, const ordered &j) {
  TautMonomial m;
  if (j.contains("minimal")) {
    std::string name = j["minimal"];
    for (size_t i = 0; i < ctx.rules.minimal.size(); ++i)
      if (ctx.rules.minimal[i].name == name) m.min_class = static_cast<int>(i) + 1;
    if (!m.min_class) throw std::runtime_error("json: unregistered minimal class " + name);
    for (auto &p : j["points"]) m.min_pts.push_back(p.get<uint8_t>());
  }
  if (j.contains("psi"))
    for (auto &pe : j["psi"]) m.psi.push_back({pe[0].get<uint8_t>(), pe[1].get<uint8_t>()});
  if (j.contains("kappa"))
    for (auto &k : j["kappa"]) m.kappa.push_back(k.get<uint16_t>());
  if (j.contains("lambda"))
    for (auto &l : j["lambda"]) m.lam.push_back(l.get<uint8_t>());
  if (j.contains("ch"))
    for (auto &c : j["ch"]) m.ch.push_back(c.get<uint8_t>());
  m.normalize();
  return m;
}

ordered graph_json_obj(const Ctx &ctx, const DecGraph &g) {
  ordered j;
  ordered vs = ordered::array();
  for (int v = 0; v < g.nv(); ++v) {
    ordered jv;
    jv["g"] = g.genus[v];
    ordered dec = mono_json(ctx, g.vdec[v]);
    if (!dec.empty()) jv["class"] = dec;
    vs.push_back(jv);
  }
  j["vertices"] = vs;
  ordered es = ordered::array();
  for (auto &e : g.edges) {
    ordered je = ordered::array({e.v, e.w});
    if (e.dashed) je.push_back("dashed");
    es.push_back(je);
  }
  j["edges"] = es;
  ordered ls = ordered::array();
  for (int l = 0; l < g.nlegs(); ++l) {
    ordered jl = ordered::array();
    jl.push_back(g.leg_vertex[l]);
    jl.push_back(l + 1);
    if (g.leaf[l] >= 0) jl.push_back(ctx.A.names[g.leaf[l]]);
    ls.push_back(jl);
  }
  j["legs"] = ls;
  return j;
}

DecGraph graph_from_obj(const Ctx &ctx, const ordered &j) {
  DecGraph g;
  for (auto &jv : j["vertices"]) {
    g.genus.push_back(jv["g"].get<int>());
    g.vdec.push_back(jv.contains("class") ? mono_from(ctx, jv["class"]) : TautMonomial{});
  }
  for (auto &je : j["edges"]) {
    bool dashed = je.size() > 2 && je[2] == "dashed";
    g.edges.push_back({je[0].get<int>(), je[1].get<int>(), dashed});
  }
  for (auto &jl : j["legs"]) {
    g.leg_vertex.push_back(jl[0].get<int>());
    int leaf = -1;
    if (jl.size() > 2) {
      std::string name = jl[2];
      for (int i = 0; i < ctx.A.dim; ++i)
        if (ctx.A.names[i] == name) leaf = i;
      if (leaf < 0) throw std::runtime_error("json: unknown basis element " + name);
    }
    g.leaf.push_back(leaf);
  }
  return g;
}

std::string qstr(const Q &q) { return q.get_str(); }

Q qparse(const std::string &s) {
  Q q(s);
  q.canonicalize();
  return q;
}

ordered poly_json(const CoeffPoly &c) {
  ordered arr = ordered::array();
  for (auto &[hs, v] : c.terms) {
    ordered t;
    t["c"] = qstr(v);
    if (hs.first) t["hbar"] = hs.first;
    if (hs.second) t["s"] = hs.second;
    arr.push_back(t);
  }
  return arr;
}

CoeffPoly poly_from(const ordered &j) {
  CoeffPoly c;
  for (auto &t : j)
    c.add(qparse(t["c"].get<std::string>()), t.value("hbar", 0), t.value("s", 0));
  return c;
}

} // namespace

std::string graph_to_json(const Ctx &ctx, const DecGraph &g) {
  return graph_json_obj(ctx, g).dump(2);
}

DecGraph graph_from_json(const Ctx &ctx, const std::string &s) {
  return graph_from_obj(ctx, ordered::parse(s));
}

std::string conv_to_json(const Ctx &ctx, const ConvElement &x) {
  ordered j;
  ordered terms = ordered::array();
  for (auto &[gn, m] : x.comp)
    for (auto &[k, c] : m) {
      ordered t;
      t["g"] = gn.g;
      t["n"] = gn.n;
      t["coeff"] = poly_json(c);
      t["graph"] = graph_json_obj(ctx, decode_graph(k));
      terms.push_back(t);
    }
  j["terms"] = terms;
  return j.dump(2);
}

ConvElement conv_from_json(const Ctx &ctx, const std::string &s) {
  ordered j = ordered::parse(s);
  ConvElement x;
  std::vector<uint8_t> lp(ctx.A.parity.begin(), ctx.A.parity.end());
  for (auto &t : j["terms"]) {
    DecGraph g = graph_from_obj(ctx, t["graph"]);
    CanonClass cc = canonicalize(g, ctx.rules, lp);
    if (cc.sign == 0) continue;
    GN gn{g.total_genus(), g.nlegs()};
    x.comp[gn][cc.key] += poly_from(t["coeff"]) * Q(cc.sign);
  }
  return x;
}

std::string frobenius_to_json(const FrobeniusData &F) {
  ordered j;
  j["dim"] = F.A.dim;
  j["parity"] = F.A.parity;
  j["names"] = F.A.names;
  ordered pr = ordered::array();
  for (auto &row : F.A.pair_) {
    ordered r = ordered::array();
    for (auto &v : row) r.push_back(qstr(v));
    pr.push_back(r);
  }
  j["pairing"] = pr;
  ordered prod = ordered::array();
  for (int i = 0; i < F.A.dim; ++i)
    for (int jx = 0; jx < F.A.dim; ++jx)
      for (int k = 0; k < F.A.dim; ++k)
        if (F.prod[i][jx][k] != 0)
          prod.push_back(ordered::array({i, jx, k, qstr(F.prod[i][jx][k])}));
  j["product"] = prod;
  if (!F.degree.empty()) j["degree"] = F.degree;
  return j.dump(2);
}

FrobeniusData frobenius_from_json(const std::string &s) {
  ordered j = ordered::parse(s);
  FrobeniusData F;
  F.A.dim = j["dim"].get<int>();
  for (auto &p : j["parity"]) F.A.parity.push_back(p.get<uint8_t>());
  for (auto &n : j["names"]) F.A.names.push_back(n.get<std::string>());
  for (auto &row : j["pairing"]) {
    std::vector<Q> r;
    for (auto &v : row) r.push_back(qparse(v.get<std::string>()));
    F.A.pair_.push_back(r);
  }
  F.prod.assign(F.A.dim,
                std::vector<std::vector<Q>>(F.A.dim, std::vector<Q>(F.A.dim, 0)));
  for (auto &t : j["product"])
    F.prod[t[0].get<int>()][t[1].get<int>()][t[2].get<int>()] =
        qparse(t[3].get<std::string>());
  if (j.contains("degree"))
    for (auto &d : j["degree"]) F.degree.push_back(d.get<int>());
  return F;
}

std::string certificate_json(const Ctx &ctx, const std::string &operation,
                             const ConvElement &residual, bool pass) {
  ordered j;
  j["operation"] = operation;
  ordered w;
  w["filtration"] = ctx.trunc.filt_max;
  w["hbar"] = ctx.trunc.hbar_max;
  w["vertices"] = ctx.trunc.vertex_max;
  j["window"] = w;
  ordered supp = ordered::array();
  for (auto &[gn, m] : residual.comp)
    for (auto &[k, c] : m) {
      ordered t;
      t["g"] = gn.g;
      t["n"] = gn.n;
      t["coeff"] = poly_json(c);
      t["graph"] = graph_json_obj(ctx, decode_graph(k));
      supp.push_back(t);
    }
  j["residual_support"] = supp;
  j["dropped_out_of_window"] = residual.dropped;
  j["verdict"] = pass ? "pass" : "fail";
  return j.dump(2);
}

std::string homology_csv(const std::vector<HomologyRow> &rows, const std::string &flavor) {
  std::ostringstream os;
  os << "flavor,vertices,genus,dimension,status\n";
  for (auto &r : rows)
    os << flavor << "," << r.vertices << "," << r.genus << "," << r.dim << ","
       << (r.exact ? "exact" : "bound") << "\n";
  return os.str();
}

} // namespace taut
