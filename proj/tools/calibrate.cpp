// Normalization calibration: runs the shifted Delta-Lie identity battery and
// the anchored master-equation checks over every normalization profile and
// prints which ones survive.  Development tool, not part of the test suite.

#include "taut/cohft.hpp"
#include "taut/conv.hpp"

#include <cstdio>
#include <random>

using namespace taut;

namespace {

std::mt19937 rng(12345);

DecGraph rand_single(const Ctx &ctx, int g, int n) {
  DecGraph gr;
  gr.genus = {g};
  gr.vdec = {TautMonomial{}};
  for (int i = 0; i < n; ++i) {
    gr.leg_vertex.push_back(0);
    gr.leaf.push_back(static_cast<int>(rng() % ctx.A.dim));
  }
  return gr;
}

// random homogeneous-parity element supported on 1- and 2-vertex graphs
ConvElement rand_elem(const Ctx &ctx, int parity, int seed) {
  rng.seed(seed);
  ConvElement e;
  int tries = 0;
  while (e.term_count() < 3 && tries < 400) {
    ++tries;
    int g = static_cast<int>(rng() % 2);
    int n = 3 + static_cast<int>(rng() % 2) - 2 * g;
    if (2 * g + n <= 2) n = 3;
    DecGraph gr;
    if (rng() % 3 == 0) {
      // 2-vertex graph
      DecGraph a = rand_single(ctx, 0, 3), b = rand_single(ctx, g, n);
      std::vector<std::vector<int>> pa, pb;
      gr = graft(a, 0, b, 0, pa, pb);
    } else {
      gr = rand_single(ctx, g, n);
    }
    if (class_parity(ctx, gr) != parity) continue;
    Q c(static_cast<long>(1 + rng() % 5), static_cast<long>(1 + rng() % 3));
    ConvElement t;
    t.add_term(ctx, gr, CoeffPoly(c * orbit_of(ctx, gr)));
    e += t;
  }
  return e;
}

struct Battery {
  bool delta_sq = true, d_delta = true, d_sq = true, sym = true, jacobi = true;
  bool deriv_delta = true, deriv_d = true;
  bool tqft = true, pz0 = true, pz1 = true;
  bool anchor6 = true;
  int ds_delta = 0, ds_d = 0; // derivation signs that worked (+1/-1), 0 = none
};

bool run_profile(Norms nm, Battery &B, bool verbose) {
  Ctx ctx;
  ctx.A = pz_space(1);
  ctx.trunc.filt_max = 5;
  ctx.trunc.hbar_max = 3;
  ctx.trunc.vertex_max = 4;
  ctx.norms = nm;

  auto d = [&](const ConvElement &x) { return d_gA(ctx, x); };
  auto D = [&](const ConvElement &x) { return delta_op(ctx, x); };
  auto br = [&](const ConvElement &x, const ConvElement &y) { return bracket(ctx, x, y); };

  for (int seed = 1; seed <= 4; ++seed) {
    int px = seed % 2, py = (seed / 2) % 2;
    ConvElement x = rand_elem(ctx, px, seed);
    ConvElement y = rand_elem(ctx, py, seed + 100);
    ConvElement z = rand_elem(ctx, 0, seed + 200);

    if (!D(D(x)).is_zero()) B.delta_sq = false;
    if (!(d(D(x)) + D(d(x))).is_zero()) B.d_delta = false;
    if (!d(d(x)).is_zero()) B.d_sq = false;

    // symmetry {x,y} = (-1)^{|x||y|} {y,x}
    ConvElement s1 = br(x, y);
    ConvElement s2 = br(y, x).scaled(Q((px && py) ? -1 : 1));
    if (!(s1 - s2).is_zero()) B.sym = false;

    // shifted Jacobi
    auto jterm = [&](const ConvElement &a, const ConvElement &b, const ConvElement &c,
                     int pa, int pb, int pc) {
      int sgn = ((pa + 1) * (pb + pc)) % 2 ? -1 : 1;
      return br(br(a, b), c).scaled(1), sgn; // placeholder
    };
    (void)jterm;
    {
      int pz = 0;
      ConvElement j1 = br(br(x, y), z);
      ConvElement j2 = br(br(y, z), x).scaled(Q(((px + 1) * (py + pz)) % 2 ? -1 : 1));
      ConvElement j3 = br(br(z, x), y).scaled(Q(((pz + 1) * (px + py)) % 2 ? -1 : 1));
      if (!(j1 + j2 + j3).is_zero()) B.jacobi = false;
    }

    // derivation properties with both sign conventions
    {
      ConvElement lhs = D(br(x, y));
      ConvElement rp = br(D(x), y) + br(x, D(y)).scaled(Q(px ? -1 : 1));
      ConvElement rm = br(D(x), y) + br(x, D(y)).scaled(Q(px ? 1 : -1));
      bool okp = (lhs - rp).is_zero(), okm = (lhs - rm).is_zero();
      if (okp)
        B.ds_delta = B.ds_delta == -1 ? 2 : 1;
      else if (okm)
        B.ds_delta = B.ds_delta == 1 ? 2 : -1;
      else
        B.deriv_delta = false;

      ConvElement lhd = d(br(x, y));
      ConvElement rdp = br(d(x), y) + br(x, d(y)).scaled(Q(px ? -1 : 1));
      ConvElement rdm = br(d(x), y) + br(x, d(y)).scaled(Q(px ? 1 : -1));
      bool okdp = (lhd - rdp).is_zero(), okdm = (lhd - rdm).is_zero();
      if (okdp)
        B.ds_d = B.ds_d == -1 ? 2 : 1;
      else if (okdm)
        B.ds_d = B.ds_d == 1 ? 2 : -1;
      else
        B.deriv_d = false;
    }
  }

  // anchored master equations
  {
    Ctx c1 = ctx;
    c1.A = rank_one_space();
    ConvElement tq = frobenius_tqft(c1, rank_one_frobenius());
    if (!master_residual(c1, tq).is_zero()) B.tqft = false;

    Ctx c0 = ctx;
    c0.A = pz_space(0);
    if (!master_residual(c0, pz_alpha(c0, 0)).is_zero()) B.pz0 = false;
    if (!master_residual(ctx, pz_alpha(ctx, 1)).is_zero()) B.pz1 = false;

    // the spec anchor: Delta on a (0,4) vertex with four paired legs
    DecGraph g4;
    g4.genus = {0};
    g4.vdec = {TautMonomial{}};
    for (int i = 0; i < 4; ++i) {
      g4.leg_vertex.push_back(0);
      g4.leaf.push_back(0);
    }
    ConvElement e4;
    e4.add_term(c1, g4, CoeffPoly(orbit_of(c1, g4)));
    ConvElement d4 = delta_op(c1, e4);
    Q got = 0;
    for (auto &[gn, m] : d4.comp)
      for (auto &[k, c] : m) got = c.scalar();
    B.anchor6 = (got == 6);
    if (verbose) std::printf("  anchor Delta coefficient: %s\n", got.get_str().c_str());
  }
  return true;
}

} // namespace

int main() {
  for (int dm = 0; dm <= 1; ++dm)
    for (int bm = 0; bm <= 1; ++bm)
      for (int d1 = 0; d1 <= 1; ++d1) {
        Norms nm;
        nm.delta_mode = dm;
        nm.bracket_mode = bm;
        nm.d1_mode = d1;
        Battery B;
        run_profile(nm, B, true);
        std::printf(
            "delta=%d bracket=%d d1=%d | D2=%d dD=%d d2=%d sym=%d jac=%d derD=%d(%d) "
            "derd=%d(%d) tqft=%d pz0=%d pz1=%d anchor6=%d\n",
            dm, bm, d1, B.delta_sq, B.d_delta, B.d_sq, B.sym, B.jacobi, B.deriv_delta,
            B.ds_delta, B.deriv_d, B.ds_d, B.tqft, B.pz0, B.pz1, B.anchor6);
      }
  return 0;
}
