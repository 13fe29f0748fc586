#pragma once

#include <gmpxx.h>
#include <cstdint>
#include <string>

namespace taut {

using Q = mpq_class;
using Z = mpz_class;

inline Q q_of(long num, long den = 1) { Q q(num, den); q.canonicalize(); return q; }

inline std::string q_str(const Q &q) { return q.get_str(); }

inline Q factorial(int n) {
  Z r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return Q(r);
}

inline Q binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Z r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Q(r);
}

} // namespace taut
