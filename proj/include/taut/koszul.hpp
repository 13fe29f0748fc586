#pragma once

// Koszul sign bookkeeping.  A term's odd content is flattened into a word of
// parities; every structural operation is a permutation / deletion /
// insertion of letters and its sign is the parity of the number of
// transpositions of odd letters.

#include <cstdint>
#include <vector>

namespace taut {

// sign of sorting `perm` into increasing order counting only swaps where
// both letters are odd; perm[i] = original position of the letter now at i,
// parity indexed by original position
inline int koszul_perm_sign(const std::vector<int> &perm,
                            const std::vector<uint8_t> &parity) {
  int sign = 1;
  const int n = static_cast<int>(perm.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (perm[i] > perm[j] && parity[perm[i]] && parity[perm[j]]) sign = -sign;
  return sign;
}

// plain permutation sign (all letters odd)
inline int perm_sign(const std::vector<int> &perm) {
  int sign = 1;
  const int n = static_cast<int>(perm.size());
  std::vector<bool> seen(n, false);
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

// sign of moving the letter at `from` to position `to` (letters between shift
// by one); only crossings of odd letters count
inline int koszul_move_sign(int from, int to, const std::vector<uint8_t> &parity) {
  if (!parity[from]) return 1;
  int crossings = 0;
  int lo = std::min(from, to), hi = std::max(from, to);
  for (int i = lo; i <= hi; ++i)
    if (i != from && parity[i]) ++crossings;
  return (crossings % 2) ? -1 : 1;
}

} // namespace taut
