#pragma once

// Coefficients of graph terms live in Q[hbar, s].  The s variable only
// appears while tracking the Manin--Zograf parameter of the Hodge element;
// evaluation at s = 1/hbar may create negative hbar exponents transiently,
// so exponents are signed and callers check positivity at the end.

#include "taut/rational.hpp"

#include <map>
#include <stdexcept>
#include <utility>

namespace taut {

struct CoeffPoly {
  // (hbar exponent, s exponent) -> coefficient, no zero entries stored
  std::map<std::pair<int, int>, Q> terms;

  CoeffPoly() = default;
  explicit CoeffPoly(const Q &c, int h = 0, int s = 0) {
    if (c != 0) terms[{h, s}] = c;
  }

  bool zero() const { return terms.empty(); }

  void add(const Q &c, int h = 0, int s = 0) {
    if (c == 0) return;
    auto key = std::make_pair(h, s);
    auto it = terms.find(key);
    if (it == terms.end()) {
      terms.emplace(key, c);
    } else {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }

  CoeffPoly &operator+=(const CoeffPoly &o) {
    for (auto &[k, c] : o.terms) add(c, k.first, k.second);
    return *this;
  }

  CoeffPoly operator*(const CoeffPoly &o) const {
    CoeffPoly r;
    for (auto &[k1, c1] : terms)
      for (auto &[k2, c2] : o.terms)
        r.add(c1 * c2, k1.first + k2.first, k1.second + k2.second);
    return r;
  }

  CoeffPoly operator*(const Q &c) const {
    CoeffPoly r;
    for (auto &[k, v] : terms) r.add(v * c, k.first, k.second);
    return r;
  }

  CoeffPoly shifted(int dh, int ds = 0) const {
    CoeffPoly r;
    for (auto &[k, v] : terms) r.add(v, k.first + dh, k.second + ds);
    return r;
  }

  // drops hbar powers above the cap; returns number of dropped terms
  int truncate_hbar(int hmax) {
    int dropped = 0;
    for (auto it = terms.begin(); it != terms.end();) {
      if (it->first.first > hmax) {
        it = terms.erase(it);
        ++dropped;
      } else {
        ++it;
      }
    }
    return dropped;
  }

  // substitute s = hbar^{-1}
  CoeffPoly eval_s_inv_hbar() const {
    CoeffPoly r;
    for (auto &[k, v] : terms) r.add(v, k.first - k.second, 0);
    return r;
  }

  bool has_negative_hbar() const {
    for (auto &[k, v] : terms)
      if (k.first < 0) return true;
    return false;
  }

  bool has_s() const {
    for (auto &[k, v] : terms)
      if (k.second != 0) return true;
    return false;
  }

  // the plain rational value, valid only when no hbar/s present
  Q scalar() const {
    if (terms.empty()) return 0;
    if (terms.size() != 1 || terms.begin()->first != std::make_pair(0, 0))
      throw std::runtime_error("CoeffPoly: not a scalar");
    return terms.begin()->second;
  }

  bool operator==(const CoeffPoly &o) const { return terms == o.terms; }

  std::string str() const {
    if (terms.empty()) return "0";
    std::string s;
    for (auto &[k, v] : terms) {
      if (!s.empty()) s += " + ";
      s += v.get_str();
      if (k.first) s += "*hbar^" + std::to_string(k.first);
      if (k.second) s += "*s^" + std::to_string(k.second);
    }
    return s;
  }
};

} // namespace taut
