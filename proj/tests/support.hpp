#pragma once

#include "polymv/random.hpp"
#include "polymv/rational.hpp"

#include <algorithm>
#include <set>
#include <vector>

namespace testing {

// m distinct rationals p/q in (0, 1], sorted; the last one is 1 when `ends_at_one`.
inline std::vector<polymv::Rational> random_alphas(polymv::Rng& rng, int m, bool ends_at_one) {
  std::set<polymv::Rational> picked;
  if (ends_at_one) picked.insert(polymv::Rational(1));
  while (static_cast<int>(picked.size()) < m) {
    const long q = rng.uniform_int(2, 40);
    const long p = rng.uniform_int(1, q - 1);
    picked.insert(polymv::ratio(p, q));
  }
  return {picked.begin(), picked.end()};
}

inline polymv::RationalPoint random_point(polymv::Rng& rng, int n) {
  polymv::RationalPoint x;
  for (int i = 0; i < n; ++i) x.push_back(polymv::ratio(rng.uniform_int(-20, 20), rng.uniform_int(1, 9)));
  return x;
}

}  // namespace testing
